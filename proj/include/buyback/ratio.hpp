#ifndef BUYBACK_RATIO_HPP
#define BUYBACK_RATIO_HPP

#include <cmath>

#include "buyback/errors.hpp"
#include "buyback/rational.hpp"

namespace buyback {

/// Threshold minimizing the competitive ratio: r = (1+f)(1 + sqrt(1 - 1/(k(1+f)))).
inline double optimal_r(int k, double f) {
  if (k < 1) throw DomainError("optimal_r: k must be >= 1");
  if (f < 0) throw DomainError("optimal_r: f must be >= 0");
  const double kf = k * (1.0 + f);
  return (1.0 + f) * (1.0 + std::sqrt(1.0 - 1.0 / kf));
}

/// c = (k r - 1) r / (r - 1 - f); requires r > 1 + f.
inline double competitive_ratio(int k, double f, double r) {
  if (k < 1) throw DomainError("competitive_ratio: k must be >= 1");
  if (!(r > 1.0 + f)) throw DomainError("competitive_ratio: needs r > 1 + f");
  return (k * r - 1.0) * r / (r - 1.0 - f);
}

/// Closed form of the ratio at the optimal threshold: k(1+f)(1 + sqrt(1 - 1/(k(1+f))))^2.
inline double optimal_competitive_ratio(int k, double f) {
  if (k < 1) throw DomainError("optimal_competitive_ratio: k must be >= 1");
  const double kf = k * (1.0 + f);
  const double s = 1.0 + std::sqrt(1.0 - 1.0 / kf);
  return kf * s * s;
}

inline Rational competitive_ratio_exact(int k, const Rational& f, const Rational& r) {
  if (k < 1) throw DomainError("competitive_ratio: k must be >= 1");
  if (!(r > 1 + f)) throw DomainError("competitive_ratio: needs r > 1 + f");
  Rational c = (Rational(k) * r - 1) * r / (r - 1 - f);
  c.canonicalize();
  return c;
}

/// Final-weight bound factor (k r - 1) r / (r - 1); requires r > 1.
inline Rational final_weight_factor(int k, const Rational& r) {
  if (!(r > 1)) throw DomainError("final_weight_factor: needs r > 1");
  Rational c = (Rational(k) * r - 1) * r / (r - 1);
  c.canonicalize();
  return c;
}

/// Exact rational upper approximation of optimal_r on the grid 1/denominator.
///
/// Returns the smallest m/denominator strictly above the true threshold, so
/// acceptance errs toward rejection and r > 1 + f holds even when k(1+f) = 1.
inline Rational optimal_r_rational(int k, const Rational& f, const mpz_class& denominator) {
  if (k < 1) throw DomainError("optimal_r: k must be >= 1");
  if (sgn(f) < 0) throw DomainError("optimal_r: f must be >= 0");
  const Rational one_plus_f = 1 + f;
  Rational a = 1 - 1 / (Rational(k) * one_plus_f);
  a.canonicalize();

  // m/D > (1+f)(1+sqrt(a))  <=>  t > 0 and t^2 > a, with t = m/(D(1+f)) - 1
  auto above = [&](const mpz_class& m) {
    Rational t = Rational(m, denominator) / one_plus_f - 1;
    t.canonicalize();
    return sgn(t) > 0 && t * t > a;
  };

  const double estimate = optimal_r(k, f.get_d()) * denominator.get_d();
  mpz_class m(std::floor(estimate));
  while (!above(m)) m += 1;
  while (m > 0 && above(m - 1)) m -= 1;
  Rational out(m, denominator);
  out.canonicalize();
  return out;
}

inline Rational optimal_r_rational(int k, const Rational& f) {
  return optimal_r_rational(k, f, mpz_class("1000000000000"));
}

}  // namespace buyback

#endif  // BUYBACK_RATIO_HPP
