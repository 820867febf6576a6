#ifndef BUYBACK_RATIONAL_HPP
#define BUYBACK_RATIONAL_HPP

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <string>
#include <string_view>

#include "buyback/errors.hpp"

namespace buyback {

/// Exact arbitrary-precision rational. Always kept canonical.
using Rational = mpq_class;

inline Rational make_rational(long num, unsigned long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Formats as "num/den", denominator always present ("5/1").
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "num/den", a bare integer, or a plain decimal ("0.25").
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw InputError("empty rational literal");

  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw InputError("bad rational literal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    mpz_class num;
    if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0) {
      throw InputError("bad decimal literal: " + s);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  Rational q;
  if (q.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
  if (q.get_den() == 0) throw InputError("zero denominator in: " + s);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Smallest multiple of 1/denominator that is >= value.
inline Rational ceil_to_grid(const Rational& value, const mpz_class& denominator) {
  mpz_class scaled_num = value.get_num() * denominator;
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), value.get_den().get_mpz_t());
  Rational out(q, denominator);
  out.canonicalize();
  return out;
}

/// Nonnegative exact weight of a ground-set element.
class Weight {
 public:
  Weight() = default;
  explicit Weight(Rational v) : value_(std::move(v)) {
    value_.canonicalize();
    if (sgn(value_) < 0) throw InputError("weight must be nonnegative, got " + to_fraction_string(value_));
  }
  explicit Weight(long v) : Weight(Rational(v)) {}

  static Weight parse(std::string_view text) { return Weight(parse_rational(text)); }

  const Rational& value() const { return value_; }
  std::string str() const { return to_fraction_string(value_); }
  double to_double() const { return value_.get_d(); }

  friend bool operator==(const Weight& a, const Weight& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_{0};
};

}  // namespace buyback

#endif  // BUYBACK_RATIONAL_HPP
