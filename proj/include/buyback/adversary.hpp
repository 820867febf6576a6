#ifndef BUYBACK_ADVERSARY_HPP
#define BUYBACK_ADVERSARY_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "buyback/engine.hpp"
#include "buyback/offline.hpp"
#include "buyback/ratio.hpp"

namespace buyback {

// ---------------------------------------------------------------------------
// Rewinding adversary on a growing bipartite graph (two partition matroids,
// capacity 1 per vertex).

struct EdgeArrival {
  Element edge;
  std::size_t left = 0;   // vertex on side 1
  std::size_t right = 0;  // vertex on side 2
};

/// Deterministic online matching algorithm that can be rewound.
template <class A>
concept RewindableMatchingAlgorithm = requires(A& a, const A& ca, const EdgeArrival& e,
                                               const typename A::Snapshot& s) {
  { a.offer(e) } -> std::same_as<bool>;
  { ca.snapshot() } -> std::same_as<typename A::Snapshot>;
  a.restore(s);
  { ca.held() } -> std::convertible_to<IdSet>;
};

/// Drives a BuybackEngine over two partition matroids revealed edge by edge.
class EngineMatchingAdapter {
 public:
  using Snapshot = BuybackEngine::Snapshot;

  EngineMatchingAdapter(Rational f, Rational r, Variant variant = Variant::Algorithm1)
      : engine_(Params::make(2, std::move(f), std::move(r)), {Partition{}, Partition{}}, variant) {}

  static EngineMatchingAdapter with_optimal_threshold(Rational f, Variant variant = Variant::Algorithm1) {
    Rational r = optimal_r_rational(2, f);
    return EngineMatchingAdapter(std::move(f), std::move(r), variant);
  }

  bool offer(const EdgeArrival& a) {
    auto& ms = engine_.mutable_state().matroids;
    reveal(std::get<Partition>(ms[0]), a.edge.id, a.left);
    reveal(std::get<Partition>(ms[1]), a.edge.id, a.right);
    return engine_.process(a.edge).accepted();
  }

  Snapshot snapshot() const { return engine_.snapshot(); }
  void restore(const Snapshot& s) { engine_.restore(s); }
  IdSet held() const { return engine_.state().current_ids(); }
  Rational utility() const { return engine_.utility(); }
  const BuybackEngine& engine() const { return engine_; }

 private:
  static void reveal(Partition& p, ElementId id, std::size_t vertex) {
    if (p.capacity.size() <= vertex) p.capacity.resize(vertex + 1, 1);
    p.class_of[id] = vertex;
  }

  BuybackEngine engine_;
};

/// Keeps the first edge at each vertex forever; never cancels.
class NeverCancelMatching {
 public:
  struct Snapshot {
    std::map<std::size_t, ElementId> left_owner;
    std::map<std::size_t, ElementId> right_owner;
    IdSet held;
  };

  bool offer(const EdgeArrival& a) {
    if (s_.left_owner.count(a.left) || s_.right_owner.count(a.right)) return false;
    s_.left_owner[a.left] = a.edge.id;
    s_.right_owner[a.right] = a.edge.id;
    s_.held = with_element(s_.held, a.edge.id);
    return true;
  }
  Snapshot snapshot() const { return s_; }
  void restore(const Snapshot& s) { s_ = s; }
  IdSet held() const { return s_.held; }

 private:
  Snapshot s_;
};

enum class ProbeSearch { Linear, Gallop };

struct K2AdversaryOptions {
  Rational f{0};
  Rational eps{1, 10000};
  std::size_t max_steps = 30;
  Rational weight_cap{1000000};
  std::size_t max_probes_per_step = 10000000;
  ProbeSearch search = ProbeSearch::Gallop;
};

struct AdversaryEdge {
  ElementId id = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  Rational weight{0};
  char role = 'x';  // 'x' accepted chain, 'y' foregone
};

struct AdversaryReport {
  std::vector<Rational> x;  // x_1 = 1
  std::vector<Rational> y;
  std::vector<std::size_t> probes_per_step;
  std::vector<Rational> utility_trajectory;  // u_i = x_i - f sum_{j<i} x_j
  std::vector<Rational> opt_trajectory;      // sum_{j<=i} y_j + x_{i+1} - eps
  std::optional<Rational> best_ratio_lower_bound;
  std::vector<AdversaryEdge> edges;
  Rational eps{0};
  Rational f{0};
  std::string stop_reason;
  bool diverged = false;
  std::optional<Rational> divergence_ratio;  // evidence when the algorithm stops cancelling below the cap
};

namespace detail {

struct ChainGeometry {
  std::size_t x_left, x_right;  // ex_i endpoints
  bool x_end_is_right;          // end of ex_i at which ex_{i+1} attaches
};

}  // namespace detail

/// Runs the rewinding construction against `alg`.
///
/// At each step a probe of weight t*eps is first offered at the "y" end of
/// the held edge; the smallest accepting level t is located (linear scan
/// or exponential+bisection search, both from the same snapshot). The
/// committed history then presents the y edge at level t-1 (rejected, by
/// determinism) followed by the x edge at level t at the other end, so
/// x_{i+1} - y_i <= eps. If at some level the y probe is rejected but the
/// x probe is accepted, that trial is committed as is.
template <RewindableMatchingAlgorithm Alg>
AdversaryReport k2_adversary(Alg& alg, const K2AdversaryOptions& opt) {
  if (!(sgn(opt.eps) > 0)) throw DomainError("k2_adversary: eps must be positive");
  AdversaryReport rep;
  rep.eps = opt.eps;
  rep.f = opt.f;

  ElementId next_id = 0;
  std::size_t next_left = 0;
  std::size_t next_right = 0;

  auto make_probe = [&](bool at_right_end, const detail::ChainGeometry& g, const Rational& w) {
    EdgeArrival a;
    a.edge = Element{next_id++, Weight(w)};
    if (at_right_end) {
      a.right = g.x_right;
      a.left = next_left++;
    } else {
      a.left = g.x_left;
      a.right = next_right++;
    }
    return a;
  };

  EdgeArrival first{Element{next_id++, Weight(1)}, next_left++, next_right++};
  if (!alg.offer(first)) {
    rep.stop_reason = "first_edge_rejected";
    rep.diverged = true;
    return rep;
  }
  rep.x.push_back(1);
  rep.edges.push_back(AdversaryEdge{first.edge.id, first.left, first.right, 1, 'x'});
  detail::ChainGeometry geo{first.left, first.right, true};
  ElementId held_edge = first.edge.id;
  Rational canceled_sum = 0;
  Rational y_sum = 0;

  for (std::size_t step = 1; step <= opt.max_steps; ++step) {
    const auto base = alg.snapshot();
    std::size_t probes = 0;
    const std::size_t saved_left = next_left, saved_right = next_right;
    const ElementId saved_id = next_id;

    struct Trial {
      bool y_accepted = false;
      bool x_accepted = false;
      EdgeArrival y, x;
    };
    // y probe at level t; if rejected, x probe at level t as well
    auto trial = [&](const mpz_class& t, bool with_x) {
      alg.restore(base);
      next_left = saved_left;
      next_right = saved_right;
      next_id = saved_id;
      Trial tr;
      const Rational w = Rational(t) * opt.eps;
      tr.y = make_probe(!geo.x_end_is_right, geo, w);
      ++probes;
      tr.y_accepted = alg.offer(tr.y);
      if (!tr.y_accepted && with_x) {
        tr.x = make_probe(geo.x_end_is_right, geo, w);
        ++probes;
        tr.x_accepted = alg.offer(tr.x);
      }
      return tr;
    };

    const mpz_class cap_level = [&] {
      Rational q = opt.weight_cap / opt.eps;
      mpz_class c;
      mpz_fdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      return c;
    }();

    std::optional<Trial> committed;
    std::optional<mpz_class> first_accept;  // smallest level at which the y probe is accepted
    bool probe_limit = false;

    if (opt.search == ProbeSearch::Linear) {
      for (mpz_class t = 1;; ++t) {
        if (t > cap_level) {
          break;
        }
        if (probes >= opt.max_probes_per_step) {
          probe_limit = true;
          break;
        }
        Trial tr = trial(t, true);
        if (tr.y_accepted) {
          first_accept = t;
          break;
        }
        if (tr.x_accepted) {
          committed = tr;
          break;
        }
      }
    } else {
      mpz_class lo = 0;  // y rejected at lo (level 0 treated as rejected)
      mpz_class hi = 1;
      bool found = false;
      while (true) {
        if (hi > cap_level) hi = cap_level;
        if (hi <= lo) {
          break;
        }
        Trial tr = trial(hi, true);
        if (tr.y_accepted) {
          found = true;
          break;
        }
        if (tr.x_accepted) {
          committed = tr;
          break;
        }
        lo = hi;
        if (hi == cap_level) {
          break;
        }
        hi *= 2;
      }
      if (found) {
        while (hi - lo > 1) {
          mpz_class mid = (lo + hi) / 2;
          Trial tr = trial(mid, false);
          if (tr.y_accepted) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        first_accept = hi;
      }
    }

    if (first_accept && !committed) {
      alg.restore(base);
      next_left = saved_left;
      next_right = saved_right;
      next_id = saved_id;
      Trial tr;
      tr.y = make_probe(!geo.x_end_is_right, geo, Rational(*first_accept - 1) * opt.eps);
      tr.y_accepted = alg.offer(tr.y);
      ++probes;
      if (tr.y_accepted) {
        throw ProtocolError("k2_adversary: replayed probe was accepted (non-deterministic algorithm or zero weight)");
      }
      tr.x = make_probe(geo.x_end_is_right, geo, Rational(*first_accept) * opt.eps);
      tr.x_accepted = alg.offer(tr.x);
      ++probes;
      if (!tr.x_accepted) {
        throw ProtocolError("k2_adversary: algorithm rejected the x probe after accepting the same weight at the other end");
      }
      committed = tr;
    }

    rep.probes_per_step.push_back(probes);
    const Rational& xi = rep.x.back();
    Rational ui = xi - opt.f * canceled_sum;
    ui.canonicalize();

    if (!committed) {
      // both ends refused up to the cap: leave a final refused pair in place
      rep.stop_reason = probe_limit ? "probe_limit" : "weight_cap";
      rep.diverged = true;
      alg.restore(base);
      next_left = saved_left;
      next_right = saved_right;
      next_id = saved_id;
      const Rational w = Rational(cap_level) * opt.eps;
      EdgeArrival yy = make_probe(!geo.x_end_is_right, geo, w);
      EdgeArrival xx = make_probe(geo.x_end_is_right, geo, w);
      const bool ya = alg.offer(yy);
      const bool xa = alg.offer(xx);
      if (!ya && !xa && sgn(ui) > 0) {
        Rational r = (y_sum + 2 * w) / ui;
        r.canonicalize();
        rep.divergence_ratio = r;
        if (!rep.best_ratio_lower_bound || r > *rep.best_ratio_lower_bound) rep.best_ratio_lower_bound = r;
      }
      return rep;
    }

    const Trial& tr = *committed;
    const IdSet held = alg.held();
    if (contains(held, held_edge) || !contains(held, tr.x.edge.id) || held.size() != 1) {
      throw ProtocolError("k2_adversary: algorithm does not hold exactly the accepted probe");
    }
    const Rational x_next = tr.x.edge.weight.value();
    const Rational y_i = tr.y.edge.weight.value();
    rep.y.push_back(y_i);
    rep.x.push_back(x_next);
    rep.edges.push_back(AdversaryEdge{tr.y.edge.id, tr.y.left, tr.y.right, y_i, 'y'});
    rep.edges.push_back(AdversaryEdge{tr.x.edge.id, tr.x.left, tr.x.right, x_next, 'x'});
    y_sum += y_i;

    Rational opt_i = y_sum + x_next - opt.eps;
    opt_i.canonicalize();
    rep.utility_trajectory.push_back(ui);
    rep.opt_trajectory.push_back(opt_i);
    if (sgn(ui) > 0) {
      Rational ratio = opt_i / ui;
      ratio.canonicalize();
      if (!rep.best_ratio_lower_bound || ratio > *rep.best_ratio_lower_bound) rep.best_ratio_lower_bound = ratio;
    }

    canceled_sum += xi;
    held_edge = tr.x.edge.id;
    // ex_{i+1} shares one endpoint with ex_i; its other endpoint is fresh
    geo = detail::ChainGeometry{tr.x.left, tr.x.right, !geo.x_end_is_right};

    if (x_next > opt.weight_cap) {
      rep.stop_reason = "weight_cap";
      return rep;
    }
  }
  rep.stop_reason = "max_steps";
  return rep;
}

/// At every committed step i the edges {ey_1..ey_i} plus a copy of ex_{i+1}
/// form a matching. Checked with partition-matroid oracles.
inline bool verify_adversary_feasibility(const AdversaryReport& rep) {
  Partition left_side, right_side;
  ElementId next_virtual = std::numeric_limits<ElementId>::max();
  auto reveal = [](Partition& p, ElementId id, std::size_t v) {
    if (p.capacity.size() <= v) p.capacity.resize(v + 1, 1);
    p.class_of[id] = v;
  };
  IdSet ys;
  std::size_t seen_y = 0;
  for (const auto& e : rep.edges) {
    reveal(left_side, e.id, e.left);
    reveal(right_side, e.id, e.right);
  }
  for (std::size_t idx = 0; idx < rep.edges.size(); ++idx) {
    const auto& e = rep.edges[idx];
    if (e.role != 'y') continue;
    ys.push_back(e.id);
    ++seen_y;
    if (idx + 1 >= rep.edges.size()) return false;
    const auto& next_x = rep.edges[idx + 1];
    const ElementId virt = next_virtual--;
    reveal(left_side, virt, next_x.left);
    reveal(right_side, virt, next_x.right);
    IdSet trial = make_id_set(ys);
    trial.push_back(virt);
    const MatroidDescriptor m1 = left_side, m2 = right_side;
    if (!is_independent(m1, trial) || !is_independent(m2, trial)) return false;
  }
  return seen_y == rep.y.size();
}

struct SequenceResidual {
  std::size_t i = 0;
  Rational raw{0};       // beta(x_i - f sum_{j<i} x_j) - (x_{i+1} + sum_{j=2}^{i+1} x_j - (i+2) eps)
  bool raw_ok = true;
  std::optional<Rational> rescaled;  // same inequality after dropping x_1 and scaling x_2 to 1, with slack
  bool rescaled_ok = true;
};

/// Per-step residuals of the inequalities a beta-competitive algorithm must satisfy.
inline std::vector<SequenceResidual> verify_sequence_inequality(const AdversaryReport& rep, double beta,
                                                               const Rational& f, int k = 2) {
  if (k != 2) throw UnsupportedOperation("verify_sequence_inequality: only k = 2 is constructed");
  const Rational b(beta);
  const auto& x = rep.x;  // x[0] is x_1
  std::vector<SequenceResidual> out;
  if (x.size() < 2) return out;

  Rational prefix = 0;  // sum_{j<i} x_j
  for (std::size_t i = 1; i + 1 <= x.size() - 1 + 1 && i < x.size(); ++i) {
    SequenceResidual res;
    res.i = i;
    Rational tail = 0;  // sum_{j=2}^{i+1} x_j
    for (std::size_t j = 2; j <= i + 1; ++j) tail += x[j - 1];
    const Rational lhs = b * (x[i - 1] - f * prefix);
    const Rational rhs = x[i] + tail - Rational(static_cast<long>(i + 2)) * rep.eps;
    res.raw = lhs - rhs;
    res.raw.canonicalize();
    res.raw_ok = sgn(res.raw) >= 0;

    if (i >= 2) {
      // rescaled sequence x'_m = x_{m+1} / x_2, m = i - 1
      const Rational& x2 = x[1];
      const std::size_t m = i - 1;
      auto xs = [&](std::size_t mm) { return x[mm] / x2; };  // x'_mm = x_{mm+1}/x_2 = x[mm]/x2
      Rational pre = 0;
      for (std::size_t j = 1; j < m; ++j) pre += xs(j);
      Rational all = 0;
      for (std::size_t j = 1; j <= m + 1; ++j) all += xs(j);
      const Rational lhs2 = b * (xs(m) - f * pre);
      const Rational rhs2 = xs(m + 1) + Rational(k - 1) * all - Rational(static_cast<long>(m + 3)) * rep.eps / x2;
      Rational r2 = lhs2 - rhs2;
      r2.canonicalize();
      res.rescaled = r2;
      res.rescaled_ok = sgn(r2) >= 0;
    }
    out.push_back(std::move(res));
    prefix += x[i - 1];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second-order recurrence k z_{i+1} = (1+beta) z_i - beta(1+f) z_{i-1}.

struct ZSequence {
  double beta = 0;
  int k = 1;
  double f = 0;
  // true z_i = z[i] * exp(log_scale[i]); values are renormalized to avoid overflow
  std::vector<double> z;
  std::vector<double> log_scale;
  double discriminant = 0;
  std::optional<std::size_t> first_negative_index;
};

constexpr double kNegativityThreshold = 1e-12;

inline double discriminant(double beta, int k, double f) {
  return (1 + beta) * (1 + beta) - 4.0 * k * beta * (1 + f);
}

namespace detail {

inline bool below_threshold(double value, double log_scale) {
  if (!(value < 0)) return false;
  return std::log(-value) + log_scale > std::log(kNegativityThreshold);
}

}  // namespace detail

inline ZSequence z_sequence(double beta, int k, double f, std::size_t n_terms) {
  if (!(beta > 0)) throw DomainError("z_sequence: beta must be positive");
  if (n_terms < 2) throw DomainError("z_sequence: need at least two terms");
  if (k < 1) throw DomainError("z_sequence: k must be >= 1");
  ZSequence zs;
  zs.beta = beta;
  zs.k = k;
  zs.f = f;
  zs.discriminant = discriminant(beta, k, f);
  zs.z.reserve(n_terms);
  zs.log_scale.reserve(n_terms);
  zs.z = {0.0, 1.0};
  zs.log_scale = {0.0, 0.0};
  double prev = 0.0, cur = 1.0, scale = 0.0;
  for (std::size_t i = 2; i < n_terms; ++i) {
    const double next = ((1 + beta) * cur - beta * (1 + f) * prev) / k;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e100 || (mag < 1e-100 && mag > 0)) {
      prev /= mag;
      cur /= mag;
      scale += std::log(mag);
    }
    zs.z.push_back(cur);
    zs.log_scale.push_back(scale);
    if (!zs.first_negative_index && detail::below_threshold(cur, scale)) zs.first_negative_index = i;
  }
  return zs;
}

struct PositivityResult {
  bool consistent = true;
  std::optional<std::size_t> refuted_at;
  std::size_t terms_examined = 0;
};

inline PositivityResult positivity_check(const ZSequence& zs) {
  PositivityResult out;
  out.terms_examined = zs.z.size();
  if (zs.first_negative_index) {
    out.consistent = false;
    out.refuted_at = zs.first_negative_index;
    out.terms_examined = *zs.first_negative_index + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Star adversary for general downward-closed systems (independent sets of a
// graph revealed vertex by vertex).

struct VertexArrival {
  Element vertex;
  IdSet neighbors;  // among earlier vertices
};

template <class A>
concept FamilyOnlineAlgorithm = requires(A& a, const A& ca, const VertexArrival& v) {
  { a.offer(v) } -> std::same_as<bool>;
  { ca.held() } -> std::convertible_to<IdSet>;
  { ca.utility() } -> std::convertible_to<Rational>;
};

constexpr std::size_t kMaxGraphFamilyVertices = 22;

/// The independent sets of a graph as an explicit family of maximal sets.
inline ExplicitFamily graph_independence_family(const IdSet& vertices,
                                                const std::vector<std::pair<ElementId, ElementId>>& edges) {
  const std::size_t n = vertices.size();
  if (n > kMaxGraphFamilyVertices) throw SizeError("graph family: too many vertices");
  std::map<ElementId, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[vertices[i]] = i;
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [a, b] : edges) {
    const auto ia = pos.at(a), ib = pos.at(b);
    adj[ia] |= 1u << ib;
    adj[ib] |= 1u << ia;
  }
  ExplicitFamily fam;
  const std::uint32_t full = n == 0 ? 0u : ((n == 32) ? ~0u : ((1u << n) - 1u));
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    bool independent = true;
    std::uint32_t blocked = 0;
    for (std::size_t i = 0; i < n && independent; ++i) {
      if (!(mask & (1u << i))) continue;
      if (adj[i] & mask) independent = false;
      blocked |= adj[i];
    }
    if (independent && ((mask | blocked) & full) == full) {
      IdSet s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(vertices[i]);
      }
      fam.maximal_sets.push_back(std::move(s));
    }
    if (mask == full) break;
  }
  return fam;
}

/// Single-element baseline exposed as a vertex-arrival algorithm.
class BaselineFamilyAdapter {
 public:
  explicit BaselineFamilyAdapter(Rational f)
      : state_(Params::make(1, f, optimal_r_rational(1, f)), {ExplicitFamily{}}) {}

  bool offer(const VertexArrival& v) {
    vertices_.push_back(v.vertex.id);
    for (ElementId u : v.neighbors) edges_.push_back({u, v.vertex.id});
    state_.matroids[0] = graph_independence_family(make_id_set(vertices_), edges_);
    return process_single_element(state_, v.vertex).accepted();
  }
  IdSet held() const { return state_.current_ids(); }
  Rational utility() const { return buyback::utility(state_); }
  const AlgorithmState& state() const { return state_; }

 private:
  AlgorithmState state_;
  std::vector<ElementId> vertices_;
  std::vector<std::pair<ElementId, ElementId>> edges_;
};

struct StarReport {
  std::size_t n = 0;
  Rational eps{0};
  std::vector<Element> vertices;
  std::vector<std::pair<ElementId, ElementId>> edges;
  std::vector<ElementId> center_history;  // vertex each new arrival attached to
  bool held_neither = false;
  std::size_t swaps_to_leaf = 0;
  Rational utility{0};
  OptResult opt;
  Rational formula_bound{0};  // 1 + (n-2)(1-eps)
  std::optional<Rational> ratio;
};

template <FamilyOnlineAlgorithm Alg>
StarReport star_adversary(Alg& alg, std::size_t n, const Rational& eps) {
  if (n < 3) throw DomainError("star_adversary: n must be >= 3");
  if (!(sgn(eps) > 0 && eps < 1)) throw DomainError("star_adversary: eps must lie in (0, 1)");
  if (n > kMaxGraphFamilyVertices) throw SizeError("star_adversary: n too large for the offline optimum");
  StarReport rep;
  rep.n = n;
  rep.eps = eps;

  auto present = [&](ElementId id, const Rational& w, IdSet nbrs) {
    Element v{id, Weight(w)};
    rep.vertices.push_back(v);
    for (ElementId u : nbrs) rep.edges.push_back({u, id});
    return alg.offer(VertexArrival{v, std::move(nbrs)});
  };

  present(1, 1, {});
  present(2, 1, {1});
  IdSet held = alg.held();
  ElementId center = 1;
  if (contains(held, 1)) {
    center = 1;
  } else if (contains(held, 2)) {
    center = 2;
  } else {
    rep.held_neither = true;
  }
  for (ElementId id = 3; id <= n; ++id) {
    held = alg.held();
    if (!held.empty() && !contains(held, center)) {
      center = held.front();  // redirect to the current holding
    }
    rep.center_history.push_back(center);
    present(id, 1 - eps, {center});
    const IdSet after = alg.held();
    if (!after.empty() && after.front() >= 3 && !contains(held, after.front())) ++rep.swaps_to_leaf;
  }

  Instance inst;
  for (const auto& v : rep.vertices) inst.elements.push_back(v);
  IdSet ids;
  for (const auto& v : rep.vertices) {
    ids.push_back(v.id);
    inst.arrival_order.push_back(v.id);
  }
  inst.matroids.push_back(graph_independence_family(make_id_set(ids), rep.edges));
  rep.opt = brute_opt(inst);
  rep.utility = alg.utility();
  rep.formula_bound = 1 + Rational(static_cast<long>(n - 2)) * (1 - eps);
  rep.formula_bound.canonicalize();
  if (sgn(rep.utility) > 0) {
    Rational r = rep.opt.weight / rep.utility;
    r.canonicalize();
    rep.ratio = r;
  }
  return rep;
}

}  // namespace buyback

#endif  // BUYBACK_ADVERSARY_HPP
