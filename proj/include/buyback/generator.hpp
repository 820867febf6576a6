#ifndef BUYBACK_GENERATOR_HPP
#define BUYBACK_GENERATOR_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "buyback/adversary.hpp"
#include "buyback/instance.hpp"

namespace buyback {

enum class InstanceKind {
  BipartiteMatching,
  RandomPartitionIntersection,
  GraphicIntersection,
  Uniform,
  Mixed,  // each of the k constraints independently uniform, partition or graphic
  FreeDisposal,
  Star,
};

enum class ArrivalOrder { AsGenerated, Random, Ascending, Descending };

inline const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::BipartiteMatching: return "bipartite-matching";
    case InstanceKind::RandomPartitionIntersection: return "random-partition-intersection";
    case InstanceKind::GraphicIntersection: return "graphic-intersection";
    case InstanceKind::Uniform: return "uniform";
    case InstanceKind::Mixed: return "mixed";
    case InstanceKind::FreeDisposal: return "free-disposal";
    case InstanceKind::Star: return "star";
  }
  return "?";
}

inline InstanceKind parse_kind(const std::string& s) {
  for (auto k : {InstanceKind::BipartiteMatching, InstanceKind::RandomPartitionIntersection,
                 InstanceKind::GraphicIntersection, InstanceKind::Uniform, InstanceKind::Mixed,
                 InstanceKind::FreeDisposal, InstanceKind::Star}) {
    if (s == to_string(k)) return k;
  }
  throw InputError("unknown instance kind '" + s + "'");
}

inline const char* to_string(ArrivalOrder o) {
  switch (o) {
    case ArrivalOrder::AsGenerated: return "as-generated";
    case ArrivalOrder::Random: return "random";
    case ArrivalOrder::Ascending: return "ascending";
    case ArrivalOrder::Descending: return "descending";
  }
  return "?";
}

inline ArrivalOrder parse_order(const std::string& s) {
  for (auto o : {ArrivalOrder::AsGenerated, ArrivalOrder::Random, ArrivalOrder::Ascending, ArrivalOrder::Descending}) {
    if (s == to_string(o)) return o;
  }
  throw InputError("unknown arrival order '" + s + "'");
}

struct GeneratorConfig {
  std::uint64_t seed = 1;
  InstanceKind kind = InstanceKind::RandomPartitionIntersection;
  std::size_t n = 6;  // elements; left side for bipartite, impressions for free-disposal, vertices for star
  int k = 2;
  Weight f{0};
  std::optional<Weight> r;  // empty: optimal threshold
  Rational weight_lo{1};
  Rational weight_hi{10};
  ArrivalOrder order = ArrivalOrder::Random;
  bool distinct_weights = true;

  std::size_t right_n = 0;                  // bipartite right side (0: same as n)
  std::size_t advertisers = 2;              // free-disposal
  std::vector<std::size_t> capacities;      // free-disposal n(a); empty: random in {1, 2}
  Rational star_eps{1, 1000};
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the index-th instance of a batch.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ (index + 1));
}

/// BUYBACK_SEED replaces the configured seed when set.
inline std::uint64_t seed_override(std::uint64_t configured) {
  if (const char* env = std::getenv("BUYBACK_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end && *end == '\0') return v;
    throw InputError(std::string("BUYBACK_SEED is not an integer: ") + env);
  }
  return configured;
}

namespace detail {

// Modulo mapping keeps output identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : eng_() % bound; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

inline mpz_class ceil_div(const Rational& q) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline mpz_class floor_div(const Rational& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline Rational draw_weight(Rng& rng, const GeneratorConfig& cfg, std::size_t index) {
  const long d = rng.between(1, 16);
  const mpz_class lo = ceil_div(cfg.weight_lo * d);
  const mpz_class hi = floor_div(cfg.weight_hi * d);
  mpz_class a = lo;
  if (hi > lo) {
    const mpz_class span = hi - lo + 1;
    if (span.fits_slong_p()) a = lo + rng.below(span.get_ui());
  }
  Rational w(a, d);
  if (cfg.distinct_weights) w += Rational(static_cast<long>(index + 1), 1000000000L);
  w.canonicalize();
  return w;
}

inline Partition random_partition(Rng& rng, std::size_t n) {
  Partition p;
  const std::size_t classes = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::max<std::size_t>(1, n / 2 + 1))));
  for (std::size_t c = 0; c < classes; ++c) p.capacity.push_back(static_cast<std::size_t>(rng.between(1, 2)));
  for (std::size_t i = 0; i < n; ++i) p.class_of[static_cast<ElementId>(i)] = rng.below(classes);
  return p;
}

inline Graphic random_graphic(Rng& rng, std::size_t n) {
  Graphic g;
  g.vertex_count = static_cast<std::size_t>(rng.between(2, static_cast<std::int64_t>(std::max<std::size_t>(2, n / 2 + 2))));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = rng.below(g.vertex_count);
    std::size_t v = rng.below(g.vertex_count - 1);
    if (v >= u) ++v;
    g.endpoints[static_cast<ElementId>(i)] = {u, v};
  }
  return g;
}

inline buyback::Uniform random_uniform(Rng& rng, std::size_t n) {
  return buyback::Uniform{static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::max<std::size_t>(1, n))))};
}

inline void require_k(const GeneratorConfig& cfg, int k) {
  if (cfg.k != k) {
    throw InputError(std::string(to_string(cfg.kind)) + " instances need k = " + std::to_string(k) + ", got " +
                     std::to_string(cfg.k));
  }
}

}  // namespace detail

inline Instance gen(const GeneratorConfig& cfg) {
  if (cfg.k < 1) throw InputError("generator: k must be >= 1");
  if (sgn(cfg.weight_lo) < 0 || cfg.weight_hi < cfg.weight_lo) throw InputError("generator: bad weight range");
  detail::Rng rng(cfg.seed);
  Instance inst;
  inst.penalty_f = cfg.f;
  inst.threshold_r = cfg.r;

  auto add_elements = [&](std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      inst.elements.push_back(Element{static_cast<ElementId>(i), Weight(detail::draw_weight(rng, cfg, i))});
    }
  };

  switch (cfg.kind) {
    case InstanceKind::BipartiteMatching: {
      detail::require_k(cfg, 2);
      const std::size_t left = cfg.n;
      const std::size_t right = cfg.right_n ? cfg.right_n : cfg.n;
      if (left == 0 || right == 0) throw InputError("bipartite-matching: empty side");
      Partition by_left, by_right;
      by_left.capacity.assign(left, 1);
      by_right.capacity.assign(right, 1);
      for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t r = 0; r < right; ++r) {
          const auto id = static_cast<ElementId>(l * right + r);
          by_left.class_of[id] = l;
          by_right.class_of[id] = r;
        }
      }
      add_elements(left * right);
      inst.matroids = {by_left, by_right};
      break;
    }
    case InstanceKind::RandomPartitionIntersection:
      add_elements(cfg.n);
      for (int j = 0; j < cfg.k; ++j) inst.matroids.push_back(detail::random_partition(rng, cfg.n));
      break;
    case InstanceKind::GraphicIntersection:
      add_elements(cfg.n);
      for (int j = 0; j < cfg.k; ++j) inst.matroids.push_back(detail::random_graphic(rng, cfg.n));
      break;
    case InstanceKind::Uniform:
      add_elements(cfg.n);
      for (int j = 0; j < cfg.k; ++j) inst.matroids.push_back(detail::random_uniform(rng, cfg.n));
      break;
    case InstanceKind::Mixed:
      add_elements(cfg.n);
      for (int j = 0; j < cfg.k; ++j) {
        switch (rng.below(3)) {
          case 0: inst.matroids.push_back(detail::random_uniform(rng, cfg.n)); break;
          case 1: inst.matroids.push_back(detail::random_partition(rng, cfg.n)); break;
          default: inst.matroids.push_back(detail::random_graphic(rng, cfg.n)); break;
        }
      }
      break;
    case InstanceKind::FreeDisposal: {
      detail::require_k(cfg, 2);
      if (sgn(cfg.f.value()) != 0) throw InputError("free-disposal instances have f = 0");
      const std::size_t ads = cfg.advertisers;
      if (cfg.n == 0 || ads == 0) throw InputError("free-disposal: need impressions and advertisers");
      if (!cfg.capacities.empty() && cfg.capacities.size() != ads) {
        throw InputError("free-disposal: " + std::to_string(cfg.capacities.size()) + " capacities for " +
                         std::to_string(ads) + " advertisers");
      }
      Partition by_impression, by_advertiser;
      by_impression.capacity.assign(cfg.n, 1);
      for (std::size_t a = 0; a < ads; ++a) {
        by_advertiser.capacity.push_back(cfg.capacities.empty() ? static_cast<std::size_t>(rng.between(1, 2))
                                                                : cfg.capacities[a]);
      }
      for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t a = 0; a < ads; ++a) {
          const auto id = static_cast<ElementId>(i * ads + a);
          by_impression.class_of[id] = i;
          by_advertiser.class_of[id] = a;
        }
      }
      add_elements(cfg.n * ads);
      inst.matroids = {by_impression, by_advertiser};
      break;
    }
    case InstanceKind::Star: {
      detail::require_k(cfg, 1);
      if (cfg.n < 2) throw InputError("star: need at least two vertices");
      if (!(sgn(cfg.star_eps) > 0 && cfg.star_eps < 1)) throw InputError("star: eps must lie in (0, 1)");
      std::vector<std::pair<ElementId, ElementId>> edges;
      IdSet ids;
      for (std::size_t i = 0; i < cfg.n; ++i) {
        const auto id = static_cast<ElementId>(i);
        const Rational w = i < 2 ? Rational(1) : Rational(1 - cfg.star_eps);
        inst.elements.push_back(Element{id, Weight(w)});
        ids.push_back(id);
        if (i >= 1) edges.push_back({0, id});
      }
      inst.matroids = {graph_independence_family(ids, edges)};
      break;
    }
  }

  inst.arrival_order = ids_of(inst.elements);
  switch (cfg.order) {
    case ArrivalOrder::AsGenerated:
      break;
    case ArrivalOrder::Random:
      for (std::size_t i = inst.arrival_order.size(); i > 1; --i) {
        std::swap(inst.arrival_order[i - 1], inst.arrival_order[rng.below(i)]);
      }
      break;
    case ArrivalOrder::Ascending:
    case ArrivalOrder::Descending: {
      std::vector<Element> sorted = inst.elements;
      const bool asc = cfg.order == ArrivalOrder::Ascending;
      std::stable_sort(sorted.begin(), sorted.end(), [asc](const Element& a, const Element& b) {
        if (a.weight != b.weight) return asc ? a.weight < b.weight : b.weight < a.weight;
        return a.id < b.id;
      });
      inst.arrival_order.clear();
      for (const auto& e : sorted) inst.arrival_order.push_back(e.id);
      break;
    }
  }
  validate(inst);
  return inst;
}

}  // namespace buyback

#endif  // BUYBACK_GENERATOR_HPP
