#ifndef BUYBACK_MATROID_HPP
#define BUYBACK_MATROID_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "buyback/errors.hpp"
#include "buyback/rational.hpp"

namespace buyback {

using ElementId = std::uint32_t;

/// Sorted, duplicate-free list of element ids.
using IdSet = std::vector<ElementId>;

struct Element {
  ElementId id = 0;
  Weight weight;
};

inline IdSet make_id_set(std::vector<ElementId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline IdSet ids_of(std::span<const Element> elements) {
  IdSet out;
  out.reserve(elements.size());
  for (const auto& e : elements) out.push_back(e.id);
  return make_id_set(std::move(out));
}

inline bool contains(const IdSet& set, ElementId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

inline IdSet with_element(IdSet set, ElementId id) {
  set.insert(std::lower_bound(set.begin(), set.end(), id), id);
  return set;
}

inline IdSet without_element(IdSet set, ElementId id) {
  auto it = std::lower_bound(set.begin(), set.end(), id);
  if (it != set.end() && *it == id) set.erase(it);
  return set;
}

struct Uniform {
  std::size_t rank = 0;
};

struct Partition {
  std::map<ElementId, std::size_t> class_of;
  std::vector<std::size_t> capacity;
};

/// Edges of a multigraph; independent = acyclic. A self-loop edge is a matroid loop.
struct Graphic {
  std::size_t vertex_count = 0;
  std::map<ElementId, std::pair<std::size_t, std::size_t>> endpoints;
};

/// Downward closure of the listed sets. Not necessarily a matroid.
struct ExplicitFamily {
  std::vector<IdSet> maximal_sets;
};

using MatroidDescriptor = std::variant<Uniform, Partition, Graphic, ExplicitFamily>;

inline bool is_true_matroid(const MatroidDescriptor& desc) {
  return !std::holds_alternative<ExplicitFamily>(desc);
}

inline std::string kind_name(const MatroidDescriptor& desc) {
  struct Visitor {
    std::string operator()(const Uniform&) const { return "uniform"; }
    std::string operator()(const Partition&) const { return "partition"; }
    std::string operator()(const Graphic&) const { return "graphic"; }
    std::string operator()(const ExplicitFamily&) const { return "family"; }
  };
  return std::visit(Visitor{}, desc);
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // false if a and b were already connected
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline bool independent(const Uniform& u, std::span<const ElementId> set) {
  return set.size() <= u.rank;
}

inline bool independent(const Partition& p, std::span<const ElementId> set) {
  std::vector<std::size_t> used(p.capacity.size(), 0);
  for (ElementId id : set) {
    auto it = p.class_of.find(id);
    if (it == p.class_of.end()) throw InputError("partition matroid: unknown element id " + std::to_string(id));
    if (it->second >= p.capacity.size()) throw InputError("partition matroid: class index out of range");
    if (++used[it->second] > p.capacity[it->second]) return false;
  }
  return true;
}

inline bool independent(const Graphic& g, std::span<const ElementId> set) {
  DisjointSets ds(g.vertex_count);
  for (ElementId id : set) {
    auto it = g.endpoints.find(id);
    if (it == g.endpoints.end()) throw InputError("graphic matroid: unknown element id " + std::to_string(id));
    const auto [u, v] = it->second;
    if (u >= g.vertex_count || v >= g.vertex_count) throw InputError("graphic matroid: vertex out of range");
    if (!ds.unite(u, v)) return false;
  }
  return true;
}

inline bool independent(const ExplicitFamily& fam, std::span<const ElementId> set) {
  IdSet sorted = make_id_set(IdSet(set.begin(), set.end()));
  if (sorted.empty()) return true;
  for (const auto& maximal : fam.maximal_sets) {
    if (std::includes(maximal.begin(), maximal.end(), sorted.begin(), sorted.end())) return true;
  }
  return false;
}

}  // namespace detail

inline bool is_independent(const MatroidDescriptor& desc, std::span<const ElementId> set) {
  return std::visit([&](const auto& m) { return detail::independent(m, set); }, desc);
}

inline bool is_independent_in_all(std::span<const MatroidDescriptor> matroids, std::span<const ElementId> set) {
  return std::all_of(matroids.begin(), matroids.end(),
                     [&](const MatroidDescriptor& m) { return is_independent(m, set); });
}

inline bool is_loop(const MatroidDescriptor& desc, ElementId id) {
  const ElementId single[] = {id};
  return !is_independent(desc, single);
}

/// Greedy rank: keep each element whose addition preserves independence.
inline std::size_t rank(const MatroidDescriptor& desc, std::span<const ElementId> set) {
  if (!is_true_matroid(desc)) throw UnsupportedOperation("rank is defined only for matroids, not for a set family");
  IdSet kept;
  for (ElementId id : set) {
    kept.push_back(id);
    if (!is_independent(desc, kept)) kept.pop_back();
  }
  return kept.size();
}

/// The unique circuit of s + e, or nullopt when s + e is independent.
inline std::optional<IdSet> circuit(const MatroidDescriptor& desc, std::span<const ElementId> s, ElementId e) {
  if (!is_true_matroid(desc)) throw UnsupportedOperation("circuit is defined only for matroids, not for a set family");
  if (!is_independent(desc, s)) throw PreconditionError("circuit: base set is not independent");
  IdSet joined(s.begin(), s.end());
  joined.push_back(e);
  if (is_independent(desc, joined)) return std::nullopt;

  IdSet result{e};
  IdSet trial;
  for (ElementId x : s) {
    trial.clear();
    for (ElementId y : joined) {
      if (y != x) trial.push_back(y);
    }
    if (is_independent(desc, trial)) result.push_back(x);
  }
  return make_id_set(std::move(result));
}

/// Lightest element of circuit(s, e) \ {e}, ties to the smaller id; nullopt when s + e is independent.
inline std::optional<ElementId> min_evict(const MatroidDescriptor& desc, std::span<const Element> s, const Element& e) {
  IdSet s_ids;
  s_ids.reserve(s.size());
  for (const auto& x : s) s_ids.push_back(x.id);
  auto c = circuit(desc, s_ids, e.id);
  if (!c) return std::nullopt;
  if (c->size() == 1) throw PreconditionError("min_evict: element " + std::to_string(e.id) + " is a loop");

  std::optional<ElementId> best;
  const Weight* best_weight = nullptr;
  for (const auto& x : s) {
    if (!contains(*c, x.id)) continue;
    if (!best || x.weight < *best_weight || (x.weight == *best_weight && x.id < *best)) {
      best = x.id;
      best_weight = &x.weight;
    }
  }
  return best;
}

struct AxiomReport {
  bool passed = true;
  std::string failed_property;  // "hereditary" or "exchange"
  IdSet witness_a;
  IdSet witness_b;
};

constexpr std::size_t kMaxAxiomGround = 16;

/// Exhaustive hereditary + exchange check over every subset of `ground`.
///
/// Exchange is checked in its equivalent |B| = |A| + 1 form: for an
/// independent A let ext(A) be the elements that extend it; the axiom fails
/// at A exactly when some independent set of size |A| + 1 avoids ext(A).
inline AxiomReport axiom_check(const MatroidDescriptor& desc, std::span<const ElementId> ground_in) {
  const IdSet ground = make_id_set(IdSet(ground_in.begin(), ground_in.end()));
  if (ground.size() > kMaxAxiomGround) {
    throw SizeError("axiom_check: ground set of " + std::to_string(ground.size()) + " exceeds " +
                    std::to_string(kMaxAxiomGround));
  }
  const std::size_t n = ground.size();
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  const std::size_t count = std::size_t{1} << n;

  auto decode = [&](std::uint32_t mask) {
    IdSet out;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) out.push_back(ground[i]);
    }
    return out;
  };

  std::vector<char> indep(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) indep[mask] = is_independent(desc, decode(mask));

  AxiomReport report;
  if (!indep[0]) {
    report.passed = false;
    report.failed_property = "hereditary";
    return report;
  }
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (!indep[mask]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if ((mask & bit) && !indep[mask ^ bit]) {
        report.passed = false;
        report.failed_property = "hereditary";
        report.witness_a = decode(mask ^ bit);
        report.witness_b = decode(mask);
        return report;
      }
    }
  }

  // largest independent subset size of each mask
  std::vector<std::uint8_t> best(count, 0);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (indep[mask]) {
      best[mask] = static_cast<std::uint8_t>(std::popcount(mask));
      continue;
    }
    std::uint8_t b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if (mask & bit) b = std::max(b, best[mask ^ bit]);
    }
    best[mask] = b;
  }

  for (std::uint32_t a = 0; a < count; ++a) {
    if (!indep[a]) continue;
    std::uint32_t ext = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if (!(a & bit) && indep[a | bit]) ext |= bit;
    }
    const std::uint32_t avoid = full & ~ext;
    const auto size_a = static_cast<std::uint8_t>(std::popcount(a));
    if (best[avoid] <= size_a) continue;
    for (std::uint32_t b = avoid;; b = (b - 1) & avoid) {
      if (indep[b] && std::popcount(b) == size_a + 1) {
        report.passed = false;
        report.failed_property = "exchange";
        report.witness_a = decode(a);
        report.witness_b = decode(b);
        return report;
      }
      if (b == 0) break;
    }
  }
  return report;
}

}  // namespace buyback

#endif  // BUYBACK_MATROID_HPP
