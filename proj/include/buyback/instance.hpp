#ifndef BUYBACK_INSTANCE_HPP
#define BUYBACK_INSTANCE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "buyback/matroid.hpp"
#include "buyback/ratio.hpp"

namespace buyback {

struct Instance {
  std::vector<Element> elements;
  std::vector<MatroidDescriptor> matroids;
  std::vector<ElementId> arrival_order;
  Weight penalty_f{0};
  std::optional<Weight> threshold_r;  // empty means "optimal"

  int k() const { return static_cast<int>(matroids.size()); }

  bool all_true_matroids() const {
    for (const auto& m : matroids) {
      if (!is_true_matroid(m)) return false;
    }
    return true;
  }

  std::map<ElementId, const Element*> index() const {
    std::map<ElementId, const Element*> out;
    for (const auto& e : elements) out[e.id] = &e;
    return out;
  }

  /// Elements in arrival order.
  std::vector<Element> stream() const {
    const auto idx = index();
    std::vector<Element> out;
    out.reserve(arrival_order.size());
    for (ElementId id : arrival_order) out.push_back(*idx.at(id));
    return out;
  }

  Rational weight_of(const IdSet& set) const {
    const auto idx = index();
    Rational total = 0;
    for (ElementId id : set) total += idx.at(id)->weight.value();
    return total;
  }
};

/// Throws InputError describing the first structural problem found.
inline void validate(const Instance& inst) {
  if (inst.matroids.empty()) throw InputError("instance needs k >= 1 matroids");
  std::set<ElementId> ids;
  for (const auto& e : inst.elements) {
    if (!ids.insert(e.id).second) throw InputError("duplicate element id " + std::to_string(e.id));
  }
  if (inst.arrival_order.size() != ids.size()) throw InputError("arrival order is not a permutation of the element ids");
  std::set<ElementId> seen;
  for (ElementId id : inst.arrival_order) {
    if (!ids.count(id)) throw InputError("arrival order names unknown element " + std::to_string(id));
    if (!seen.insert(id).second) throw InputError("arrival order repeats element " + std::to_string(id));
  }
  for (std::size_t j = 0; j < inst.matroids.size(); ++j) {
    const auto& m = inst.matroids[j];
    const std::string where = "matroid " + std::to_string(j) + ": ";
    if (const auto* p = std::get_if<Partition>(&m)) {
      for (ElementId id : ids) {
        auto it = p->class_of.find(id);
        if (it == p->class_of.end()) throw InputError(where + "element " + std::to_string(id) + " has no class");
        if (it->second >= p->capacity.size()) throw InputError(where + "class index out of range");
      }
    } else if (const auto* g = std::get_if<Graphic>(&m)) {
      for (ElementId id : ids) {
        auto it = g->endpoints.find(id);
        if (it == g->endpoints.end()) throw InputError(where + "element " + std::to_string(id) + " has no endpoints");
        if (it->second.first >= g->vertex_count || it->second.second >= g->vertex_count) {
          throw InputError(where + "vertex out of range");
        }
      }
    } else if (const auto* fam = std::get_if<ExplicitFamily>(&m)) {
      for (const auto& s : fam->maximal_sets) {
        for (ElementId id : s) {
          if (!ids.count(id)) throw InputError(where + "family names unknown element " + std::to_string(id));
        }
      }
    }
  }
}

/// The run threshold: explicit value, or the optimal one rounded up to a rational.
inline Rational resolve_threshold(const Instance& inst) {
  if (inst.threshold_r) return inst.threshold_r->value();
  return optimal_r_rational(inst.k(), inst.penalty_f.value());
}

}  // namespace buyback

#endif  // BUYBACK_INSTANCE_HPP
