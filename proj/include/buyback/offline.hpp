#ifndef BUYBACK_OFFLINE_HPP
#define BUYBACK_OFFLINE_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "buyback/engine.hpp"
#include "buyback/instance.hpp"

namespace buyback {

struct OptResult {
  IdSet set;
  Rational weight{0};
};

constexpr std::size_t kMaxBruteForceElements = 22;

/// Maximum-weight set independent in every constraint, by DFS over ids with
/// hereditary pruning. Ties go to the lexicographically smallest id set.
/// Works for set families too, since only downward closure is used.
inline OptResult brute_opt(const Instance& inst) {
  validate(inst);
  if (inst.elements.size() > kMaxBruteForceElements) {
    throw SizeError("brute_opt: " + std::to_string(inst.elements.size()) + " elements exceeds " +
                    std::to_string(kMaxBruteForceElements));
  }
  std::vector<Element> order = inst.elements;
  std::sort(order.begin(), order.end(), [](const Element& a, const Element& b) { return a.id < b.id; });

  // suffix sums bound the remaining gain for branch-and-bound
  std::vector<Rational> suffix(order.size() + 1, Rational(0));
  for (std::size_t i = order.size(); i-- > 0;) suffix[i] = suffix[i + 1] + order[i].weight.value();

  OptResult best;
  IdSet current;
  Rational current_weight = 0;

  auto better = [&](const Rational& w, const IdSet& set) {
    const int c = cmp(w, best.weight);
    if (c != 0) return c > 0;
    return std::lexicographical_compare(set.begin(), set.end(), best.set.begin(), best.set.end());
  };

  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (current_weight + suffix[i] < best.weight) return;
    if (i == order.size()) {
      if (better(current_weight, current)) {
        best.set = current;
        best.weight = current_weight;
      }
      return;
    }
    current.push_back(order[i].id);
    if (is_independent_in_all(inst.matroids, current)) {
      current_weight += order[i].weight.value();
      self(self, i + 1);
      current_weight -= order[i].weight.value();
    }
    current.pop_back();
    self(self, i + 1);
  };
  dfs(dfs, 0);
  best.weight.canonicalize();
  return best;
}

/// Descending-weight greedy through all constraints (ties by id).
inline OptResult greedy_offline(const Instance& inst) {
  validate(inst);
  OptResult out;
  out.set = greedy_independent(inst.matroids, inst.elements);
  out.weight = inst.weight_of(out.set);
  return out;
}

}  // namespace buyback

#endif  // BUYBACK_OFFLINE_HPP
