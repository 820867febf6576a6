#ifndef BUYBACK_BIPARTITE_MATCHING_HPP
#define BUYBACK_BIPARTITE_MATCHING_HPP

#include <map>
#include <set>
#include <vector>

namespace buyback {

/// Maximum-cardinality bipartite matching by augmenting paths (Kuhn).
///
/// Left vertices are tried in the order given; each adjacency list is
/// scanned in order, so the resulting matching is deterministic.
/// Returns left -> right.
template <class Left, class Right>
std::map<Left, Right> max_bipartite_matching(const std::vector<Left>& left,
                                             const std::map<Left, std::vector<Right>>& adjacency) {
  std::map<Right, Left> owner;
  std::map<Left, Right> mate;

  auto augment = [&](auto&& self, const Left& u, std::set<Right>& visited) -> bool {
    auto it = adjacency.find(u);
    if (it == adjacency.end()) return false;
    for (const Right& v : it->second) {
      if (!visited.insert(v).second) continue;
      auto o = owner.find(v);
      if (o == owner.end() || self(self, o->second, visited)) {
        owner[v] = u;
        mate[u] = v;
        return true;
      }
    }
    return false;
  };

  for (const Left& u : left) {
    std::set<Right> visited;
    augment(augment, u, visited);
  }
  return mate;
}

}  // namespace buyback

#endif  // BUYBACK_BIPARTITE_MATCHING_HPP
