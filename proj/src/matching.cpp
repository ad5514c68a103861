#include "reconf/matching.hpp"

#include <functional>

namespace reconf {

std::vector<std::pair<int, int>> max_bipartite_matching(int nl, int nr,
                                                        const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(nl);
  for (auto [l, r] : edges) adj[l].push_back(r);
  std::vector<int> match_r(nr, -1);
  std::vector<int> seen(nr, -1);
  // Kuhn's algorithm; fine at the sizes used here.
  std::function<bool(int, int)> augment = [&](int l, int round) {
    for (int r : adj[l]) {
      if (seen[r] == round) continue;
      seen[r] = round;
      if (match_r[r] < 0 || augment(match_r[r], round)) {
        match_r[r] = l;
        return true;
      }
    }
    return false;
  };
  for (int l = 0; l < nl; ++l) augment(l, l);
  std::vector<std::pair<int, int>> out;
  std::vector<int> match_l(nl, -1);
  for (int r = 0; r < nr; ++r)
    if (match_r[r] >= 0) match_l[match_r[r]] = r;
  for (int l = 0; l < nl; ++l)
    if (match_l[l] >= 0) out.emplace_back(l, match_l[l]);
  return out;
}

}  // namespace reconf
