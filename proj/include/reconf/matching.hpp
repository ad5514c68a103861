#pragma once

#include <utility>
#include <vector>

namespace reconf {

/// Maximum bipartite matching between left ids 0..nl-1 and right ids 0..nr-1.
/// Augmenting paths are tried in input order, so the result is deterministic.
/// Returns matched (left, right) pairs sorted by left id.
std::vector<std::pair<int, int>> max_bipartite_matching(int nl, int nr,
                                                        const std::vector<std::pair<int, int>>& edges);

}  // namespace reconf
