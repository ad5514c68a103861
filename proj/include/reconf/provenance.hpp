#pragma once

#include <map>
#include <string>
#include <vector>

namespace reconf {

/// Which constructor produced an artifact, plus whatever integer data the
/// matching explicit decomposition needs. Empty `construction` = hand-made.
struct Provenance {
  std::string construction;
  std::map<std::string, std::vector<int>> data;

  bool empty() const { return construction.empty(); }
};

}  // namespace reconf
