#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reconf/tape.hpp"

namespace reconf {

struct ReducibleSubset {
  std::vector<int> tapes;                          // L, sorted
  std::vector<int> alphabet;                       // letters appearing on L, sorted
  std::vector<std::pair<int, std::pair<int, int>>> matching;  // letter -> (tape, cell)
  std::vector<int> empty_tapes;                    // tapes with no letters at all
};

/// Smallest subset L of the given tapes whose alphabet is nonempty and
/// smaller than |L|, plus a letter-to-distinct-tape matching. Content-empty
/// tapes are reported instead (and L is left empty). Needs at least sigma+1
/// tapes. Matched cells are the nearest to each tape's start cell.
ReducibleSubset extract_reducible_subset(const std::vector<Tape>& tapes, int sigma);

struct ReductionStep {
  std::string rule;                   // "empty-tapes" or "matched-subset"
  std::vector<int> reserved;          // tapes whose end cells cover Σ (kept)
  std::vector<int> deleted;           // tape indices of the step's input
  std::vector<int> erased;            // letter ids of the step's input
  std::vector<std::pair<int, int>> assignment;  // letter -> tape carrying its matched cell
};

/// One equivalent instance with strictly fewer tapes. Requires an
/// unsynchronized instance with valid cs/ct and more than 2|Σ| tapes.
TapeInstance tape_reduce_once(const TapeInstance& inst, ReductionStep* step = nullptr);

struct TapeReduction {
  TapeInstance reduced;
  std::vector<ReductionStep> log;
};

/// Applies tape_reduce_once until at most 2|Σ| tapes remain. Requires valid cs/ct.
TapeReduction reduce_tapes(const TapeInstance& inst);

struct BoundedResult {
  bool reachable = false;
  TapeInstance reduced;
  std::vector<ReductionStep> log;
  long long explored = 0;
};

/// Tape-reduces until at most 2|Σ| tapes remain, then searches.
BoundedResult solve_bounded_alphabet(const TapeInstance& inst, long long state_cap = kDefaultTapeStateCap);

}  // namespace reconf
