#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reconf/graph.hpp"
#include "reconf/provenance.hpp"

namespace reconf {

struct Tape {
  Graph cells;
  std::vector<LetterSet> content;  // per cell, universe = |Σ|
  int start = 0;
  int end = 0;
  std::vector<int> number;  // per cell in [1, r]; empty when unnumbered

  int size() const { return cells.n(); }
  bool numbered() const { return !number.empty(); }
};

/// A path tape with cells 0..len-1 in order, start 0 and end len-1.
Tape path_tape(int sigma, const std::vector<std::vector<int>>& letters, std::vector<int> number = {});

using Config = std::vector<int>;  // one cell per tape

struct TapeInstance {
  int sigma = 0;
  std::vector<Tape> tapes;
  Config cs, ct;
  bool sync = false;
  int r = 0;
  Provenance provenance;
};

struct MultiTapeInstance {
  int sigma = 0;
  std::vector<std::vector<Tape>> tuples;
  bool sync = false;
  int r = 0;
  Provenance provenance;
};

/// Heads pairwise within 1 modulo r.
bool synchronized(const TapeInstance& inst, const Config& c);
bool is_valid_configuration(const TapeInstance& inst, const Config& c);

/// Valid configurations one head move away, lexicographically sorted.
/// Throws a precondition error when `c` is invalid.
std::vector<Config> tape_successors(const TapeInstance& inst, const Config& c);

struct TapeResult {
  bool reachable = false;
  std::vector<Config> witness;
  long long explored = 0;
};

inline constexpr long long kDefaultTapeStateCap = 4'000'000;

TapeResult solve_tape(const TapeInstance& inst, long long state_cap = kDefaultTapeStateCap);
bool verify_tape_witness(const TapeInstance& inst, const std::vector<Config>& seq);

struct MultiResult {
  bool positive = false;
  std::vector<int> selection;  // one index per tuple
  long long explored = 0;
};

/// The path instance picking tape selection[i] from tuple i, heads from
/// start cells to end cells.
TapeInstance select(const MultiTapeInstance& inst, const std::vector<int>& selection);
/// Tries every selection in lexicographic order.
MultiResult solve_multi(const MultiTapeInstance& inst, long long state_cap = kDefaultTapeStateCap);

inline constexpr long long kDefaultCoverCap = 20'000'000;
/// Fewest cells (over all tapes) whose contents cover Σ; -1 if impossible.
int min_cover_cells(const TapeInstance& inst, int limit, long long cap = kDefaultCoverCap);
/// No fewer than |tapes| cells cover Σ.
bool is_irreducible(const TapeInstance& inst, long long cap = kDefaultCoverCap);
/// Weaker form: no choice of at most one cell from each tape, leaving some
/// tape out, covers Σ. This is what the reduction to DSR relies on.
bool is_tape_irreducible(const TapeInstance& inst, long long cap = kDefaultCoverCap);

struct ExtendedGraph {
  Graph graph;
  std::vector<int> offset;   // first vertex id of each tape's cells
  int letter_base = 0;       // letter a is vertex letter_base + a
  std::vector<int> tape_of;  // -1 for letter vertices
};
ExtendedGraph extended_graph(const TapeInstance& inst);

struct ShapeChecks {
  bool paths = false;           // every tape a path from start to end
  bool path_sync = false;       // start numbered 1, numbers non-decreasing to end
  bool subdivided_stars = false;
};

std::vector<std::string> validate_instance(const TapeInstance& inst, const ShapeChecks& shape = {});
std::vector<std::string> validate_multi(const MultiTapeInstance& inst, bool path_sync = false);

bool is_path_tape(const Tape& t);
/// Cell order from start to end; empty unless the tape is a path with those endpoints.
std::vector<int> path_order(const Tape& t);
/// Tree with one vertex of degree > 2 (or a path), each branch long enough to be subdivided.
bool is_subdivided_star(const Tape& t);

}  // namespace reconf
