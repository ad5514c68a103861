#pragma once

#include <cstdint>
#include <random>

#include "reconf/engine.hpp"
#include "reconf/graph.hpp"
#include "reconf/tape.hpp"

namespace reconf {

/// Seeded engine. Draws go through `uniform` (plain modulo) rather than the
/// standard distributions, whose output is implementation-defined.
using Rng = std::mt19937_64;
int uniform(Rng& rng, int n);
bool chance(Rng& rng, double p);

enum class GraphConstraint { kNone, kConnected, kK3dFree };

struct GraphParams {
  int n = 6;
  double edge_prob = 0.4;
  GraphConstraint constraint = GraphConstraint::kNone;
  int d = 2;              // for kK3dFree: no K_{3,d}; the graph is also kept connected
  int max_retries = 10000;
};

Graph gen_random_graph(std::uint64_t seed, const GraphParams& p);
Graph gen_random_graph(Rng& rng, const GraphParams& p);

struct TapeParams {
  int tapes = 2;
  int min_cells = 1;
  int max_cells = 4;
  int sigma = 2;
  double letter_prob = 0.4;
  bool sync = false;
  bool paths = false;      // path tapes with start/end at the ends
  bool path_sync = false;  // implies paths and sync; numbering non-decreasing, heads start/end at the ends
  double extra_edge_prob = 0.2;
  bool distinct_heads = true;  // cs != ct unless every tape has one cell
  int max_retries = 10000;
};

TapeInstance gen_random_tape_instance(std::uint64_t seed, const TapeParams& p);
TapeInstance gen_random_tape_instance(Rng& rng, const TapeParams& p);

struct MultiParams {
  int tuples = 2;
  int tapes_per_tuple = 2;
  int min_cells = 1;
  int max_cells = 4;
  int sigma = 2;
  double letter_prob = 0.45;
  bool sync = false;  // path-sync numbering shared by all tapes
};

MultiTapeInstance gen_random_multi(Rng& rng, const MultiParams& p);

/// Random DSR instance whose source and target dominate (resampled until they do).
struct DsrParams {
  GraphParams graph;
  int k = 2;
  Rule rule = Rule::kSlide;
  bool connected = false;
  bool partitioned = false;  // jump rule with a random partition into k parts
};
std::optional<DsrInstance> gen_random_dsr(Rng& rng, const DsrParams& p);

}  // namespace reconf
