#pragma once

#include <string>
#include <vector>

#include "reconf/engine.hpp"
#include "reconf/graph.hpp"
#include "reconf/tape.hpp"

namespace reconf {

/// Positive-literal formula tree. Variables are 0-based.
struct Formula {
  enum class Op { kVar, kAnd, kOr };
  Op op = Op::kVar;
  int var = 0;
  std::vector<Formula> kids;

  static Formula variable(int v) { return {Op::kVar, v, {}}; }
  static Formula all_of(std::vector<Formula> k) { return {Op::kAnd, 0, std::move(k)}; }
  static Formula any_of(std::vector<Formula> k) { return {Op::kOr, 0, std::move(k)}; }
};

/// Root is a conjunction; operators alternate along every path; leaves are
/// variables below `variables`.
struct NormalizedFormula {
  int variables = 0;
  Formula root;
};

/// Empty when well formed, otherwise the first problem found.
std::string formula_problem(const NormalizedFormula& phi);
/// Number of alternating operator levels, counting the root.
int formula_depth(const NormalizedFormula& phi);

MultiTapeInstance ds_to_sync_multi(const Graph& g, int k);
/// Synchronized tapes that are subdivided stars. Branch paths use
/// max(n, min_branch) numbers so short graphs keep a meaningful modulus.
TapeInstance partitioned_dsr_to_sync_stars(const DsrInstance& inst, int min_branch = 3);
TapeInstance desynchronize_triangle(const TapeInstance& inst);
TapeInstance desynchronize_path(const TapeInstance& inst);
TapeInstance select_from_tuples(const MultiTapeInstance& inst);
MultiTapeInstance and_compose(const std::vector<MultiTapeInstance>& insts);
MultiTapeInstance or_compose(const std::vector<MultiTapeInstance>& insts);
MultiTapeInstance formula_to_multi(const NormalizedFormula& phi, int k);

DsrInstance tape_to_ts_dsr(const TapeInstance& inst);
DsrInstance tape_to_tj_cdsr(const TapeInstance& inst);

struct StructureReport {
  bool ok = false;
  int minimum = -1;
  long long sets = 0;
  std::string reason;
};
/// Checks the shape of every minimum dominating set of a tape_to_ts_dsr
/// output: k+1 vertices, exactly one of them in {y, z}, the rest one cell per tape.
StructureReport check_min_ds_structure(const DsrInstance& inst, long long cap = kDefaultEnumerationCap);
/// No dominating set of at most 3k+1 vertices in a tape_to_tj_cdsr output
/// avoids some x_i.
StructureReport check_cdsr_anchors(const DsrInstance& inst, long long cap = kDefaultEnumerationCap);

struct DerivedDecomposition {
  Graph graph;  // the graph decomposed
  TreeDecomposition td;
  int width_bound = 0;
  int structure_bound = 0;  // bound on tapes per bag
};
/// Explicit decompositions for outputs of partitioned_dsr_to_sync_stars and
/// desynchronize_triangle (over the extended graph) and tape_to_ts_dsr.
DerivedDecomposition derive_decomposition(const TapeInstance& artifact);
DerivedDecomposition derive_decomposition(const DsrInstance& artifact);

}  // namespace reconf
