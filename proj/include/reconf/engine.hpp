#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reconf/graph.hpp"
#include "reconf/provenance.hpp"

namespace reconf {

enum class Rule { kSlide, kJump };

struct DsrInstance {
  Graph graph;
  int k = 0;
  VertexSet source, target;
  Rule rule = Rule::kSlide;
  bool connected = false;
  std::optional<VertexSet> core;      // X; all of V when absent
  std::vector<VertexSet> partition;   // partitioned TJ when nonempty
  Provenance provenance;

  VertexSet core_set() const { return core ? *core : graph.all_vertices(); }
};

struct ReconfigResult {
  bool reachable = false;
  std::vector<VertexSet> witness;
  long long explored = 0;
};

inline constexpr long long kDefaultStateCap = 2'000'000;

/// Whether `d` is a legal configuration: k tokens dominating the core, plus the variant's extra constraints.
bool is_feasible(const DsrInstance& inst, const VertexSet& d);

/// Every violated instance invariant, empty when well formed.
std::vector<std::string> validate_dsr(const DsrInstance& inst);

/// Feasible configurations one move away, in lexicographic order.
/// Throws a precondition error when `d` itself is infeasible.
std::vector<VertexSet> successors(const DsrInstance& inst, const VertexSet& d);

/// Breadth-first search from source. Disconnected graphs under plain sliding
/// are split per component, and the witness then moves one component at a time.
ReconfigResult solve(const DsrInstance& inst, long long state_cap = kDefaultStateCap);

/// True iff `seq` runs from source to target through feasible configurations
/// with one legal move between neighbours.
bool verify_witness(const DsrInstance& inst, const std::vector<VertexSet>& seq);

/// True iff b is reachable from a in one move under `rule` (ignoring feasibility).
bool is_move(const Graph& g, Rule rule, const VertexSet& a, const VertexSet& b);

struct DominatingSetQuery {
  std::optional<VertexSet> core;  // sets must dominate this (all of V when absent)
  bool connected = false;
};

inline constexpr long long kDefaultEnumerationCap = 50'000'000;

/// All size-k sets dominating the query core, in lexicographic order.
std::vector<VertexSet> minimum_dominating_sets(const Graph& g, int k, const DominatingSetQuery& q = {},
                                               long long cap = kDefaultEnumerationCap);
/// Smallest k for which a dominating set (per query) exists; -1 if none.
int domination_number(const Graph& g, const DominatingSetQuery& q = {}, long long cap = kDefaultEnumerationCap);
/// Whether some set of size exactly k satisfies the query.
bool has_dominating_set(const Graph& g, int k, const DominatingSetQuery& q = {},
                        long long cap = kDefaultEnumerationCap);

/// Branches on the undominated vertex with the fewest allowed dominators.
/// Visits every inclusion-minimal dominating set of size <= limit that avoids
/// `forbidden` (plus possibly some non-minimal ones), each at most once.
/// Only `targets` must be dominated when given. The visitor returns false to
/// stop early.
void for_each_small_dominating_set(const Graph& g, int limit, const VertexSet* forbidden,
                                   const std::function<bool(const VertexSet&)>& visit,
                                   long long cap = kDefaultEnumerationCap, const VertexSet* targets = nullptr);
/// Whether a set of size <= limit avoiding `forbidden` dominates `targets` (all of V when null).
bool dominating_set_within(const Graph& g, int limit, const VertexSet* forbidden = nullptr,
                           long long cap = kDefaultEnumerationCap, const VertexSet* targets = nullptr);
/// All dominating sets of minimum size, found by the branching search above.
std::vector<VertexSet> all_minimum_dominating_sets(const Graph& g, int limit, long long cap = kDefaultEnumerationCap);

}  // namespace reconf
