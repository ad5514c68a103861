#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reconf/engine.hpp"
#include "reconf/errors.hpp"
#include "reconf/graph.hpp"

namespace reconf {

enum class Family { kK3dFree, kK4dMinorFree };

/// Token sliding where only the core X has to stay dominated.
struct DcrInstance {
  Graph graph;
  int k = 0;
  std::optional<VertexSet> core;  // computed by kernelize when absent
  VertexSet source, target;
  int d = 2;
  Family family = Family::kK3dFree;
  int anchor = -1;  // the universal vertex added by the 0-class rule, -1 before

  const VertexSet& core_set() const;
  DsrInstance as_dsr() const;
};

/// Every violated instance invariant; empty when well formed.
std::vector<std::string> validate_dcr(const DcrInstance& inst);

/// Whether every set of size <= k dominating X dominates the whole graph.
bool is_domination_core(const Graph& g, int k, const VertexSet& x, long long cap = kDefaultEnumerationCap);
/// (2d+1) k^(d+1), saturated at INT64_MAX.
long long core_size_bound(int d, int k);

/// Greedy shrink of V: drops vertices in increasing order while the exact
/// check still holds. Throws infeasible when no dominating set of size <= k exists.
VertexSet compute_core(const Graph& g, int k, const VertexSet& must_include, int d,
                       long long cap = kDefaultEnumerationCap);

/// True when no k-1 vertices dominate X. Every rule below preserves the
/// answer on tight instances and keeps them tight. On other instances the
/// rules return their input unchanged: a spare token can then use an added
/// vertex or a detour the original graph blocks.
bool is_tight(const DcrInstance& inst, long long cap = kDefaultEnumerationCap);

/// Deletes x outside X while some y outside X has N(x) \ {y} ⊆ N(y).
/// The anchor is never the deleted vertex.
DcrInstance reduce_twins(const DcrInstance& inst);
/// Contracts every connected component inside a class to one vertex.
DcrInstance contract_class_components(const DcrInstance& inst);
/// Adds the anchor (complete to V \ X, anticomplete to X) unless present, then
/// removes twins. Afterwards the 0-class is exactly {anchor}.
DcrInstance add_universal_and_prune_zero_class(const DcrInstance& inst);
/// Deletes edges uv outside X whose classes are distinct with types <= 2 while
/// the graph stays connected. Requires the anchor.
DcrInstance prune_small_type_edges(const DcrInstance& inst);

struct ClassPair {
  int from = -1, to = -1;  // indices into neighborhood_classes(graph, core)
  int matching = 0;
};
/// Ordered pairs of distinct classes joined by a matching larger than k*d.
std::vector<ClassPair> fat_pairs(const DcrInstance& inst);
/// For every 3-class, cuts the edges to its fat partners, then removes twins.
/// Only for the K_{4,d}-minor-free family.
DcrInstance prune_three_classes(const DcrInstance& inst);

struct KernelReport {
  int core_size = 0;
  bool core_computed = false;
  bool tight = false;  // false: rules skipped (and a computed core widened to V)
  long long core_bound = 0;
  std::map<int, std::vector<int>> class_sizes;  // type -> sizes of its classes
  std::vector<std::string> rules_applied;       // one entry per effective application
  long long size_before = 0, size_after = 0;    // |V| + |E|
  int p = 0;                                    // largest class of type 0 or >= 3 (at least 2)
  bool zero_class_ok = false;                   // 0-class has at most one vertex
  bool large_classes_ok = false;                // classes of type >= 3 (>= 4 for K4D) below d
  bool small_classes_ok = false;                // type 1 and 2 classes within 2^(p 2^|X|)
  bool three_classes_ok = true;                 // K4D: 3-classes within their size bound
  bool twin_free = false;                       // apart from pairs that would delete the anchor
  bool ok() const { return zero_class_ok && large_classes_ok && small_classes_ok && three_classes_ok && twin_free; }
};

struct KernelResult {
  DcrInstance kernel;
  KernelReport report;
};

/// Thrown when a K_{3,d}-free input contains K_{3,d}.
class FamilyViolation : public Error {
 public:
  FamilyViolation(const std::string& what, Biclique witness)
      : Error(ErrorKind::kPromiseViolation, what), witness_(std::move(witness)) {}
  const Biclique& witness() const { return witness_; }

 private:
  Biclique witness_;
};

/// Runs the rules to a fixpoint. Throws FamilyViolation (K3D) with the
/// offending biclique.
KernelResult kernelize(const DcrInstance& inst, long long cap = kDefaultEnumerationCap);

/// Kernelizes, then searches the kernel. The witness lives in kernel ids.
ReconfigResult solve_via_kernel(const DcrInstance& inst, long long state_cap = kDefaultStateCap);

/// Report of the class structure: type -> sizes, sorted.
std::map<int, std::vector<int>> class_histogram(const Graph& g, const VertexSet& x);

}  // namespace reconf
