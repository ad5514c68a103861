#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reconf/bitset.hpp"

namespace reconf {

using Edge = std::pair<int, int>;

/// Undirected simple graph on vertices 0..n-1. Immutable once built.
/// Optional string labels tag vertices produced by reductions
/// ("cell:<tape>:<cell>", "letter:<id>", "x:<tape>", "y", "z", ...).
class Graph {
 public:
  Graph() = default;
  /// Throws malformed-input on loops or out-of-range endpoints; parallel
  /// edges are merged.
  Graph(int n, const std::vector<Edge>& edges, std::map<int, std::string> labels = {});

  int n() const { return static_cast<int>(adj_.size()); }
  std::span<const int> neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool has_edge(int u, int v) const;
  const VertexSet& closed_neighborhood(int v) const { return closed_[v]; }
  VertexSet open_neighborhood(int v) const;
  /// Edges (u < v), sorted lexicographically.
  std::vector<Edge> edges() const;
  int edge_count() const { return edge_count_; }

  const std::map<int, std::string>& labels() const { return labels_; }
  std::string label(int v) const;

  VertexSet empty_set() const { return VertexSet(n()); }
  VertexSet all_vertices() const { return VertexSet::full(n()); }

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<VertexSet> closed_;
  std::map<int, std::string> labels_;
  int edge_count_ = 0;
};

/// Subgraph induced by the vertices not in `drop`, renumbered in increasing
/// order. `old_to_new` (if given) receives -1 for dropped vertices.
Graph remove_vertices(const Graph& g, const VertexSet& drop, std::vector<int>* old_to_new = nullptr);
Graph induced_subgraph(const Graph& g, const VertexSet& keep, std::vector<int>* old_to_new = nullptr);

/// True iff X is contained in the closed neighborhood of D.
bool dominates(const Graph& g, const VertexSet& d, const VertexSet& x);
bool dominates_all(const Graph& g, const VertexSet& d);
VertexSet closed_neighborhood_of(const Graph& g, const VertexSet& d);

bool is_connected(const Graph& g);
/// True iff D is nonempty and induces a connected subgraph.
bool induces_connected(const Graph& g, const VertexSet& d);
/// Component id per vertex; components numbered by smallest vertex.
std::vector<int> connected_components(const Graph& g, int* count = nullptr);
std::vector<int> bfs_distances(const Graph& g, int source);

struct NeighborhoodClass {
  VertexSet core_neighbors;  // Y = N(v) ∩ X
  VertexSet members;
  int type() const { return core_neighbors.count(); }
};

/// Partition of V \ X by core neighborhood, ordered by Y (lexicographic).
std::vector<NeighborhoodClass> neighborhood_classes(const Graph& g, const VertexSet& x);

struct TwinPair {
  int removable;  // x
  int partner;    // y, with N(x) \ {y} ⊆ N(y)
};

/// First pair x, y outside X with N(x) \ {y} ⊆ N(y), scanning x then y in
/// increasing order. `protect` vertices are never reported as removable.
std::optional<TwinPair> find_reducible_vertex(const Graph& g, const VertexSet& x,
                                              const VertexSet* protect = nullptr);

struct Degeneracy {
  int d = 0;
  std::vector<int> ordering;  // elimination order, min-degree first
};
Degeneracy degeneracy(const Graph& g);

inline constexpr int kDefaultFvsCap = 96;
/// Exact minimum feedback vertex set. Throws cap-exceeded above `cap` vertices.
VertexSet min_feedback_vertex_set(const Graph& g, int cap = kDefaultFvsCap);
bool is_forest(const Graph& g, const VertexSet& removed);

struct Biclique {
  std::vector<int> left;   // size a
  std::vector<int> right;  // size b
};
inline constexpr long long kDefaultBicliqueCap = 20'000'000;
/// K_{a,b} subgraph (not necessarily induced) if one exists.
std::optional<Biclique> find_biclique(const Graph& g, int a, int b, long long cap = kDefaultBicliqueCap);
bool contains_biclique(const Graph& g, int a, int b, long long cap = kDefaultBicliqueCap);

struct TreeDecomposition {
  std::vector<VertexSet> bags;
  std::vector<Edge> tree;       // edges over bag indices
  std::vector<int> tape_of;     // per graph vertex, -1 when not a tape cell
};

struct DecompositionCheck {
  bool valid = false;
  int width = -1;
  bool structured = true;
  int max_tapes_per_bag = 0;
  std::string reason;  // first violated axiom, empty when valid
};

DecompositionCheck verify_decomposition(const Graph& g, const TreeDecomposition& td,
                                        std::optional<int> s = std::nullopt);

/// Valid (not optimal) decomposition from a greedy min-degree elimination.
TreeDecomposition min_degree_decomposition(const Graph& g);

}  // namespace reconf
