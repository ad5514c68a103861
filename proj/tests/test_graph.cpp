#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "reconf/errors.hpp"
#include "reconf/graph.hpp"
#include "reconf/matching.hpp"

using namespace reconf;

namespace {
Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}
Graph complete(int n) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}
}  // namespace

TEST_CASE("graph construction rejects bad input and merges duplicates") {
  CHECK_THROWS_AS(Graph(2, {{0, 0}}), Error);
  CHECK_THROWS_AS(Graph(2, {{0, 2}}), Error);
  Graph g(3, {{0, 1}, {1, 0}, {1, 2}});
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("dominates on small graphs") {
  Graph c5 = cycle(5);
  // vertices 1..5 of the cycle are 0..4 here; D = {1,3} -> {0,2}
  CHECK(dominates_all(c5, VertexSet(5, {0, 2})));
  CHECK_FALSE(dominates_all(c5, VertexSet(5)));
  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(dominates_all(p3, VertexSet(3, {1})));
  CHECK_THROWS_AS(dominates(p3, VertexSet(4, {1}), p3.all_vertices()), Error);
}

TEST_CASE("dominates agrees with a per-vertex scan") {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    Graph g = oracle::random_graph(rng, 1 + t % 9, 0.3);
    std::vector<int> d;
    for (int v = 0; v < g.n(); ++v)
      if (rng() % 3 == 0) d.push_back(v);
    bool want = true;
    for (int v = 0; v < g.n(); ++v) want = want && oracle::dominated_by(g, d, v);
    CHECK(dominates_all(g, VertexSet::of(g.n(), d)) == want);
  }
}

TEST_CASE("neighborhood classes partition the non-core vertices") {
  Graph star(3, {{0, 1}, {0, 2}});
  auto cls = neighborhood_classes(star, VertexSet(3, {0}));
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].members == VertexSet(3, {1, 2}));
  CHECK(cls[0].type() == 1);
  CHECK(neighborhood_classes(star, star.all_vertices()).empty());

  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    Graph g = oracle::random_graph(rng, 9, 0.4);
    VertexSet x(9);
    for (int v = 0; v < 9; ++v)
      if (rng() % 3 == 0) x.set(v);
    VertexSet seen(9);
    for (const auto& c : neighborhood_classes(g, x)) {
      CHECK_FALSE(c.members.intersects(seen));
      seen |= c.members;
      for (int v : c.members.members()) CHECK((g.open_neighborhood(v) & x) == c.core_neighbors);
    }
    CHECK((seen | x) == g.all_vertices());
    CHECK_FALSE(seen.intersects(x));
  }
}

TEST_CASE("one-sided twin detection") {
  Graph leaves(3, {{0, 1}, {0, 2}});
  auto p = find_reducible_vertex(leaves, VertexSet(3, {0}));
  REQUIRE(p);
  CHECK((p->removable == 1 || p->removable == 2));
  CHECK(find_reducible_vertex(complete(3), VertexSet(3)).has_value());

  std::mt19937 rng(3);
  for (int t = 0; t < 150; ++t) {
    Graph g = oracle::random_graph(rng, 8, 0.35);
    VertexSet x(8);
    for (int v = 0; v < 8; ++v)
      if (rng() % 4 == 0) x.set(v);
    auto a = oracle::adjacency(g);
    bool exists = false;
    for (int u = 0; u < 8; ++u)
      for (int w = 0; w < 8; ++w) {
        if (u == w || x.test(u) || x.test(w)) continue;
        bool ok = true;
        for (int z = 0; z < 8; ++z)
          if (z != w && a[u][z] && !a[w][z]) ok = false;
        exists = exists || ok;
      }
    auto got = find_reducible_vertex(g, x);
    CHECK(got.has_value() == exists);
    if (got) {
      for (int z = 0; z < 8; ++z)
        if (z != got->partner && a[got->removable][z]) CHECK(a[got->partner][z]);
    }
  }
}

TEST_CASE("degeneracy matches brute force over orderings") {
  CHECK(degeneracy(Graph(4, {{0, 1}, {1, 2}, {1, 3}})).d == 1);
  CHECK(degeneracy(cycle(5)).d == 2);
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    int n = 2 + t % 6;
    Graph g = oracle::random_graph(rng, n, 0.5);
    auto a = oracle::adjacency(g);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    int best = n;
    do {
      int worst = 0;
      for (int i = 0; i < n; ++i) {
        int later = 0;
        for (int j = i + 1; j < n; ++j) later += a[perm[i]][perm[j]];
        worst = std::max(worst, later);
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(degeneracy(g).d == best);
  }
}

TEST_CASE("feedback vertex set is minimum") {
  CHECK(min_feedback_vertex_set(Graph(4, {{0, 1}, {1, 2}})).empty());
  CHECK(min_feedback_vertex_set(cycle(5)).count() == 1);
  CHECK(min_feedback_vertex_set(complete(4)).count() == 2);
  CHECK_THROWS_AS(min_feedback_vertex_set(complete(5), 4), Error);
  std::mt19937 rng(9);
  for (int t = 0; t < 60; ++t) {
    Graph g = oracle::random_graph(rng, 4 + t % 6, 0.45);
    auto fvs = min_feedback_vertex_set(g);
    CHECK(oracle::acyclic_without(g, fvs.members()));
    int best = -1;
    for (int k = 0; k <= g.n() && best < 0; ++k)
      for (const auto& s : oracle::k_subsets(g.n(), k))
        if (oracle::acyclic_without(g, s)) {
          best = k;
          break;
        }
    CHECK(fvs.count() == best);
  }
}

TEST_CASE("feedback vertex set on a mid-sized sparse graph finishes") {
  std::mt19937 rng(21);
  Graph g = oracle::random_graph(rng, 40, 0.08);
  auto fvs = min_feedback_vertex_set(g);
  CHECK(is_forest(g, fvs));
}

TEST_CASE("biclique search") {
  std::vector<Edge> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) e.emplace_back(i, j);
  CHECK(contains_biclique(Graph(6, e), 3, 3));
  CHECK_FALSE(contains_biclique(Graph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}), 2, 2));
  CHECK_THROWS_AS(find_biclique(complete(30), 10, 2, 1000), Error);
  std::mt19937 rng(13);
  for (int t = 0; t < 80; ++t) {
    Graph g = oracle::random_graph(rng, 8, 0.45);
    auto a = oracle::adjacency(g);
    bool want = false;
    for (const auto& left : oracle::k_subsets(8, 2)) {
      int common = 0;
      for (int v = 0; v < 8; ++v)
        if (a[left[0]][v] && a[left[1]][v]) ++common;
      want = want || common >= 3;
    }
    auto got = find_biclique(g, 2, 3);
    CHECK(got.has_value() == want);
    if (got)
      for (int l : got->left)
        for (int r : got->right) CHECK(a[l][r]);
  }
}

TEST_CASE("max bipartite matching equals brute force") {
  CHECK(max_bipartite_matching(3, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}}).size() == 3);
  CHECK(max_bipartite_matching(3, 3, {}).empty());
  std::mt19937 rng(17);
  for (int t = 0; t < 100; ++t) {
    int nl = 1 + t % 8, nr = 1 + (t / 8) % 8;
    std::vector<std::pair<int, int>> e;
    for (int l = 0; l < nl; ++l)
      for (int r = 0; r < nr; ++r)
        if (rng() % 3 == 0) e.emplace_back(l, r);
    auto m = max_bipartite_matching(nl, nr, e);
    std::set<int> ls, rs;
    for (auto [l, r] : m) {
      CHECK(std::find(e.begin(), e.end(), std::make_pair(l, r)) != e.end());
      ls.insert(l);
      rs.insert(r);
    }
    CHECK(ls.size() == m.size());
    CHECK(rs.size() == m.size());
    // Brute force: best over assignments of each left vertex to a right vertex or nothing.
    int best = 0;
    std::vector<int> used(nr, 0);
    auto rec = [&](auto&& self, int l, int size) -> void {
      if (l == nl) {
        best = std::max(best, size);
        return;
      }
      self(self, l + 1, size);
      for (auto [a, b] : e)
        if (a == l && !used[b]) {
          used[b] = 1;
          self(self, l + 1, size + 1);
          used[b] = 0;
        }
    };
    rec(rec, 0, 0);
    CHECK(static_cast<int>(m.size()) == best);
  }
}

TEST_CASE("decomposition verification") {
  Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
  TreeDecomposition td{{VertexSet(4, {0, 1}), VertexSet(4, {1, 2}), VertexSet(4, {2, 3})}, {{0, 1}, {1, 2}}, {}};
  auto ok = verify_decomposition(p4, td);
  CHECK(ok.valid);
  CHECK(ok.width == 1);
  TreeDecomposition one{{p4.all_vertices()}, {}, {}};
  CHECK(verify_decomposition(p4, one).width == 3);

  // Each axiom broken in turn.
  auto missing_vertex = td;
  missing_vertex.bags[2] = VertexSet(4, {2});
  CHECK_FALSE(verify_decomposition(p4, missing_vertex).valid);
  auto missing_edge = td;
  missing_edge.bags = {VertexSet(4, {0, 1}), VertexSet(4, {1, 2}), VertexSet(4, {3})};
  CHECK_FALSE(verify_decomposition(p4, missing_edge).valid);
  auto broken_subtree = td;
  broken_subtree.bags = {VertexSet(4, {0, 1}), VertexSet(4, {2, 3}), VertexSet(4, {1, 2})};
  CHECK_FALSE(verify_decomposition(p4, broken_subtree).valid);
  auto not_tree = td;
  not_tree.tree = {{0, 1}};
  CHECK_FALSE(verify_decomposition(p4, not_tree).valid);

  td.tape_of = {0, 0, 1, 1};
  CHECK(verify_decomposition(p4, td, 1).structured == false);
  CHECK(verify_decomposition(p4, td, 2).structured);
}

TEST_CASE("min-degree decomposition is always valid") {
  std::mt19937 rng(23);
  for (int t = 0; t < 100; ++t) {
    Graph g = oracle::random_graph(rng, 1 + t % 15, 0.25);
    CHECK(verify_decomposition(g, min_degree_decomposition(g)).valid);
  }
  CHECK(verify_decomposition(cycle(6), min_degree_decomposition(cycle(6))).width == 2);
}
