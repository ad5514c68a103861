#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "oracles.hpp"
#include "reconf/generators.hpp"
#include "reconf/kernelize.hpp"

using namespace reconf;

namespace {

bool oracle_answer(const DcrInstance& inst) {
  return oracle::dcr_reachable(inst.graph, inst.core->members(), inst.source.members(), inst.target.members());
}

// Brute-force core check: every subset of size <= k dominating X dominates V.
bool oracle_core(const Graph& g, int k, const std::vector<int>& x) {
  auto a = oracle::adjacency(g);
  for (int s = 0; s <= k; ++s)
    for (const auto& d : oracle::k_subsets(g.n(), s)) {
      auto hits = [&](int v) {
        for (int u : d)
          if (u == v || a[u][v]) return true;
        return false;
      };
      bool dom_x = true, dom_v = true;
      for (int v : x) dom_x = dom_x && hits(v);
      for (int v = 0; v < g.n(); ++v) dom_v = dom_v && hits(v);
      if (dom_x && !dom_v) return false;
    }
  return true;
}

Graph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

DcrInstance make(const Graph& g, int k, std::vector<int> x, std::vector<int> s, std::vector<int> t, int d = 2,
                 Family f = Family::kK3dFree) {
  DcrInstance inst;
  inst.graph = g;
  inst.k = k;
  inst.core = VertexSet::of(g.n(), x);
  inst.source = VertexSet::of(g.n(), s);
  inst.target = VertexSet::of(g.n(), t);
  inst.d = d;
  inst.family = f;
  return inst;
}

// Random connected instance with a random core containing source and target.
// Half the draws keep a small core so that classes get populated.
std::optional<DcrInstance> random_instance(Rng& rng, const Graph& g, int k) {
  const int n = g.n();
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<int> x;
    double keep = chance(rng, 0.5) ? 0.35 : 0.6;
    for (int v = 0; v < n; ++v)
      if (chance(rng, keep)) x.push_back(v);
    if (static_cast<int>(x.size()) < k || static_cast<int>(x.size()) >= n) continue;
    std::vector<std::vector<int>> good;
    auto a = oracle::adjacency(g);
    for (const auto& idx : oracle::k_subsets(static_cast<int>(x.size()), k)) {
      std::vector<int> d;
      for (int i : idx) d.push_back(x[i]);
      bool ok = true;
      for (int v : x) {
        bool hit = false;
        for (int u : d) hit = hit || u == v || a[u][v];
        ok = ok && hit;
      }
      if (ok) good.push_back(d);
    }
    if (good.empty()) continue;
    auto s = good[uniform(rng, static_cast<int>(good.size()))];
    auto t = good[uniform(rng, static_cast<int>(good.size()))];
    auto inst = make(g, k, x, s, t);
    // Rules only act on tight instances.
    if (!is_tight(inst)) continue;
    return inst;
  }
  return std::nullopt;
}

// Frozen cycle core C_{3k} (tokens on every third vertex) plus a few vertices
// outside the core hanging off it; these give most of the negative instances.
DcrInstance decorated_cycle(Rng& rng) {
  const int k = 2 + uniform(rng, 2);
  const int c = 3 * k;
  const int extra = 2 + uniform(rng, 3);
  const int n = c + extra;
  std::vector<Edge> e;
  for (int i = 0; i < c; ++i) e.emplace_back(i, (i + 1) % c);
  for (int v = c; v < n; ++v) {
    int hooks = 1 + uniform(rng, 2);
    for (int h = 0; h < hooks; ++h) e.emplace_back(uniform(rng, c), v);
    for (int u = c; u < v; ++u)
      if (chance(rng, 0.35)) e.emplace_back(u, v);
  }
  std::vector<int> x, s, t;
  for (int i = 0; i < c; ++i) x.push_back(i);
  const int shift = uniform(rng, 3);
  for (int i = 0; i < k; ++i) {
    s.push_back(3 * i);
    t.push_back(3 * i + shift);
  }
  return make(Graph(n, e), k, x, s, t);
}

Graph random_connected(Rng& rng, int n, double p) {
  GraphParams gp;
  gp.n = n;
  gp.edge_prob = p;
  gp.constraint = GraphConstraint::kConnected;
  return gen_random_graph(rng, gp);
}

// Random treewidth-2 graph: every new vertex attaches to one or both ends of
// an existing edge. Such graphs have no K_4 minor, hence no K_{4,d} minor for d >= 3.
Graph random_series_parallel(Rng& rng, int n) {
  std::vector<Edge> e{{0, 1}};
  for (int v = 2; v < n; ++v) {
    auto [a, b] = e[uniform(rng, static_cast<int>(e.size()))];
    e.emplace_back(a, v);
    if (chance(rng, 0.7)) e.emplace_back(b, v);
  }
  return Graph(n, e);
}

struct Tally {
  int total = 0, positive = 0, changed = 0;
};

Tally check_rule(std::uint64_t seed, int count, const std::function<Graph(Rng&)>& graphs,
                 const std::function<DcrInstance(const DcrInstance&)>& prepare,
                 const std::function<DcrInstance(const DcrInstance&)>& rule, bool may_grow = false) {
  Rng rng(seed);
  Tally tally;
  while (tally.total < count) {
    std::optional<DcrInstance> inst0;
    if (tally.total % 2)
      inst0 = decorated_cycle(rng);
    else
      inst0 = random_instance(rng, graphs(rng), 1 + uniform(rng, 2));
    if (!inst0) continue;
    DcrInstance inst = prepare(*inst0);
    bool want = oracle_answer(inst);
    DcrInstance out = rule(inst);
    CHECK(validate_dcr(out).empty());
    CHECK(oracle_answer(out) == want);
    long long before = inst.graph.n() + inst.graph.edge_count();
    long long after = out.graph.n() + out.graph.edge_count();
    if (!may_grow) CHECK(after <= before);
    ++tally.total;
    tally.positive += want;
    tally.changed += after != before;
  }
  MESSAGE("instances " << tally.total << " positive " << tally.positive << " changed " << tally.changed);
  return tally;
}

DcrInstance same(const DcrInstance& i) { return i; }

}  // namespace

TEST_CASE("core examples") {
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  // A leaf dominates the center, so the center alone is not a core.
  CHECK_FALSE(is_domination_core(star, 1, VertexSet(4, {0})));
  auto x = compute_core(star, 1, VertexSet(4, {0}), 2);
  CHECK(x.test(0));
  CHECK(is_domination_core(star, 1, x));
  CHECK(oracle_core(star, 1, x.members()));

  CHECK(is_domination_core(path(6), 2, VertexSet::full(6)));

  Graph p5 = path(5);
  auto c = compute_core(p5, 2, VertexSet(5), 2);
  CHECK(oracle_core(p5, 2, c.members()));
  CHECK(c.count() <= core_size_bound(2, 2));
  CHECK(core_size_bound(2, 2) == 40);

  CHECK_THROWS_AS(compute_core(path(7), 2, VertexSet(7), 2), Error);
}

TEST_CASE("core check agrees with brute force and greedy output is tight") {
  Rng rng(101);
  for (int t = 0; t < 120; ++t) {
    int n = 4 + uniform(rng, 5);
    Graph g = random_connected(rng, n, 0.35);
    int k = 1 + uniform(rng, 3);
    std::vector<int> x;
    for (int v = 0; v < n; ++v)
      if (chance(rng, 0.6)) x.push_back(v);
    CHECK(is_domination_core(g, k, VertexSet::of(n, x)) == oracle_core(g, k, x));
    if (!dominating_set_within(g, k)) continue;
    auto c = compute_core(g, k, VertexSet(n), 2);
    CHECK(oracle_core(g, k, c.members()));
    // Greedy result is inclusion-minimal.
    for (int v : c.members()) {
      auto smaller = c;
      smaller.reset(v);
      CHECK_FALSE(oracle_core(g, k, smaller.members()));
    }
  }
}

TEST_CASE("twin rule examples") {
  // Core {0,1}; leaves 2 and 3 both hang on 0.
  Graph g(4, {{0, 1}, {0, 2}, {0, 3}});
  auto inst = make(g, 1, {0, 1}, {0}, {0});
  auto out = reduce_twins(inst);
  CHECK(out.graph.n() == 3);
  auto again = reduce_twins(out);
  CHECK(again.graph.edges() == out.graph.edges());

  Graph p(4, {{0, 1}, {1, 2}, {2, 3}});
  auto free = make(p, 2, {0, 3}, {0, 3}, {0, 3});
  CHECK(reduce_twins(free).graph.n() == 4);
}

TEST_CASE("twin rule preserves answers") {
  auto t = check_rule(
      111, 300, [](Rng& r) { return random_connected(r, 5 + uniform(r, 4), 0.3); }, same,
      [](const DcrInstance& i) { return reduce_twins(i); });
  CHECK(t.changed > 50);
  CHECK(t.positive > 30);
  CHECK(t.positive < 270);
}

TEST_CASE("class contraction") {
  // Class {2,3} (both see only 0) with an inner edge.
  Graph g(5, {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {1, 4}});
  auto inst = make(g, 1, {0, 1}, {0}, {0});
  auto out = contract_class_components(inst);
  CHECK(out.graph.n() == 4);
  for (const auto& c : neighborhood_classes(out.graph, *out.core))
    for (int u : c.members.members())
      for (int v : c.members.members()) CHECK_FALSE(out.graph.has_edge(u, v));
  Graph indep(4, {{0, 2}, {0, 3}, {0, 1}});
  auto same_inst = make(indep, 1, {0, 1}, {0}, {0});
  CHECK(contract_class_components(same_inst).graph.edges() == indep.edges());

  auto t = check_rule(
      113, 300, [](Rng& r) { return random_connected(r, 5 + uniform(r, 4), 0.3); }, same,
      [](const DcrInstance& i) { return contract_class_components(i); });
  CHECK(t.changed > 50);
}

TEST_CASE("universal anchor") {
  // Empty 0-class.
  Graph g(3, {{0, 1}, {1, 2}});
  auto inst = make(g, 1, {0, 1}, {1}, {1});
  auto out = add_universal_and_prune_zero_class(inst);
  REQUIRE(out.anchor >= 0);
  auto h = class_histogram(out.graph, *out.core);
  CHECK(h[0] == std::vector<int>{1});

  // Three 0-class vertices 3,4,5 hanging off 2.
  Graph z(6, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {2, 5}});
  auto zi = make(z, 1, {0, 1}, {1}, {0});
  auto zo = add_universal_and_prune_zero_class(zi);
  CHECK(class_histogram(zo.graph, *zo.core)[0] == std::vector<int>{1});
  CHECK(oracle_answer(zo) == oracle_answer(zi));

  // X = V: the anchor is the whole complement.
  Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto all = make(c4, 2, {0, 1, 2, 3}, {0, 2}, {1, 3});
  auto ao = add_universal_and_prune_zero_class(all);
  CHECK(ao.graph.n() == 5);
  CHECK(ao.graph.degree(ao.anchor) == 0);
  // Isolated anchor: the instance is disconnected, answers still agree.
  CHECK(oracle_answer(ao) == oracle_answer(all));

  auto t = check_rule(
      115, 300, [](Rng& r) { return random_connected(r, 5 + uniform(r, 4), 0.3); }, same,
      [](const DcrInstance& i) { return add_universal_and_prune_zero_class(i); }, true);
  CHECK(t.positive > 30);
}

TEST_CASE("spare token breaks the anchor rule, so non-tight instances are left alone") {
  // One token on 1 keeps the core dominated; the other cannot pass it in G,
  // but could detour 0 -> 5 -> anchor -> 4 -> 2 if an anchor were added.
  Graph g(6, {{0, 1}, {0, 5}, {1, 2}, {1, 3}, {2, 4}});
  auto inst = make(g, 2, {0, 1, 2, 3}, {0, 1}, {1, 2});
  CHECK_FALSE(is_tight(inst));
  CHECK_FALSE(oracle_answer(inst));
  Graph with_anchor(7, {{0, 1}, {0, 5}, {1, 2}, {1, 3}, {2, 4}, {4, 6}, {5, 6}});
  CHECK(oracle::dcr_reachable(with_anchor, {0, 1, 2, 3}, {0, 1}, {1, 2}));
  auto out = add_universal_and_prune_zero_class(inst);
  CHECK(out.graph.n() == 6);
  CHECK(out.anchor == -1);
  CHECK(oracle_answer(out) == oracle_answer(inst));
}

TEST_CASE("edge pruning between small classes") {
  // Core {0,1}; classes {2,3,4} (sees 0) and {5,6,7} (sees 1) joined by a matching.
  Graph g(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {1, 6}, {1, 7}, {2, 5}, {3, 6}, {4, 7}});
  auto inst = make(g, 1, {0, 1}, {0}, {1});
  CHECK_THROWS_AS(prune_small_type_edges(inst), Error);
  // Without twin removal, to see the matching go.
  auto anchored = inst;
  {
    auto edges = g.edges();
    for (int v = 2; v < 8; ++v) edges.emplace_back(v, 8);
    anchored.graph = Graph(9, edges);
    anchored.core = VertexSet(9, {0, 1});
    anchored.source = VertexSet(9, {0});
    anchored.target = VertexSet(9, {1});
    anchored.anchor = 8;
  }
  auto out = prune_small_type_edges(anchored);
  for (auto [u, v] : std::vector<Edge>{{2, 5}, {3, 6}, {4, 7}}) CHECK_FALSE(out.graph.has_edge(u, v));
  CHECK(is_connected(out.graph));
  CHECK(oracle_answer(out) == oracle_answer(anchored));

  // No inter-class edges: nothing to do.
  Graph plain(5, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 4}});
  auto p = add_universal_and_prune_zero_class(make(plain, 1, {0, 1, 2, 3}, {0}, {0}));
  auto q = prune_small_type_edges(p);
  CHECK(oracle_answer(q) == oracle_answer(p));

  auto t = check_rule(
      117, 300, [](Rng& r) { return random_connected(r, 5 + uniform(r, 4), 0.35); },
      [](const DcrInstance& i) { return add_universal_and_prune_zero_class(i); },
      [](const DcrInstance& i) {
        auto out = prune_small_type_edges(i);
        // At most one edge left between two classes of type 1 or 2.
        auto classes = neighborhood_classes(out.graph, *out.core);
        for (std::size_t a = 0; a < classes.size(); ++a)
          for (std::size_t b = a + 1; b < classes.size(); ++b) {
            if (classes[a].type() == 0 || classes[b].type() == 0 || classes[a].type() > 2 || classes[b].type() > 2)
              continue;
            int count = 0;
            for (int u : classes[a].members.members())
              for (int v : classes[b].members.members()) count += out.graph.has_edge(u, v);
            CHECK(count <= 1);
          }
        return out;
      });
  CHECK(t.changed > 30);
}

TEST_CASE("fat pairs") {
  // k = 1, d = 2: classes of size 3 joined completely have a matching of 3 > 2.
  std::vector<Edge> e{{0, 1}};
  for (int v = 2; v < 5; ++v) e.emplace_back(0, v);
  for (int v = 5; v < 8; ++v) e.emplace_back(1, v);
  for (int u = 2; u < 5; ++u)
    for (int v = 5; v < 8; ++v) e.emplace_back(u, v);
  auto inst = make(Graph(8, e), 1, {0, 1}, {0}, {0});
  auto fat = fat_pairs(inst);
  REQUIRE(fat.size() == 2);
  CHECK(fat[0].matching == 3);

  // A single edge is never fat when kd >= 1.
  auto thin = make(Graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {2, 4}}), 1, {0, 1}, {0}, {0});
  CHECK(fat_pairs(thin).empty());

  // Matching sizes against brute force over edge subsets.
  Rng rng(119);
  for (int t = 0; t < 60; ++t) {
    Graph g = random_connected(rng, 6 + uniform(rng, 3), 0.45);
    auto inst0 = random_instance(rng, g, 1);
    if (!inst0) continue;
    auto classes = neighborhood_classes(g, *inst0->core);
    std::vector<int> fat_of(classes.size() * classes.size(), 0);
    for (auto pr : fat_pairs(*inst0)) fat_of[pr.from * classes.size() + pr.to] = pr.matching;
    for (std::size_t a = 0; a < classes.size(); ++a)
      for (std::size_t b = 0; b < classes.size(); ++b) {
        if (a == b) continue;
        std::vector<Edge> cross;
        for (int u : classes[a].members.members())
          for (int v : classes[b].members.members())
            if (g.has_edge(u, v)) cross.emplace_back(u, v);
        int best = 0;
        for (int mask = 0; mask < (1 << cross.size()); ++mask) {
          std::set<int> used;
          bool ok = true;
          for (std::size_t i = 0; i < cross.size() && ok; ++i)
            if (mask >> i & 1) ok = used.insert(cross[i].first).second && used.insert(cross[i].second).second;
          if (ok) best = std::max(best, __builtin_popcount(mask));
        }
        int got = fat_of[a * classes.size() + b];
        CHECK((best > inst0->k * inst0->d) == (got > 0));
        if (got > 0) CHECK(got == best);
      }
  }
}

TEST_CASE("3-class pruning") {
  // 3-class {4,5,6} over core {0,1,2}, 1-class {7,8,9} over {0}, matched.
  std::vector<Edge> e{{0, 1}, {1, 2}, {0, 3}, {2, 3}};
  for (int v = 4; v < 7; ++v)
    for (int x = 0; x < 3; ++x) e.emplace_back(x, v);
  for (int v = 7; v < 10; ++v) e.emplace_back(0, v);
  for (int i = 0; i < 3; ++i) e.emplace_back(4 + i, 7 + i);
  auto inst = make(Graph(10, e), 2, {0, 1, 2, 3}, {0, 2}, {1, 3}, 1, Family::kK4dMinorFree);
  CHECK_THROWS_AS(prune_three_classes(make(Graph(10, e), 2, {0, 1, 2, 3}, {0, 2}, {1, 3})), Error);
  REQUIRE(is_tight(inst));
  REQUIRE_FALSE(fat_pairs(inst).empty());
  auto out = prune_three_classes(inst);
  CHECK(oracle_answer(out) == oracle_answer(inst));
  CHECK(out.graph.n() + out.graph.edge_count() < 10 + inst.graph.edge_count());

  // No fat pairs: only twins can go.
  Graph small(5, {{0, 1}, {1, 2}, {0, 3}, {1, 3}, {2, 3}, {3, 4}});
  auto si = make(small, 1, {0, 1, 2}, {1}, {1}, 3, Family::kK4dMinorFree);
  CHECK(fat_pairs(si).empty());

  auto t = check_rule(
      121, 200, [](Rng& r) { return random_series_parallel(r, 6 + uniform(r, 3)); },
      [](const DcrInstance& i) {
        auto j = i;
        j.family = Family::kK4dMinorFree;
        j.d = 3;
        return j;
      },
      [](const DcrInstance& i) { return prune_three_classes(i); });
  CHECK(t.positive > 20);
}

namespace {

DcrInstance k32_free_instance(Rng& rng, bool* ok) {
  GraphParams gp;
  gp.n = 4 + uniform(rng, 5);
  gp.edge_prob = chance(rng, 0.5) ? 0.3 : 0.45;
  gp.constraint = GraphConstraint::kK3dFree;
  gp.d = 2;
  Graph g = gen_random_graph(rng, gp);
  int k = 1 + uniform(rng, 2);
  DcrInstance inst;
  inst.graph = g;
  inst.k = k;
  inst.d = 2;
  auto sets = minimum_dominating_sets(g, k);
  *ok = !sets.empty();
  if (!*ok) return inst;
  inst.source = sets[uniform(rng, static_cast<int>(sets.size()))];
  inst.target = sets[uniform(rng, static_cast<int>(sets.size()))];
  return inst;
}

}  // namespace

TEST_CASE("kernel agrees with the original on K_{3,2}-free graphs") {
  Rng rng(123);
  int done = 0, pos = 0, tight = 0, reduced = 0;
  while (done < 200) {
    bool ok = false;
    auto inst = k32_free_instance(rng, &ok);
    if (!ok) continue;
    std::vector<int> all;
    for (int v = 0; v < inst.graph.n(); ++v) all.push_back(v);
    bool want = oracle::dcr_reachable(inst.graph, all, inst.source.members(), inst.target.members());
    // Every third instance is rejection-sampled to be negative.
    if (done % 3 == 0 && want) continue;
    auto kr = kernelize(inst);
    CHECK(kr.report.ok());
    CHECK(validate_dcr(kr.kernel).empty());
    CHECK(oracle_answer(kr.kernel) == want);
    CHECK(solve_via_kernel(inst).reachable == want);
    CHECK(kr.report.core_size <= kr.report.core_bound);
    // Idempotent.
    auto again = kernelize(kr.kernel);
    CHECK(again.kernel.graph.edges() == kr.kernel.graph.edges());
    CHECK(again.kernel.graph.n() == kr.kernel.graph.n());
    CHECK(*again.kernel.core == *kr.kernel.core);
    CHECK(again.report.rules_applied.empty());
    ++done;
    pos += want;
    tight += kr.report.tight;
    for (const auto& r : kr.report.rules_applied)
      if (r == "reduce_twins" || r == "contract_class_components" || r == "prune_small_type_edges") {
        ++reduced;
        break;
      }
  }
  MESSAGE("positive " << pos << " tight " << tight << " reduced " << reduced);
  CHECK(tight > 100);
  CHECK(reduced > 20);
  CHECK(pos < 160);
}

TEST_CASE("kernel examples") {
  // Trivial yes survives.
  Graph p4 = path(4);
  DcrInstance same_st;
  same_st.graph = p4;
  same_st.k = 2;
  same_st.source = VertexSet(4, {1, 2});
  same_st.target = VertexSet(4, {1, 2});
  CHECK(solve_via_kernel(same_st).reachable);

  // Frozen C6 stays unreachable.
  std::vector<Edge> c6;
  for (int i = 0; i < 6; ++i) c6.emplace_back(i, (i + 1) % 6);
  DcrInstance frozen;
  frozen.graph = Graph(6, c6);
  frozen.k = 2;
  frozen.source = VertexSet(6, {0, 3});
  frozen.target = VertexSet(6, {1, 4});
  auto kr = kernelize(frozen);
  CHECK(kr.report.ok());
  CHECK_FALSE(solve_via_kernel(frozen).reachable);

  // K_{3,2} inside a K3D instance is rejected with the witness.
  Graph k32(5, {{0, 3}, {1, 3}, {2, 3}, {0, 4}, {1, 4}, {2, 4}});
  DcrInstance bad;
  bad.graph = k32;
  bad.k = 2;
  bad.d = 2;
  bad.source = VertexSet(5, {3, 4});
  bad.target = VertexSet(5, {3, 4});
  try {
    kernelize(bad);
    FAIL("expected a family violation");
  } catch (const FamilyViolation& e) {
    CHECK(e.witness().left.size() == 3);
    CHECK(e.witness().right.size() == 2);
  }
}
