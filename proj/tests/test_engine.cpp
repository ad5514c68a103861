#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "reconf/engine.hpp"
#include "reconf/errors.hpp"

using namespace reconf;

namespace {

DsrInstance make(const Graph& g, int k, std::vector<int> s, std::vector<int> t, Rule rule) {
  DsrInstance inst;
  inst.graph = g;
  inst.k = k;
  inst.source = VertexSet::of(g.n(), s);
  inst.target = VertexSet::of(g.n(), t);
  inst.rule = rule;
  return inst;
}

Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

}  // namespace

TEST_CASE("successor examples") {
  Graph p3(3, {{0, 1}, {1, 2}});
  auto inst = make(p3, 2, {0, 1}, {1, 2}, Rule::kSlide);
  auto s = successors(inst, inst.source);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == VertexSet(3, {0, 2}));

  auto c6 = make(cycle(6), 2, {0, 3}, {1, 4}, Rule::kSlide);
  CHECK(successors(c6, c6.source).empty());
  auto r = solve(c6);
  CHECK_FALSE(r.reachable);

  auto full = make(p3, 3, {0, 1, 2}, {0, 1, 2}, Rule::kJump);
  CHECK(successors(full, full.source).empty());
  CHECK_THROWS_AS(successors(inst, VertexSet(3, {0})), Error);
}

TEST_CASE("solve examples") {
  Graph p3(3, {{0, 1}, {1, 2}});
  auto same = make(p3, 2, {0, 1}, {0, 1}, Rule::kSlide);
  auto r0 = solve(same);
  CHECK(r0.reachable);
  CHECK(r0.witness.size() == 1);

  auto inst = make(p3, 2, {0, 1}, {1, 2}, Rule::kSlide);
  auto r = solve(inst);
  CHECK(r.reachable);
  REQUIRE(r.witness.size() == 3);
  CHECK(r.witness[1] == VertexSet(3, {0, 2}));
  CHECK(verify_witness(inst, r.witness));
}

TEST_CASE("state cap is enforced") {
  Graph g = cycle(12);
  auto inst = make(g, 6, {0, 2, 4, 6, 8, 10}, {1, 3, 5, 7, 9, 11}, Rule::kJump);
  CHECK_THROWS_AS(solve(inst, 3), Error);
}

TEST_CASE("verify_witness rejects broken sequences") {
  Graph p3(3, {{0, 1}, {1, 2}});
  auto inst = make(p3, 2, {0, 1}, {1, 2}, Rule::kSlide);
  CHECK_FALSE(verify_witness(inst, {inst.source, inst.target}));  // not a slide
  CHECK_FALSE(verify_witness(inst, {inst.source}));
  auto jump = inst;
  jump.rule = Rule::kJump;
  CHECK(verify_witness(jump, {inst.source, inst.target}));
}

TEST_CASE("solve agrees with a recursive DFS oracle") {
  std::mt19937 rng(101);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    int n = 2 + t % 5;
    Graph g = oracle::random_graph(rng, n, 0.5);
    int k = 1 + static_cast<int>(rng() % 3);
    if (k > n) continue;
    auto sets = minimum_dominating_sets(g, k);
    if (sets.empty()) continue;
    const auto& s = sets[rng() % sets.size()];
    const auto& d = sets[rng() % sets.size()];
    for (Rule rule : {Rule::kSlide, Rule::kJump}) {
      auto inst = make(g, k, s.members(), d.members(), rule);
      oracle::DfsOracle o{g, k, rule == Rule::kSlide, false};
      auto r = solve(inst);
      CHECK(r.reachable == o.reach(s.members(), d.members()));
      if (r.reachable) CHECK(verify_witness(inst, r.witness));
      // symmetry
      auto back = inst;
      std::swap(back.source, back.target);
      CHECK(solve(back).reachable == r.reachable);
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("connected variant agrees with oracle and slide implies jump") {
  std::mt19937 rng(202);
  for (int t = 0; t < 200; ++t) {
    int n = 3 + t % 4;
    Graph g = oracle::random_graph(rng, n, 0.55);
    int k = 1 + static_cast<int>(rng() % 3);
    auto sets = minimum_dominating_sets(g, k, {std::nullopt, true});
    if (sets.empty()) continue;
    const auto& s = sets[rng() % sets.size()];
    const auto& d = sets[rng() % sets.size()];
    auto inst = make(g, k, s.members(), d.members(), Rule::kSlide);
    inst.connected = true;
    oracle::DfsOracle o{g, k, true, true};
    auto r = solve(inst);
    CHECK(r.reachable == o.reach(s.members(), d.members()));
    auto j = inst;
    j.rule = Rule::kJump;
    if (r.reachable) CHECK(solve(j).reachable);
  }
}

TEST_CASE("disconnected graphs are solved per component") {
  // Two disjoint P3s, one token each.
  Graph g(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  auto inst = make(g, 2, {1, 4}, {1, 4}, Rule::kSlide);
  CHECK(solve(inst).reachable);
  // Two disjoint P2s with two tokens each side: slide one token per component.
  Graph h(4, {{0, 1}, {2, 3}});
  auto i2 = make(h, 2, {0, 2}, {1, 3}, Rule::kSlide);
  auto r = solve(i2);
  CHECK(r.reachable);
  CHECK(verify_witness(i2, r.witness));
  CHECK(r.witness.size() == 3);
}

TEST_CASE("partitioned jumping keeps one token per part") {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto inst = make(g, 2, {0, 2}, {1, 3}, Rule::kJump);
  inst.partition = {VertexSet(4, {0, 1}), VertexSet(4, {2, 3})};
  auto r = solve(inst);
  CHECK(r.reachable);
  CHECK(verify_witness(inst, r.witness));
  for (const auto& d : r.witness) CHECK(is_feasible(inst, d));
}

TEST_CASE("dominating set enumeration") {
  Graph p3(3, {{0, 1}, {1, 2}});
  auto one = minimum_dominating_sets(p3, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == VertexSet(3, {1}));
  CHECK(minimum_dominating_sets(cycle(5), 2).size() == 5);
  CHECK(domination_number(cycle(5)) == 2);
  std::mt19937 rng(33);
  for (int t = 0; t < 100; ++t) {
    Graph g = oracle::random_graph(rng, 7, 0.3);
    int k = 1 + t % 4;
    std::vector<std::vector<int>> want;
    for (const auto& s : oracle::k_subsets(7, k)) {
      bool ok = true;
      for (int v = 0; v < 7; ++v) ok = ok && oracle::dominated_by(g, s, v);
      if (ok) want.push_back(s);
    }
    auto got = minimum_dominating_sets(g, k);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].members() == want[i]);
  }
}

TEST_CASE("branching search finds every minimum dominating set") {
  std::mt19937 rng(44);
  for (int t = 0; t < 120; ++t) {
    Graph g = oracle::random_graph(rng, 3 + t % 6, 0.3);
    int gamma = domination_number(g);
    auto got = all_minimum_dominating_sets(g, g.n());
    auto want = minimum_dominating_sets(g, gamma);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
    VertexSet forbid(g.n());
    forbid.set(0);
    bool brute = false;
    for (const auto& s : oracle::k_subsets(g.n(), gamma)) {
      if (s[0] == 0) continue;
      bool ok = true;
      for (int v = 0; v < g.n(); ++v) ok = ok && oracle::dominated_by(g, s, v);
      brute = brute || ok;
    }
    CHECK(dominating_set_within(g, gamma, &forbid) == brute);
  }
}
