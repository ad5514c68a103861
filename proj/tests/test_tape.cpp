#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "reconf/errors.hpp"
#include "reconf/generators.hpp"
#include "reconf/tape.hpp"

using namespace reconf;

namespace {
TapeInstance single(int sigma, const std::vector<std::vector<int>>& cells, int cs, int ct) {
  TapeInstance inst;
  inst.sigma = sigma;
  inst.tapes.push_back(path_tape(sigma, cells));
  inst.cs = {cs};
  inst.ct = {ct};
  return inst;
}
}  // namespace

TEST_CASE("configuration validity") {
  auto one = single(1, {{0}, {0}, {0}}, 0, 2);
  for (int c = 0; c < 3; ++c) CHECK(is_valid_configuration(one, {c}));
  TapeInstance two;
  two.sigma = 2;
  two.tapes = {path_tape(2, {{0}}), path_tape(2, {{0}})};
  CHECK_FALSE(is_valid_configuration(two, {0, 0}));
}

TEST_CASE("successors and the pinned head") {
  auto p3 = single(1, {{0}, {0}, {0}}, 1, 1);
  auto s = tape_successors(p3, {1});
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Config{0});
  CHECK(s[1] == Config{2});
  auto pinned = single(1, {{}, {0}, {}}, 1, 1);
  CHECK(tape_successors(pinned, {1}).empty());
  CHECK_THROWS_AS(tape_successors(pinned, {0}), Error);
}

TEST_CASE("sync filter rejects desynchronizing moves") {
  TapeInstance inst;
  inst.sigma = 1;
  inst.sync = true;
  inst.r = 9;
  inst.tapes = {path_tape(1, {{0}, {0}, {0}}, {1, 2, 3}), path_tape(1, {{0}, {0}, {0}}, {1, 2, 3})};
  inst.cs = {0, 0};
  inst.ct = {2, 2};
  auto s = tape_successors(inst, {1, 0});
  // tape 0 cannot go to number 3 while tape 1 sits on 1
  for (const auto& c : s) CHECK(c != Config{2, 0});
  auto r = solve_tape(inst);
  CHECK(r.reachable);
  for (const auto& c : r.witness) CHECK(synchronized(inst, c));
}

TEST_CASE("solve_tape examples") {
  auto p3 = single(1, {{0}, {0}, {0}}, 0, 2);
  auto r = solve_tape(p3);
  CHECK(r.reachable);
  CHECK(r.witness.size() == 3);

  TapeInstance two;
  two.sigma = 1;
  two.tapes = {path_tape(1, {{0}, {}}), path_tape(1, {{}, {0}})};
  two.cs = {0, 0};
  two.ct = {1, 1};
  auto r2 = solve_tape(two);
  CHECK(r2.reachable);
  REQUIRE(r2.witness.size() == 3);
  CHECK(r2.witness[1] == Config{0, 1});
  CHECK(verify_tape_witness(two, r2.witness));
}

TEST_CASE("solve_tape agrees with the product-space oracle") {
  Rng rng(77);
  int positives = 0, total = 0;
  for (int t = 0; t < 300; ++t) {
    TapeParams p;
    p.tapes = 1 + t % 3;
    p.max_cells = 5;
    p.sigma = 1 + t % 3;
    p.sync = t % 4 == 1;
    p.path_sync = t % 4 == 2;
    p.letter_prob = 0.5;
    auto inst = gen_random_tape_instance(rng, p);
    CHECK(validate_instance(inst, {false, p.path_sync, false}).empty());
    auto r = solve_tape(inst);
    CHECK(r.reachable == oracle::tape_reachable(inst));
    if (r.reachable) CHECK(verify_tape_witness(inst, r.witness));
    auto back = inst;
    std::swap(back.cs, back.ct);
    CHECK(solve_tape(back).reachable == r.reachable);
    positives += r.reachable;
    ++total;
  }
  CHECK(positives > 0);
  CHECK(positives < total);
}

TEST_CASE("solve_multi on singleton tuples equals solve_tape") {
  Rng rng(88);
  for (int t = 0; t < 100; ++t) {
    MultiParams p;
    p.tuples = 1 + t % 3;
    p.tapes_per_tuple = 1;
    p.sync = t % 2;
    auto m = gen_random_multi(rng, p);
    auto flat = select(m, std::vector<int>(m.tuples.size(), 0));
    bool want = is_valid_configuration(flat, flat.cs) && is_valid_configuration(flat, flat.ct) &&
                solve_tape(flat).reachable;
    CHECK(solve_multi(m).positive == want);
  }
  for (int t = 0; t < 60; ++t) {
    MultiParams p;
    p.sync = t % 2;
    auto m = gen_random_multi(rng, p);
    auto got = solve_multi(m);
    CHECK(got.positive == oracle::multi_positive(m));
  }
}

TEST_CASE("irreducibility") {
  auto one = single(2, {{0}, {1}}, 0, 0);
  CHECK(is_irreducible(one));
  TapeInstance two;
  two.sigma = 2;
  two.tapes = {path_tape(2, {{0, 1}}), path_tape(2, {{0}})};
  two.cs = two.ct = {0, 0};
  CHECK_FALSE(is_irreducible(two));

  Rng rng(5);
  for (int t = 0; t < 150; ++t) {
    TapeParams p;
    p.tapes = 2 + t % 2;
    p.max_cells = 3;
    p.sigma = 2 + t % 3;
    auto inst = gen_random_tape_instance(rng, p);
    // Brute force over all cell subsets smaller than the tape count.
    std::vector<LetterSet> cells;
    for (const auto& tp : inst.tapes)
      for (const auto& c : tp.content) cells.push_back(c);
    bool reducible = false;
    int m = static_cast<int>(cells.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
      if (__builtin_popcount(mask) >= p.tapes) continue;
      LetterSet u(inst.sigma);
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) u |= cells[i];
      reducible = reducible || u.count() == inst.sigma;
    }
    CHECK(is_irreducible(inst) == !reducible);
  }
}

TEST_CASE("extended graph") {
  TapeInstance inst;
  inst.sigma = 2;
  inst.tapes = {path_tape(2, {{}, {}})};
  auto eg = extended_graph(inst);
  CHECK(eg.graph.n() == 4);
  CHECK(eg.graph.edge_count() == 1);
  inst.tapes = {path_tape(2, {{0, 1}})};
  eg = extended_graph(inst);
  CHECK(eg.graph.degree(0) == 2);
  CHECK(eg.tape_of == std::vector<int>{0, -1, -1});
}

TEST_CASE("validate_instance reports violations") {
  TapeInstance inst;
  inst.sigma = 1;
  inst.sync = true;
  inst.r = 6;
  inst.tapes = {path_tape(1, {{0}, {0}}, {1, 2})};
  inst.cs = {0};
  inst.ct = {0};
  CHECK(validate_instance(inst).empty());
  auto bad = inst;
  bad.tapes[0].number = {1, 3};
  CHECK(validate_instance(bad).size() == 1);
  auto uncovered = inst;
  uncovered.tapes[0].content[1] = LetterSet(1);
  uncovered.ct = {1};
  CHECK(validate_instance(uncovered).size() == 1);
}

TEST_CASE("generators are reproducible") {
  TapeParams p;
  p.sync = true;
  auto a = gen_random_tape_instance(42, p), b = gen_random_tape_instance(42, p);
  CHECK(a.cs == b.cs);
  CHECK(a.tapes.size() == b.tapes.size());
  for (std::size_t i = 0; i < a.tapes.size(); ++i) {
    CHECK(a.tapes[i].content == b.tapes[i].content);
    CHECK(a.tapes[i].cells.edges() == b.tapes[i].cells.edges());
  }
  GraphParams gp;
  gp.constraint = GraphConstraint::kK3dFree;
  gp.n = 8;
  CHECK_FALSE(contains_biclique(gen_random_graph(9, gp), 3, 2));
  gp.n = 1;
  CHECK(gen_random_graph(9, gp).n() == 1);
}

TEST_CASE("tape irreducibility against brute force") {
  Rng rng(61);
  for (int t = 0; t < 150; ++t) {
    TapeParams p;
    p.tapes = 1 + uniform(rng, 3);
    p.max_cells = 3;
    p.sigma = 1 + uniform(rng, 3);
    auto inst = gen_random_tape_instance(rng, p);
    const int k = static_cast<int>(inst.tapes.size());
    // Enumerate one cell or nothing per tape, at least one tape left out.
    bool cover = false;
    std::vector<int> pick(k, -1);
    while (true) {
      int missing = 0;
      std::vector<bool> have(inst.sigma, false);
      for (int i = 0; i < k; ++i) {
        if (pick[i] < 0) {
          ++missing;
          continue;
        }
        for (int a : inst.tapes[i].content[pick[i]].members()) have[a] = true;
      }
      if (missing > 0 && std::all_of(have.begin(), have.end(), [](bool b) { return b; })) cover = true;
      int i = k - 1;
      while (i >= 0 && pick[i] + 1 == inst.tapes[i].size()) pick[i--] = -1;
      if (i < 0) break;
      ++pick[i];
    }
    CHECK(is_tape_irreducible(inst) == !cover);
    if (is_irreducible(inst)) CHECK(is_tape_irreducible(inst));
  }
}
