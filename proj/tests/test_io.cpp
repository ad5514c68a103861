#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reconf/errors.hpp"
#include "reconf/generators.hpp"
#include "reconf/io.hpp"

using namespace reconf;

namespace {

bool same_tape(const Tape& a, const Tape& b) {
  return a.cells.edges() == b.cells.edges() && a.cells.n() == b.cells.n() && a.content == b.content &&
         a.start == b.start && a.end == b.end && a.number == b.number;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kInfeasible;
}

}  // namespace

TEST_CASE("graph format") {
  Graph g(3, {{1, 2}, {0, 1}}, {{2, "y"}});
  Json j = to_json(g);
  CHECK(dump(j) == R"({"edges":[[0,1],[1,2]],"kind":"graph","labels":{"2":"y"},"n":3,"version":1})");
  Graph back = graph_from_json(j);
  CHECK(back.edges() == g.edges());
  CHECK(back.label(2) == "y");
  // Kind and version are optional on input.
  CHECK(graph_from_json(parse_json(R"({"n":2,"edges":[[0,1]]})")).edge_count() == 1);
}

TEST_CASE("malformed inputs") {
  CHECK(kind_of([] { parse_json("{not json"); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { graph_from_json(parse_json(R"({"n":2,"edges":[[0,5]]})")); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { graph_from_json(parse_json(R"({"n":2,"edges":[[0]]})")); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { graph_from_json(parse_json(R"({"n":"2","edges":[]})")); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { graph_from_json(parse_json(R"({"kind":"tape","n":2,"edges":[]})")); }) ==
        ErrorKind::kMalformedInput);
  CHECK(kind_of([] { graph_from_json(parse_json(R"({"version":2,"n":2,"edges":[]})")); }) ==
        ErrorKind::kMalformedInput);
  // Source does not dominate.
  CHECK(kind_of([] {
          dsr_from_json(parse_json(
              R"({"graph":{"n":3,"edges":[[0,1],[1,2]]},"k":1,"source":[0],"target":[1],"rule":"slide"})"));
        }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { read_artifact(parse_json(R"({"kind":"nope"})")); }) == ErrorKind::kMalformedInput);
  CHECK(kind_of([] { tape_from_json(parse_json(R"({"sigma":1,"tapes":[{"cells":{"n":1,"edges":[]},"content":{"x":[0]},"start":0,"end":0}],"cs":[0],"ct":[0]})")); }) ==
        ErrorKind::kMalformedInput);
}

TEST_CASE("dsr round trip") {
  Rng rng(3);
  int done = 0;
  while (done < 30) {
    DsrParams p;
    p.graph.n = 3 + uniform(rng, 5);
    p.k = 1 + uniform(rng, 2);
    p.rule = chance(rng, 0.5) ? Rule::kSlide : Rule::kJump;
    p.partitioned = p.rule == Rule::kJump && chance(rng, 0.5);
    auto inst = gen_random_dsr(rng, p);
    if (!inst) continue;
    if (chance(rng, 0.3)) inst->core = inst->graph.all_vertices();
    Json j = to_json(*inst);
    auto back = dsr_from_json(parse_json(dump(j)));
    CHECK(dump(to_json(back)) == dump(j));
    CHECK(back.partition == inst->partition);
    CHECK(back.core == inst->core);
    ++done;
  }
}

TEST_CASE("tape and multi round trip") {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    TapeParams p;
    p.tapes = 1 + uniform(rng, 3);
    p.sigma = 1 + uniform(rng, 3);
    p.sync = t % 2 == 0;
    auto inst = gen_random_tape_instance(rng, p);
    auto back = tape_from_json(parse_json(dump(to_json(inst))));
    REQUIRE(back.tapes.size() == inst.tapes.size());
    for (std::size_t i = 0; i < inst.tapes.size(); ++i) CHECK(same_tape(back.tapes[i], inst.tapes[i]));
    CHECK(back.cs == inst.cs);
    CHECK(back.ct == inst.ct);
    CHECK(back.sync == inst.sync);
    CHECK(back.r == inst.r);

    MultiParams mp;
    mp.sync = t % 3 == 0;
    auto m = gen_random_multi(rng, mp);
    auto mb = multi_from_json(to_json(m));
    CHECK(dump(to_json(mb)) == dump(to_json(m)));
  }
}

TEST_CASE("formula, dcr, provenance and witnesses") {
  NormalizedFormula phi{3, Formula::all_of({Formula::any_of({Formula::variable(0), Formula::variable(2)}),
                                            Formula::variable(1)})};
  Json j = to_json(phi);
  CHECK(dump(j["formula"]) == R"({"and":[{"or":[0,2]},1]})");
  CHECK(dump(to_json(formula_from_json(j))) == dump(j));
  CHECK_THROWS_AS(formula_from_json(parse_json(R"({"variables":1,"formula":{"xor":[0]}})")), Error);

  DcrInstance d;
  d.graph = Graph(4, {{0, 1}, {1, 2}, {2, 3}});
  d.k = 2;
  d.source = VertexSet(4, {0, 2});
  d.target = VertexSet(4, {1, 3});
  d.family = Family::kK4dMinorFree;
  d.d = 3;
  auto back = dcr_from_json(to_json(d));
  CHECK_FALSE(back.core.has_value());
  CHECK(back.family == Family::kK4dMinorFree);
  CHECK(dump(to_json(back)) == dump(to_json(d)));
  // A plain sliding instance reads as a core instance.
  DsrInstance plain;
  plain.graph = d.graph;
  plain.k = 2;
  plain.source = d.source;
  plain.target = d.target;
  CHECK(dcr_from_json(to_json(plain)).k == 2);

  Provenance p{"demo", {{"x", {1, 2}}}};
  auto pb = provenance_from_json(to_json(p));
  CHECK(pb.construction == "demo");
  CHECK(pb.data == p.data);

  std::vector<VertexSet> w{VertexSet(4, {0, 2}), VertexSet(4, {1, 2})};
  CHECK(dump(witness_to_json(w)) == "[[0,2],[1,2]]");
  CHECK(witness_from_json(witness_to_json(w), 4) == w);
  CHECK_THROWS_AS(witness_from_json(parse_json("[[7]]"), 4), Error);
  std::vector<Config> tw{{0, 1}, {1, 1}};
  CHECK(tape_witness_from_json(tape_witness_to_json(tw)) == tw);
}

TEST_CASE("artifacts route by kind") {
  Graph g(2, {{0, 1}});
  auto a = read_artifact(to_json(g));
  CHECK(a.kind == "graph");
  CHECK(std::holds_alternative<Graph>(a.value));
  CHECK(dump(write_artifact(a)) == dump(to_json(g)));
  Json bare = to_json(g);
  bare.erase("kind");
  CHECK(read_artifact(bare, "graph").kind == "graph");
  CHECK_THROWS_AS(read_artifact(bare), Error);
}
