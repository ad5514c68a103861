#include "reconf/acceptance.hpp"

#include <functional>
#include <sstream>

#include "oracles.hpp"
#include "reconf/errors.hpp"
#include "reconf/generators.hpp"
#include "reconf/kernelize.hpp"
#include "reconf/reductions.hpp"
#include "reconf/tape_reduce.hpp"

namespace reconf {

namespace {

// Collects the first failure and a few counters for the detail line.
class Tally {
 public:
  explicit Tally(CriterionResult& r) : r_(r) {}

  void check(bool ok, const std::string& what) {
    if (ok || !r_.pass) return;
    r_.pass = false;
    std::ostringstream ss;
    ss << "instance " << r_.instances << ": " << what;
    failure_ = ss.str();
  }
  void note(const std::string& key, long long value) { notes_ << key << "=" << value << " "; }
  void finish() {
    std::string n = notes_.str();
    if (!n.empty()) n.pop_back();
    r_.detail = failure_.empty() ? n : failure_ + (n.empty() ? "" : " (" + n + ")");
  }

 private:
  CriterionResult& r_;
  std::string failure_;
  std::ostringstream notes_;
};

int count_or(const AcceptanceOptions& opt, int fallback) { return opt.trials > 0 ? opt.trials : fallback; }

Rng seeded(const AcceptanceOptions& opt, std::uint64_t base) { return Rng(base ^ (opt.seed * 0x9e3779b97f4a7c15ULL)); }

Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Formula random_formula(Rng& rng, int vars, int depth, bool conj) {
  if (depth == 0) return Formula::variable(uniform(rng, vars));
  std::vector<Formula> kids;
  int width = 1 + uniform(rng, 3);
  for (int i = 0; i < width; ++i) {
    int d = (depth == 1 || chance(rng, 0.25)) ? 0 : depth - 1;
    kids.push_back(random_formula(rng, vars, d, !conj));
  }
  return conj ? Formula::all_of(kids) : Formula::any_of(kids);
}

// Sync tapes desynchronized by the triangle gadget: the inputs the two DSR
// reductions need.
TapeInstance irreducible_instance(Rng& rng, int tapes, int max_cells, int sigma) {
  TapeParams p;
  p.tapes = tapes;
  p.min_cells = std::min(3, max_cells);
  p.max_cells = max_cells;
  p.sigma = sigma;
  p.sync = true;
  return desynchronize_triangle(gen_random_tape_instance(rng, p));
}

int eg_degeneracy(const TapeInstance& inst) { return degeneracy(extended_graph(inst).graph).d; }

CriterionResult dominating_set_template(const AcceptanceOptions& opt) {
  CriterionResult r{1, "dominating set template", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1001);
  int pos = 0;
  const int total = count_or(opt, 210);
  while (r.instances < total) {
    GraphParams gp;
    gp.n = 1 + uniform(rng, 7);
    gp.edge_prob = 0.2 + 0.1 * uniform(rng, 4);
    gp.constraint = GraphConstraint::kConnected;
    Graph g = gen_random_graph(rng, gp);
    int k = 1 + uniform(rng, 3);
    bool want = oracle::has_k_dominating_set(g, k);
    auto got = solve_multi(ds_to_sync_multi(g, k));
    t.check(got.positive == want, "template answer differs from subset enumeration");
    pos += want;
    ++r.instances;
  }
  t.note("positive", pos);
  t.finish();
  return r;
}

CriterionResult c5_picture(const AcceptanceOptions&) {
  CriterionResult r{2, "C5 template picture", true, 1, {}};
  Tally t(r);
  auto m = ds_to_sync_multi(cycle(5), 2);
  bool shape = m.tuples.size() == 2 && m.tuples[0].size() == 5 && m.tuples[0][0].size() == 5;
  t.check(shape, "expected 2 tuples of 5 tapes with 5 cells");
  if (shape) {
    std::string pattern;
    for (int c = 0; c < 5; ++c) pattern += m.tuples[0][0].content[c].test(0) ? 'Y' : '.';
    t.check(pattern == "YY..Y", "tape of v1 reads " + pattern);
    t.note("v1_pattern_ok", pattern == "YY..Y");
    auto res = solve_multi(m);
    t.check(res.positive, "instance not positive");
    t.check(res.selection == std::vector<int>{0, 2}, "selection is not {v1, v3}");
    t.check(solve_tape(select(m, {0, 2})).reachable, "selection {v1, v3} does not reach");
  }
  t.finish();
  return r;
}

CriterionResult triangle(const AcceptanceOptions& opt) {
  CriterionResult r{3, "triangle desynchronization", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1003);
  int pos = 0, literal = 0;
  const int total = count_or(opt, 120);
  for (; r.instances < total; ++r.instances) {
    TapeParams p;
    p.tapes = 1 + uniform(rng, 3);
    p.min_cells = 3;
    p.max_cells = 3 + uniform(rng, 4);
    p.sigma = 1 + uniform(rng, 3);
    p.sync = true;
    auto in = gen_random_tape_instance(rng, p);
    auto out = desynchronize_triangle(in);
    bool want = oracle::tape_reachable(in);
    pos += want;
    auto got = solve_tape(out);
    t.check(got.reachable == want, "answers differ");
    if (got.reachable) t.check(verify_tape_witness(out, got.witness), "witness rejected");
    t.check(is_tape_irreducible(out), "output not tape-irreducible");
    literal += is_irreducible(out);
    t.check(eg_degeneracy(out) <= eg_degeneracy(in) + 2, "degeneracy grew by more than 2");
  }
  t.note("positive", pos);
  t.note("literally_irreducible", literal);
  t.finish();
  return r;
}

CriterionResult path_and_selector(const AcceptanceOptions& opt) {
  CriterionResult r{4, "path desynchronization and selector", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1004);
  int pos_path = 0, pos_sel = 0;
  const int total = count_or(opt, 120);
  for (int i = 0; i < total; ++i, ++r.instances) {
    TapeParams p;
    p.tapes = 1 + uniform(rng, 3);
    p.min_cells = 3;
    p.max_cells = 3 + uniform(rng, 4);
    p.sigma = 1 + uniform(rng, 3);
    p.path_sync = true;
    auto in = gen_random_tape_instance(rng, p);
    auto out = desynchronize_path(in);
    bool want = oracle::tape_reachable(in);
    pos_path += want;
    for (const auto& tape : out.tapes) t.check(is_path_tape(tape), "path desynchronizer output tape is not a path");
    t.check(!out.sync, "path desynchronizer output still synchronized");
    t.check(solve_tape(out).reachable == want, "path desynchronizer answers differ");
    t.check(eg_degeneracy(out) <= eg_degeneracy(in) + 2, "path desynchronizer degeneracy grew by more than 2");
  }
  for (int i = 0; i < total; ++i, ++r.instances) {
    MultiParams p;
    p.tuples = 1 + uniform(rng, 2);
    p.tapes_per_tuple = 1 + uniform(rng, 3);
    p.max_cells = 3;
    p.sigma = 1 + uniform(rng, 2);
    auto m = gen_random_multi(rng, p);
    auto out = select_from_tuples(m);
    bool want = oracle::multi_positive(m);
    pos_sel += want;
    for (const auto& tape : out.tapes) t.check(is_path_tape(tape), "selector output tape is not a path");
    t.check(solve_tape(out).reachable == want, "selector answers differ");
  }
  t.note("path_positive", pos_path);
  t.note("selector_positive", pos_sel);
  t.finish();
  return r;
}

// Suite shared by the two DSR reductions.
std::vector<TapeInstance> dsr_suite(const AcceptanceOptions& opt, std::uint64_t base) {
  Rng rng = seeded(opt, base);
  std::vector<TapeInstance> out;
  const int total = count_or(opt, 100);
  for (int i = 0; i < total; ++i) {
    if (i % 5 == 4) {
      // Plain single-tape instances keep the anchor enumeration affordable.
      TapeParams p;
      p.tapes = 1;
      p.min_cells = 2;
      p.max_cells = 4;
      p.sigma = 1 + uniform(rng, 2);
      p.paths = chance(rng, 0.5);
      out.push_back(gen_random_tape_instance(rng, p));
    } else {
      out.push_back(irreducible_instance(rng, 1 + uniform(rng, 2), 3 + uniform(rng, 3), 1 + uniform(rng, 3)));
    }
  }
  return out;
}

CriterionResult tape_to_sliding(const AcceptanceOptions& opt) {
  CriterionResult r{5, "tapes to token sliding", true, 0, {}};
  Tally t(r);
  int pos = 0;
  for (const auto& in : dsr_suite(opt, 1005)) {
    t.check(is_tape_irreducible(in), "suite instance not tape-irreducible");
    auto out = tape_to_ts_dsr(in);
    bool want = oracle::tape_reachable(in);
    pos += want;
    auto got = solve(out);
    t.check(got.reachable == want, "answers differ");
    if (got.reachable) t.check(verify_witness(out, got.witness), "witness rejected");
    auto rep = check_min_ds_structure(out);
    t.check(rep.ok, "minimum dominating set structure: " + rep.reason);
    auto eg = extended_graph(in).graph;
    const int k = static_cast<int>(in.tapes.size());
    t.check(degeneracy(out.graph).d <= degeneracy(eg).d + 2, "degeneracy above d+2");
    // Explicit feedback set F ∪ {x_i} ∪ {y}, checked by the naive forest test,
    // and the exact minimum against the same bound.
    VertexSet f = min_feedback_vertex_set(eg);
    t.check(oracle::acyclic_without(eg, f.members()), "minimum FVS of the extended graph leaves a cycle");
    std::vector<int> explicit_set = f.members();
    for (int v : out.provenance.data.at("x")) explicit_set.push_back(v);
    explicit_set.push_back(out.provenance.data.at("y")[0]);
    t.check(oracle::acyclic_without(out.graph, explicit_set), "F + x_i + y is not a feedback vertex set");
    t.check(min_feedback_vertex_set(out.graph).count() <= f.count() + k + 1, "minimum FVS above f+k+1");
    auto dec = derive_decomposition(out);
    auto chk = verify_decomposition(dec.graph, dec.td, dec.structure_bound);
    t.check(chk.valid, "decomposition invalid: " + chk.reason);
    t.check(chk.width <= dec.width_bound, "decomposition wider than s+w+1");
    ++r.instances;
  }
  t.note("positive", pos);
  t.finish();
  return r;
}

CriterionResult tape_to_connected_jumping(const AcceptanceOptions& opt) {
  CriterionResult r{6, "tapes to connected token jumping", true, 0, {}};
  Tally t(r);
  int pos = 0, enumerated = 0;
  long long sets = 0;
  for (const auto& in : dsr_suite(opt, 1005)) {
    auto out = tape_to_tj_cdsr(in);
    bool want = oracle::tape_reachable(in);
    pos += want;
    auto got = solve(out);
    t.check(got.reachable == want, "answers differ");
    if (got.reachable) t.check(verify_witness(out, got.witness), "witness rejected");
    auto rep = check_cdsr_anchors(out);
    t.check(rep.ok, "anchor check: " + rep.reason);
    const auto& xs = out.provenance.data.at("x");
    if (xs.size() == 1) {
      // Every connected dominating set of size 3k+1 = 4 contains x_0.
      ++enumerated;
      for (const auto& s : oracle::k_subsets(out.graph.n(), 4)) {
        VertexSet d = VertexSet::of(out.graph.n(), s);
        if (!dominates_all(out.graph, d) || !induces_connected(out.graph, d)) continue;
        ++sets;
        t.check(d.test(xs[0]), "a connected dominating set of size 4 avoids x_0");
      }
    }
    ++r.instances;
  }
  t.note("positive", pos);
  t.note("enumerated_instances", enumerated);
  t.note("connected_dominating_sets", sets);
  t.finish();
  return r;
}

CriterionResult formulas(const AcceptanceOptions& opt) {
  CriterionResult r{7, "formula pipeline", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1007);
  int pos = 0, checks = 0;
  const int total = count_or(opt, 60);
  for (; r.instances < total; ++r.instances) {
    NormalizedFormula phi;
    phi.variables = 1 + uniform(rng, 6);
    phi.root = random_formula(rng, phi.variables, 1 + uniform(rng, 3), true);
    t.check(formula_problem(phi).empty() && formula_depth(phi) <= 3, "corpus formula malformed");
    for (int k = 0; k <= 3; ++k) {
      bool want = oracle::weighted_sat(phi, k);
      pos += want;
      ++checks;
      t.check(solve_multi(formula_to_multi(phi, k)).positive == want, "answer differs for k=" + std::to_string(k));
    }
  }
  t.note("checks", checks);
  t.note("positive", pos);
  t.finish();
  return r;
}

CriterionResult tape_reduction(const AcceptanceOptions& opt) {
  CriterionResult r{8, "tape reduction", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1008);
  int pos = 0, reduced = 0;
  const int total = count_or(opt, 220);
  for (; r.instances < total; ++r.instances) {
    TapeParams p;
    p.sigma = 1 + uniform(rng, 3);
    p.tapes = 1 + uniform(rng, 3 * p.sigma + 2);
    p.min_cells = 2;
    p.max_cells = 3;
    p.letter_prob = 0.3;
    p.paths = chance(rng, 0.5);
    auto inst = gen_random_tape_instance(rng, p);
    if (r.instances % 2 == 0) {
      // Only tape 0 carries letter 0, which pins its head; keeps the suite balanced.
      for (std::size_t i = 1; i < inst.tapes.size(); ++i)
        for (auto& c : inst.tapes[i].content) c.reset(0);
      for (auto& c : inst.tapes[0].content)
        if (chance(rng, 0.5)) c.reset(0);
      inst.tapes[0].content[inst.cs[0]].set(0);
      inst.tapes[0].content[inst.ct[0]].set(0);
    }
    bool want = solve_tape(inst).reachable;
    t.check(want == oracle::tape_reachable(inst), "solve_tape differs from the product-space oracle");
    pos += want;
    auto b = solve_bounded_alphabet(inst);
    t.check(b.reachable == want, "bounded-alphabet answer differs");
    t.check(static_cast<int>(b.reduced.tapes.size()) <= 2 * b.reduced.sigma, "more than 2|Σ| tapes remain");
    reduced += !b.log.empty();
  }
  t.note("positive", pos);
  t.note("reduced", reduced);
  t.finish();
  return r;
}

CriterionResult kernel(const AcceptanceOptions& opt) {
  CriterionResult r{9, "kernelization", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1009);
  int pos = 0, tight = 0, attempts = 0;
  const int total = count_or(opt, 120);
  while (r.instances < total && attempts++ < 100 * total) {
    GraphParams gp;
    gp.n = 4 + uniform(rng, 5);
    gp.edge_prob = chance(rng, 0.5) ? 0.3 : 0.45;
    gp.constraint = GraphConstraint::kK3dFree;
    gp.d = 2;
    DcrInstance inst;
    inst.graph = gen_random_graph(rng, gp);
    inst.k = 1 + uniform(rng, 2);
    inst.d = 2;
    auto sets = minimum_dominating_sets(inst.graph, inst.k);
    if (sets.empty()) continue;
    inst.source = sets[uniform(rng, static_cast<int>(sets.size()))];
    inst.target = sets[uniform(rng, static_cast<int>(sets.size()))];
    DsrInstance plain;
    plain.graph = inst.graph;
    plain.k = inst.k;
    plain.source = inst.source;
    plain.target = inst.target;
    auto direct = solve(plain);
    // Every third instance is rejection-sampled to be negative.
    if (r.instances % 3 == 0 && direct.reachable) continue;
    t.check(!contains_biclique(inst.graph, 3, 2), "sampled graph contains K_{3,2}");
    auto kr = kernelize(inst);
    t.check(kr.report.ok(), "kernel certificate fails");
    t.check(validate_dcr(kr.kernel).empty(), "kernel is not a valid instance");
    t.check(solve_via_kernel(inst).reachable == direct.reachable, "kernel answer differs from direct solve");
    auto again = kernelize(kr.kernel);
    bool same = again.kernel.graph.n() == kr.kernel.graph.n() &&
                again.kernel.graph.edges() == kr.kernel.graph.edges() && *again.kernel.core == *kr.kernel.core;
    t.check(same && again.report.rules_applied.empty(), "kernelize is not idempotent");
    pos += direct.reachable;
    tight += kr.report.tight;
    ++r.instances;
  }
  t.check(r.instances == total, "ran out of sampling attempts");
  t.note("positive", pos);
  t.note("tight", tight);
  t.finish();
  return r;
}

CriterionResult engine(const AcceptanceOptions& opt) {
  CriterionResult r{10, "engine self-consistency", true, 0, {}};
  Tally t(r);
  Rng rng = seeded(opt, 1010);
  int pos = 0;
  const int total = count_or(opt, 520);
  long long rejected = 0;
  while (r.instances < total) {
    GraphParams gp;
    gp.n = 1 + uniform(rng, 6);
    gp.edge_prob = 0.5;
    Graph g = gen_random_graph(rng, gp);
    int k = 1 + uniform(rng, 3);
    if (k > g.n()) continue;
    bool connected = r.instances % 4 == 3;
    auto sets = minimum_dominating_sets(g, k, {std::nullopt, connected});
    if (sets.empty()) continue;
    DsrInstance inst;
    inst.graph = g;
    inst.k = k;
    inst.rule = r.instances % 2 == 0 ? Rule::kSlide : Rule::kJump;
    inst.connected = connected;
    inst.source = sets[uniform(rng, static_cast<int>(sets.size()))];
    inst.target = sets[uniform(rng, static_cast<int>(sets.size()))];
    oracle::DfsOracle o{g, k, inst.rule == Rule::kSlide, connected, oracle::adjacency(g), {}};
    auto res = solve(inst);
    // Random small instances are nearly all positive; every fourth one is
    // rejection-sampled to be negative.
    if (r.instances % 4 == 2 && res.reachable && rejected++ < 200 * total) continue;
    t.check(res.reachable == o.reach(inst.source.members(), inst.target.members()), "solve differs from DFS oracle");
    if (res.reachable) t.check(verify_witness(inst, res.witness), "witness rejected");
    pos += res.reachable;
    ++r.instances;
  }
  DsrInstance c6;
  c6.graph = cycle(6);
  c6.k = 2;
  c6.source = VertexSet(6, {0, 3});
  c6.target = VertexSet(6, {1, 4});
  bool frozen = !solve(c6).reachable;
  t.check(frozen, "frozen C6 reported reachable");
  ++r.instances;
  t.note("positive", pos);
  t.note("c6_unreachable", frozen);
  t.finish();
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const Fn table[kCriteria] = {dominating_set_template, c5_picture, triangle,          path_and_selector,
                                      tape_to_sliding,         tape_to_connected_jumping,      formulas,
                                      tape_reduction,          kernel,                         engine};
  if (id < 1 || id > kCriteria) throw precondition("criterion id must be in 1.." + std::to_string(kCriteria));
  CriterionResult r;
  try {
    r = table[id - 1](opt);
  } catch (const std::exception& e) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

}  // namespace reconf
