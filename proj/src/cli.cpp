#include "reconf/cli.hpp"

#include <bit>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "reconf/acceptance.hpp"
#include "reconf/errors.hpp"
#include "reconf/generators.hpp"
#include "reconf/io.hpp"
#include "reconf/kernelize.hpp"
#include "reconf/reductions.hpp"
#include "reconf/tape_reduce.hpp"

namespace reconf {

namespace {

struct Args {
  long long state_cap = kDefaultStateCap;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string file, witness_file, from, to, lemma, what = "graph", constraint = "none";
  int k = -1, criterion = 0;
  bool witness = false;
  // gen parameters
  int n = 6, tapes = 2, cells = 4, sigma = 2, d = 2, vars = 4, depth = 2, tuples = 2;
  double p = 0.4;
  bool sync = false, paths = false;
};

int need_k(const Args& a) {
  if (a.k < 0) throw precondition("--k is required");
  return a.k;
}

Json witness_json(const ReconfigResult& r) { return witness_to_json(r.witness); }

Json reconfig_json(const ReconfigResult& r, bool with_witness) {
  Json out{{"reachable", r.reachable}};
  if (r.reachable) out["witnessLength"] = static_cast<int>(r.witness.size()) - 1;
  if (with_witness) {
    out["witness"] = witness_json(r);
    out["explored"] = r.explored;
  }
  return out;
}

Json tape_result_json(const TapeResult& r, bool with_witness) {
  Json out{{"reachable", r.reachable}};
  if (r.reachable) out["witnessLength"] = static_cast<int>(r.witness.size()) - 1;
  if (with_witness) {
    out["witness"] = tape_witness_to_json(r.witness);
    out["explored"] = r.explored;
  }
  return out;
}

// Truth table of a positive formula with at most k true variables.
bool weighted_satisfiable(const NormalizedFormula& phi, int k) {
  if (phi.variables > 24) throw cap_exceeded("truth table limited to 24 variables");
  std::function<bool(const Formula&, std::uint32_t)> eval = [&](const Formula& f, std::uint32_t mask) {
    if (f.op == Formula::Op::kVar) return ((mask >> f.var) & 1U) != 0;
    bool conj = f.op == Formula::Op::kAnd;
    for (const auto& c : f.kids)
      if (eval(c, mask) != conj) return !conj;
    return conj;
  };
  for (std::uint32_t mask = 0; mask < (1U << phi.variables); ++mask)
    if (std::popcount(mask) <= k && eval(phi.root, mask)) return true;
  return false;
}

Json report_json(const KernelReport& r) {
  Json hist = Json::object();
  for (const auto& [type, sizes] : r.class_sizes) hist[std::to_string(type)] = sizes;
  return Json{{"coreSize", r.core_size},
              {"coreComputed", r.core_computed},
              {"coreBound", r.core_bound},
              {"tight", r.tight},
              {"classHistogram", hist},
              {"rulesApplied", r.rules_applied},
              {"sizeBefore", r.size_before},
              {"sizeAfter", r.size_after},
              {"p", r.p},
              {"zeroClassOk", r.zero_class_ok},
              {"largeClassesOk", r.large_classes_ok},
              {"smallClassesOk", r.small_classes_ok},
              {"threeClassesOk", r.three_classes_ok},
              {"twinFree", r.twin_free},
              {"ok", r.ok()}};
}

Json step_json(const ReductionStep& s) {
  Json assignment = Json::array();
  for (auto [letter, tape] : s.assignment) assignment.push_back({letter, tape});
  return Json{{"rule", s.rule},
              {"reserved", s.reserved},
              {"deleted", s.deleted},
              {"erased", s.erased},
              {"assignment", assignment}};
}

// --from/--to pairs and the constructor behind each.
Json reduce(const Args& a, const Json& in) {
  const std::string key = a.from + "->" + a.to;
  if (key == "graph->multi") return to_json(ds_to_sync_multi(graph_from_json(in), need_k(a)));
  if (key == "pdsr->sync-tape") return to_json(partitioned_dsr_to_sync_stars(dsr_from_json(in)));
  if (key == "sync-tape->tape") return to_json(desynchronize_triangle(tape_from_json(in)));
  if (key == "path-sync-tape->path-tape") return to_json(desynchronize_path(tape_from_json(in)));
  if (key == "multi->path-tape") return to_json(select_from_tuples(multi_from_json(in)));
  if (key == "formula->multi") return to_json(formula_to_multi(formula_from_json(in), need_k(a)));
  if (key == "tape->ts-dsr") return to_json(tape_to_ts_dsr(tape_from_json(in)));
  if (key == "tape->tj-cdsr") return to_json(tape_to_tj_cdsr(tape_from_json(in)));
  throw precondition("no reduction from " + a.from + " to " + a.to);
}

// Solves both sides of one reduction.
std::pair<bool, bool> both_sides(const Args& a, const Json& in) {
  const long long cap = a.state_cap;
  const std::string& l = a.lemma;
  if (l == "w2") {
    Graph g = graph_from_json(in);
    int k = need_k(a);
    int gamma = domination_number(g);
    return {gamma >= 0 && gamma <= k, solve_multi(ds_to_sync_multi(g, k), cap).positive};
  }
  if (l == "stars") {
    auto d = dsr_from_json(in);
    return {solve(d, cap).reachable, solve_tape(partitioned_dsr_to_sync_stars(d), cap).reachable};
  }
  if (l == "sync") {
    auto t = tape_from_json(in);
    return {solve_tape(t, cap).reachable, solve_tape(desynchronize_triangle(t), cap).reachable};
  }
  if (l == "syncpath") {
    auto t = tape_from_json(in);
    return {solve_tape(t, cap).reachable, solve_tape(desynchronize_path(t), cap).reachable};
  }
  if (l == "sel") {
    auto m = multi_from_json(in);
    return {solve_multi(m, cap).positive, solve_tape(select_from_tuples(m), cap).reachable};
  }
  if (l == "formula") {
    auto phi = formula_from_json(in);
    int k = need_k(a);
    return {weighted_satisfiable(phi, k), solve_multi(formula_to_multi(phi, k), cap).positive};
  }
  if (l == "dsr") {
    auto t = tape_from_json(in);
    return {solve_tape(t, cap).reachable, solve(tape_to_ts_dsr(t), cap).reachable};
  }
  if (l == "cdsr") {
    auto t = tape_from_json(in);
    return {solve_tape(t, cap).reachable, solve(tape_to_tj_cdsr(t), cap).reachable};
  }
  if (l == "tapes") {
    auto t = tape_from_json(in);
    return {solve_tape(t, cap).reachable, solve_bounded_alphabet(t, cap).reachable};
  }
  if (l == "kernel") {
    auto inst = dcr_from_json(in);
    DsrInstance direct;
    direct.graph = inst.graph;
    direct.k = inst.k;
    direct.source = inst.source;
    direct.target = inst.target;
    direct.core = inst.core;
    return {solve(direct, cap).reachable, solve_via_kernel(inst, cap).reachable};
  }
  throw precondition("unknown lemma \"" + l + "\"");
}

GraphConstraint parse_constraint(const std::string& s) {
  if (s == "none") return GraphConstraint::kNone;
  if (s == "connected") return GraphConstraint::kConnected;
  if (s == "k3d-free") return GraphConstraint::kK3dFree;
  throw precondition("constraint must be none, connected or k3d-free");
}

Json generate(const Args& a) {
  Rng rng(a.seed);
  GraphParams gp;
  gp.n = a.n;
  gp.edge_prob = a.p;
  gp.constraint = parse_constraint(a.constraint);
  gp.d = a.d;
  if (a.what == "graph") return to_json(gen_random_graph(a.seed, gp));
  if (a.what == "tape") {
    TapeParams tp;
    tp.tapes = a.tapes;
    tp.max_cells = a.cells;
    tp.sigma = a.sigma;
    tp.sync = a.sync;
    tp.paths = a.paths;
    return to_json(gen_random_tape_instance(a.seed, tp));
  }
  if (a.what == "multi") {
    MultiParams mp;
    mp.tuples = a.tuples;
    mp.tapes_per_tuple = a.tapes;
    mp.max_cells = a.cells;
    mp.sigma = a.sigma;
    mp.sync = a.sync;
    return to_json(gen_random_multi(rng, mp));
  }
  if (a.what == "dsr") {
    DsrParams dp;
    dp.graph = gp;
    dp.k = a.k < 0 ? 2 : a.k;
    for (int attempt = 0; attempt < 1000; ++attempt)
      if (auto inst = gen_random_dsr(rng, dp)) return to_json(*inst);
    throw infeasible("no dominating set of size k found in 1000 draws");
  }
  if (a.what == "dcr") {
    gp.constraint = GraphConstraint::kK3dFree;
    DcrInstance inst;
    inst.k = a.k < 0 ? 2 : a.k;
    inst.d = a.d;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      inst.graph = gen_random_graph(rng, gp);
      auto sets = minimum_dominating_sets(inst.graph, inst.k);
      if (sets.empty()) continue;
      inst.source = sets[uniform(rng, static_cast<int>(sets.size()))];
      inst.target = sets[uniform(rng, static_cast<int>(sets.size()))];
      return to_json(inst);
    }
    throw infeasible("no dominating set of size k found in 1000 draws");
  }
  if (a.what == "formula") {
    // Alternating levels below a conjunction, 1-3 children per operator.
    std::function<Formula(int, bool)> grow = [&](int depth, bool conj) {
      if (depth == 0) return Formula::variable(uniform(rng, a.vars));
      std::vector<Formula> kids;
      for (int i = 0, w = 1 + uniform(rng, 3); i < w; ++i)
        kids.push_back(grow(depth == 1 || chance(rng, 0.25) ? 0 : depth - 1, !conj));
      return conj ? Formula::all_of(kids) : Formula::any_of(kids);
    };
    NormalizedFormula phi{a.vars, grow(std::max(1, a.depth), true)};
    return to_json(phi);
  }
  throw precondition("gen kind must be graph, tape, multi, dsr, dcr or formula");
}

int dispatch(const std::string& cmd, const Args& a, std::ostream& out) {
  auto emit = [&](const Json& j) { out << dump(j) << "\n"; };
  if (cmd == "solve") {
    Json in = load_json_file(a.file);
    auto art = read_artifact(in, "dsr");
    if (art.kind == "dcr") {
      emit(reconfig_json(solve(std::get<DcrInstance>(art.value).as_dsr(), a.state_cap), a.witness));
      return kExitOk;
    }
    if (art.kind != "dsr") throw precondition("solve expects a dsr or dcr instance");
    emit(reconfig_json(solve(std::get<DsrInstance>(art.value), a.state_cap), a.witness));
    return kExitOk;
  }
  if (cmd == "solve-tape") {
    auto art = read_artifact(load_json_file(a.file), "tape");
    if (art.kind == "multi") {
      auto r = solve_multi(std::get<MultiTapeInstance>(art.value), a.state_cap);
      Json j{{"positive", r.positive}};
      if (r.positive) j["selection"] = r.selection;
      emit(j);
      return kExitOk;
    }
    if (art.kind != "tape") throw precondition("solve-tape expects a tape or multi instance");
    emit(tape_result_json(solve_tape(std::get<TapeInstance>(art.value), a.state_cap), a.witness));
    return kExitOk;
  }
  if (cmd == "reduce") {
    emit(reduce(a, load_json_file(a.file)));
    return kExitOk;
  }
  if (cmd == "reduce-tapes") {
    auto red = reduce_tapes(tape_from_json(load_json_file(a.file)));
    Json log = Json::array();
    for (const auto& s : red.log) log.push_back(step_json(s));
    emit(Json{{"reduced", to_json(red.reduced)}, {"log", log}});
    return kExitOk;
  }
  if (cmd == "kernelize") {
    auto inst = dcr_from_json(load_json_file(a.file));
    try {
      auto kr = kernelize(inst);
      emit(Json{{"kernel", to_json(kr.kernel)}, {"certificate", report_json(kr.report)}});
    } catch (const FamilyViolation& e) {
      emit(Json{{"error", e.what()}, {"biclique", {{"left", e.witness().left}, {"right", e.witness().right}}}});
      throw;
    }
    return kExitOk;
  }
  if (cmd == "verify-reduction") {
    auto [source, target] = both_sides(a, load_json_file(a.file));
    emit(Json{{"agree", source == target}, {"source", source}, {"target", target}});
    return source == target ? kExitOk : kExitNegative;
  }
  if (cmd == "verify-witness") {
    auto art = read_artifact(load_json_file(a.file), "dsr");
    Json w = load_json_file(a.witness_file);
    if (w.is_object() && w.contains("witness")) w = w.at("witness");
    bool valid = false;
    if (art.kind == "dsr") {
      const auto& inst = std::get<DsrInstance>(art.value);
      valid = verify_witness(inst, witness_from_json(w, inst.graph.n()));
    } else if (art.kind == "tape") {
      valid = verify_tape_witness(std::get<TapeInstance>(art.value), tape_witness_from_json(w));
    } else {
      throw precondition("verify-witness expects a dsr or tape instance");
    }
    emit(Json{{"valid", valid}});
    return valid ? kExitOk : kExitNegative;
  }
  if (cmd == "gen") {
    emit(generate(a));
    return kExitOk;
  }
  if (cmd == "acceptance") {
    AcceptanceOptions opt{a.seed, a.trials};
    std::vector<CriterionResult> results;
    if (a.criterion > 0)
      results.push_back(run_criterion(a.criterion, opt));
    else
      results = run_acceptance(opt);
    Json rows = Json::array();
    int passed = 0;
    for (const auto& r : results) {
      rows.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"instances", r.instances}, {"detail", r.detail}});
      passed += r.pass;
    }
    emit(Json{{"criteria", rows}, {"passed", passed}, {"total", static_cast<int>(results.size())}});
    return passed == static_cast<int>(results.size()) ? kExitOk : kExitNegative;
  }
  throw precondition("unknown subcommand " + cmd);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Reconfiguration workbench: solvers, reductions and kernelization on JSON artifacts", "reconf"};
  app.require_subcommand(1);
  app.add_option("--state-cap", a.state_cap, "Search state limit")->check(CLI::PositiveNumber);

  auto file = [&](CLI::App* s) { s->add_option("file", a.file, "Instance JSON")->required(); };
  auto* solve_cmd = app.add_subcommand("solve", "Solve a dominating set reconfiguration instance");
  file(solve_cmd);
  solve_cmd->add_flag("--witness", a.witness, "Include the witness sequence");
  auto* tape_cmd = app.add_subcommand("solve-tape", "Solve a tape or multi-tape instance");
  file(tape_cmd);
  tape_cmd->add_flag("--witness", a.witness, "Include the witness sequence");
  auto* reduce_cmd = app.add_subcommand("reduce", "Apply one reduction");
  file(reduce_cmd);
  reduce_cmd->add_option("--from", a.from, "graph|pdsr|sync-tape|path-sync-tape|multi|formula|tape")->required();
  reduce_cmd->add_option("--to", a.to, "multi|sync-tape|tape|path-tape|ts-dsr|tj-cdsr")->required();
  reduce_cmd->add_option("--k", a.k, "Token count (graph and formula inputs)");
  file(app.add_subcommand("reduce-tapes", "Reduce to at most 2|Sigma| tapes, with a log"));
  file(app.add_subcommand("kernelize", "Kernelize a core reconfiguration instance"));
  auto* verify_cmd = app.add_subcommand("verify-reduction", "Solve both sides of a reduction and compare");
  file(verify_cmd);
  verify_cmd->add_option("--lemma", a.lemma, "w2|stars|sync|syncpath|sel|formula|dsr|cdsr|tapes|kernel")->required();
  verify_cmd->add_option("--k", a.k, "Token count (w2 and formula)");
  auto* witness_cmd = app.add_subcommand("verify-witness", "Check a witness sequence");
  file(witness_cmd);
  witness_cmd->add_option("witness", a.witness_file, "Witness JSON")->required();
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random artifact");
  gen_cmd->add_option("kind", a.what, "graph|tape|multi|dsr|dcr|formula");
  gen_cmd->add_option("--seed", a.seed);
  gen_cmd->add_option("--n", a.n)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--p", a.p)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--constraint", a.constraint, "none|connected|k3d-free");
  gen_cmd->add_option("--d", a.d)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--k", a.k);
  gen_cmd->add_option("--tapes", a.tapes)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--tuples", a.tuples)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--cells", a.cells)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--sigma", a.sigma)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--vars", a.vars)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--depth", a.depth)->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--sync", a.sync);
  gen_cmd->add_flag("--paths", a.paths);
  auto* acc_cmd = app.add_subcommand("acceptance", "Run the acceptance criteria");
  acc_cmd->add_option("--seed", a.seed, "Mixed into every suite seed (0 = checked-in runs)");
  acc_cmd->add_option("--trials", a.trials, "Instances per randomized suite")->check(CLI::NonNegativeNumber);
  acc_cmd->add_option("--criterion", a.criterion, "Run only this criterion")->check(CLI::Range(1, kCriteria));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string first = argc > 1 ? argv[1] : "";
    if (!first.empty() && first[0] != '-' && !app.get_subcommand_no_throw(first))
      err << "unknown subcommand " << first << "\n";
    else
      err << e.what() << "\n";
    err << app.help();
    return kExitMalformed;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return dispatch(cmd, a, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kCapExceeded ? kExitCapExceeded : kExitMalformed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
}

}  // namespace reconf
