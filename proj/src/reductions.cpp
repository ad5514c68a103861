#include "reconf/reductions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "reconf/errors.hpp"

namespace reconf {

namespace {

LetterSet widen(const LetterSet& s, int sigma) {
  LetterSet out(sigma);
  for (int a : s.members()) out.set(a);
  return out;
}

Tape widen(const Tape& t, int sigma) {
  Tape out = t;
  for (auto& c : out.content) c = widen(c, sigma);
  return out;
}

LetterSet letter_range(int sigma, int from, int to) {
  LetterSet s(sigma);
  for (int a = from; a < to; ++a) s.set(a);
  return s;
}

/// Accumulates a numbered path tape cell by cell.
struct PathBuilder {
  std::vector<LetterSet> cells;
  std::vector<int> number;

  void add(LetterSet content, int no) {
    cells.push_back(std::move(content));
    number.push_back(no);
  }
  Tape build(bool numbered = true) const {
    Tape t;
    const int len = static_cast<int>(cells.size());
    std::vector<Edge> e;
    for (int i = 0; i + 1 < len; ++i) e.emplace_back(i, i + 1);
    t.cells = Graph(len, e);
    t.content = cells;
    t.start = 0;
    t.end = len - 1;
    if (numbered) t.number = number;
    return t;
  }
};

// Which of the three synchronizing letters a cell numbered x receives.
bool gets_a(int x) { return x % 3 != 2; }
bool gets_b(int x) { return x % 3 != 0; }
bool gets_c(int x) { return x % 3 != 1; }

void add_sync_letters(Tape& t, int a, int b, int c) {
  for (int cell = 0; cell < t.size(); ++cell) {
    int x = t.number.at(cell);
    if (gets_a(x)) t.content[cell].set(a);
    if (gets_b(x)) t.content[cell].set(b);
    if (gets_c(x)) t.content[cell].set(c);
  }
}

/// Adds a_i, b_i, c_i (shared by every tape of tuple i) to all numbered
/// tapes and returns the alternating path tape of length max number.
/// Letters occupy [sigma_in, sigma_in + 3K); tapes must already use the
/// widened alphabet.
Tape path_synchronizer(std::vector<std::vector<Tape>>& tuples, int sigma_in, int sigma_out) {
  const int K = static_cast<int>(tuples.size());
  int q = 1;
  for (int i = 0; i < K; ++i)
    for (auto& t : tuples[i]) {
      add_sync_letters(t, sigma_in + i, sigma_in + K + i, sigma_in + 2 * K + i);
      for (int x : t.number) q = std::max(q, x);
    }
  LetterSet A = letter_range(sigma_out, sigma_in, sigma_in + K);
  LetterSet B = letter_range(sigma_out, sigma_in + K, sigma_in + 2 * K);
  LetterSet C = letter_range(sigma_out, sigma_in + 2 * K, sigma_in + 3 * K);
  PathBuilder pb;
  for (int x = 1; x <= q; ++x) {
    switch (x % 3) {
      case 1: pb.add(C | A, x); break;
      case 2: pb.add(A | B, x); break;
      default: pb.add(B | C, x); break;
    }
  }
  return pb.build(false);
}

void require_paths(const MultiTapeInstance& m, const std::string& who) {
  for (const auto& tuple : m.tuples)
    for (const auto& t : tuple)
      if (!is_path_tape(t)) throw precondition(who + ": every tape must be a start-to-end path");
}

void require_same_shape(const std::vector<MultiTapeInstance>& insts, const std::string& who) {
  if (insts.empty()) throw precondition(who + ": no instances");
  const auto& f = insts.front();
  for (const auto& m : insts) {
    if (m.sync) throw precondition(who + ": inputs must be unsynchronized");
    if (m.sigma != f.sigma) throw precondition(who + ": alphabets differ");
    if (m.tuples.size() != f.tuples.size()) throw precondition(who + ": tuple counts differ");
    for (std::size_t i = 0; i < m.tuples.size(); ++i)
      if (m.tuples[i].size() != f.tuples[i].size()) throw precondition(who + ": tuple sizes differ");
    require_paths(m, who);
  }
}

}  // namespace

// ---------------------------------------------------------------- formulas

std::string formula_problem(const NormalizedFormula& phi) {
  if (phi.variables < 0) return "negative variable count";
  if (phi.root.op != Formula::Op::kAnd) return "root must be a conjunction";
  std::string err;
  std::function<void(const Formula&, Formula::Op)> walk = [&](const Formula& f, Formula::Op parent) {
    if (!err.empty()) return;
    if (f.op == Formula::Op::kVar) {
      if (f.var < 0 || f.var >= phi.variables) err = "variable " + std::to_string(f.var) + " out of range";
      return;
    }
    if (f.kids.empty()) {
      err = "empty connective";
      return;
    }
    if (f.op == parent) {
      err = "connectives must alternate";
      return;
    }
    for (const auto& k : f.kids) walk(k, f.op);
  };
  walk(phi.root, Formula::Op::kOr);
  return err;
}

int formula_depth(const NormalizedFormula& phi) {
  std::function<int(const Formula&)> d = [&](const Formula& f) {
    if (f.op == Formula::Op::kVar) return 0;
    int best = 0;
    for (const auto& k : f.kids) best = std::max(best, d(k));
    return best + 1;
  };
  return d(phi.root);
}

// ------------------------------------------------------------ constructions

MultiTapeInstance ds_to_sync_multi(const Graph& g, int k) {
  const int n = g.n();
  if (n == 0) throw precondition("graph must be nonempty");
  if (k < 1) throw precondition("k must be positive");
  MultiTapeInstance out;
  out.sigma = 1;
  out.sync = true;
  out.r = n + 1;
  std::vector<int> numbers(n);
  std::iota(numbers.begin(), numbers.end(), 1);
  std::vector<Tape> tuple;
  for (int v = 0; v < n; ++v) {
    std::vector<std::vector<int>> cells(n);
    for (int j = 0; j < n; ++j)
      if (j == v || g.has_edge(v, j)) cells[j] = {0};
    tuple.push_back(path_tape(1, cells, numbers));
  }
  out.tuples.assign(k, tuple);
  out.provenance = {"ds_to_sync_multi", {{"n", {n}}, {"k", {k}}}};
  return out;
}

TapeInstance partitioned_dsr_to_sync_stars(const DsrInstance& inst, int min_branch) {
  const Graph& g = inst.graph;
  const int n = g.n();
  const int k = inst.k;
  if (inst.rule != Rule::kJump) throw precondition("partitioned reduction expects the jump rule");
  if (static_cast<int>(inst.partition.size()) != k || k < 1) throw malformed("partition must have k parts");
  VertexSet seen(n);
  std::vector<std::vector<int>> parts;
  for (const auto& p : inst.partition) {
    if (p.universe() != n || p.empty()) throw malformed("partition parts must be nonempty subsets of V");
    if (p.intersects(seen)) throw malformed("partition parts overlap");
    seen |= p;
    parts.push_back(p.members());
  }
  for (const auto& d : {inst.source, inst.target})
    for (const auto& p : inst.partition)
      if ((d & p).count() != 1) throw malformed("configurations must hold one vertex per part");

  const int N = std::max(n, min_branch);
  const int check = k;  // letters 0..k-1 are the tokens
  const int sigma = k + 1;
  auto check_at = [&](int v, int x) {  // cell numbered x on a path tied to v
    int t = x - 1;
    return t > n || g.closed_neighborhood(v).test(t - 1);
  };

  TapeInstance out;
  out.sigma = sigma;
  out.sync = true;
  out.r = N + 1;

  // A star whose branch b is: center path 2..N+1, middle 1, pending N+1..2.
  // Content of each cell comes from `fill(branch, role, number)`.
  enum Role { kCenter, kCenterPath, kMiddle, kPending };
  auto star = [&](int branches, const std::function<LetterSet(int, Role, int)>& fill, std::vector<int>* middles) {
    Tape t;
    std::vector<Edge> e;
    t.content.push_back(fill(-1, kCenter, 1));
    t.number.push_back(1);
    for (int b = 0; b < branches; ++b) {
      int prev = 0;
      auto push = [&](Role role, int x) {
        int id = static_cast<int>(t.content.size());
        t.content.push_back(fill(b, role, x));
        t.number.push_back(x);
        e.emplace_back(prev, id);
        prev = id;
        return id;
      };
      for (int x = 2; x <= N + 1; ++x) push(kCenterPath, x);
      middles->push_back(push(kMiddle, 1));
      for (int x = N + 1; x >= 2; --x) push(kPending, x);
    }
    t.cells = Graph(static_cast<int>(t.content.size()), e);
    t.start = t.end = 0;
    return t;
  };

  std::vector<std::vector<int>> middles(k + 1);
  for (int i = 0; i < k; ++i) {
    const auto& vs = parts[i];
    out.tapes.push_back(star(
        static_cast<int>(vs.size()),
        [&](int b, Role role, int x) {
          LetterSet s(sigma);
          if (role == kCenter) s.set(check);  // see ledger: centers carry the check letter
          if (role == kMiddle || role == kPending) s.set(i);
          if ((role == kCenterPath || role == kPending) && check_at(vs[b], x)) s.set(check);
          return s;
        },
        &middles[i]));
  }
  out.tapes.push_back(star(
      k,
      [&](int b, Role role, int x) {
        LetterSet s(sigma);
        if (role == kMiddle || role == kPending) s.set(b);
        if (x == 1) s.set(check);
        return s;
      },
      &middles[k]));

  auto config = [&](const VertexSet& d) {
    Config c;
    for (int i = 0; i < k; ++i) {
      int v = (d & inst.partition[i]).first();
      int b = static_cast<int>(std::find(parts[i].begin(), parts[i].end(), v) - parts[i].begin());
      c.push_back(middles[i][b]);
    }
    c.push_back(middles[k][0]);
    return c;
  };
  out.cs = config(inst.source);
  out.ct = config(inst.target);
  for (auto& t : out.tapes) t.start = t.end = 0;
  out.provenance = {"partitioned_dsr_to_sync_stars", {{"k", {k}}, {"n", {n}}, {"branch", {N}}}};
  return out;
}

TapeInstance desynchronize_triangle(const TapeInstance& inst) {
  if (!inst.sync) throw precondition("triangle desynchronizer expects a synchronized instance");
  const int k = static_cast<int>(inst.tapes.size());
  for (const auto& t : inst.tapes) {
    if (!t.numbered()) throw precondition("every tape must be numbered");
    if (inst.r % 3 != 0)
      for (auto [u, v] : t.cells.edges())
        if (std::abs(t.number[u] - t.number[v]) > 1)
          throw precondition("numbering wraps around but r is not a multiple of 3");
  }
  if (!is_valid_configuration(inst, inst.cs) || !is_valid_configuration(inst, inst.ct))
    throw precondition("cs and ct must be valid synchronized configurations");

  const int s0 = inst.sigma;
  const int sigma = s0 + 3 * k;
  TapeInstance out;
  out.sigma = sigma;
  out.sync = false;
  for (int i = 0; i < k; ++i) {
    Tape t = widen(inst.tapes[i], sigma);
    add_sync_letters(t, s0 + i, s0 + k + i, s0 + 2 * k + i);
    out.tapes.push_back(std::move(t));
  }
  LetterSet A = letter_range(sigma, s0, s0 + k);
  LetterSet B = letter_range(sigma, s0 + k, s0 + 2 * k);
  LetterSet C = letter_range(sigma, s0 + 2 * k, s0 + 3 * k);
  Tape tri;
  tri.cells = Graph(3, {{0, 1}, {1, 2}, {0, 2}});
  tri.content = {A | B, B | C, C | A};
  tri.start = tri.end = 0;
  out.tapes.push_back(tri);

  auto place = [&](const Config& c) {
    LetterSet have(sigma);
    for (int i = 0; i < k; ++i) have |= out.tapes[i].content[c[i]];
    LetterSet need = A | B | C;
    need.subtract(have);
    for (int cell = 0; cell < 3; ++cell)
      if (need.is_subset_of(tri.content[cell])) {
        Config full = c;
        full.push_back(cell);
        return full;
      }
    throw precondition("configuration not coverable by the triangle");
  };
  out.cs = place(inst.cs);
  out.ct = place(inst.ct);
  out.provenance = {"desynchronize_triangle", {{"inner_tapes", {k}}, {"inner_sigma", {s0}}}};
  return out;
}

TapeInstance desynchronize_path(const TapeInstance& inst) {
  if (!inst.sync) throw precondition("path desynchronizer expects a synchronized instance");
  auto problems = validate_instance(inst, {.paths = true, .path_sync = true});
  if (!problems.empty()) throw precondition("path desynchronizer: " + problems.front());
  const int k = static_cast<int>(inst.tapes.size());
  const int sigma = inst.sigma + 3 * k;
  std::vector<std::vector<Tape>> tuples;
  for (const auto& t : inst.tapes) tuples.push_back({widen(t, sigma)});
  Tape star = path_synchronizer(tuples, inst.sigma, sigma);

  TapeInstance out;
  out.sigma = sigma;
  out.sync = false;
  for (auto& tu : tuples) out.tapes.push_back(std::move(tu.front()));
  out.tapes.push_back(star);
  auto place = [&](const Config& c) {
    int lo = inst.r + 1;
    for (int i = 0; i < k; ++i) lo = std::min(lo, inst.tapes[i].number[c[i]]);
    Config full = c;
    full.push_back(std::min(lo, star.size()) - 1);
    return full;
  };
  out.cs = place(inst.cs);
  out.ct = place(inst.ct);
  out.provenance = {"desynchronize_path", {{"inner_tapes", {k}}, {"inner_sigma", {inst.sigma}}}};
  return out;
}

TapeInstance select_from_tuples(const MultiTapeInstance& inst) {
  if (inst.sync) throw precondition("selector expects an unsynchronized instance");
  require_paths(inst, "selector");
  const int K = static_cast<int>(inst.tuples.size());
  const int s0 = inst.sigma;
  const int sigma = s0 + 3 * K;
  TapeInstance out;
  out.sigma = sigma;
  for (int i = 0; i < K; ++i) {
    const int a = s0 + i, s = s0 + K + i, e = s0 + 2 * K + i;
    PathBuilder pb;
    for (std::size_t j = 0; j < inst.tuples[i].size(); ++j) {
      const Tape& t = inst.tuples[i][j];
      if (j > 0) pb.add(LetterSet(sigma), 0);
      for (int c : path_order(t)) {
        LetterSet cell = widen(t.content[c], sigma);
        cell.set(a);
        if (c == t.start) cell.set(s);
        if (c == t.end) cell.set(e);
        pb.add(cell, 0);
      }
    }
    out.tapes.push_back(pb.build(false));
  }
  LetterSet Sig = letter_range(sigma, 0, s0);
  LetterSet A = letter_range(sigma, s0, s0 + K);
  LetterSet S = letter_range(sigma, s0 + K, s0 + 2 * K);
  LetterSet E = letter_range(sigma, s0 + 2 * K, s0 + 3 * K);
  PathBuilder sel;
  for (const auto& c : {Sig | A | S | E, Sig | A | E, S | E, Sig | A | S, Sig | A | S | E}) sel.add(c, 0);
  out.tapes.push_back(sel.build(false));
  for (const auto& t : out.tapes) {
    out.cs.push_back(t.start);
    out.ct.push_back(t.end);
  }
  out.provenance = {"select_from_tuples", {{"tuples", {K}}, {"inner_sigma", {s0}}}};
  return out;
}

MultiTapeInstance and_compose(const std::vector<MultiTapeInstance>& insts) {
  require_same_shape(insts, "and_compose");
  const int P = static_cast<int>(insts.size());
  const int K = static_cast<int>(insts.front().tuples.size());
  const int s0 = insts.front().sigma;
  const int sigma = s0 + 3 * K;
  const LetterSet full = letter_range(sigma, 0, s0);
  std::vector<std::vector<Tape>> tuples(K);
  for (int i = 0; i < K; ++i)
    for (std::size_t j = 0; j < insts.front().tuples[i].size(); ++j) {
      PathBuilder pb;
      for (int q = 1; q <= P; ++q) {
        const Tape& t = insts[q - 1].tuples[i][j];
        pb.add(widen(t.content[t.start], sigma), 4 * q - 3);
        for (int c : path_order(t)) pb.add(widen(t.content[c], sigma), 4 * q - 2);
        pb.add(widen(t.content[t.end], sigma), 4 * q - 1);
        if (q < P) pb.add(full, 4 * q);
      }
      tuples[i].push_back(pb.build());
    }
  Tape star = path_synchronizer(tuples, s0, sigma);
  MultiTapeInstance out;
  out.sigma = sigma;
  out.tuples = std::move(tuples);
  out.tuples.push_back({star});
  for (auto& tuple : out.tuples)
    for (auto& t : tuple) t.number.clear();
  out.provenance = {"and_compose", {{"inputs", {P}}, {"tuples", {K}}, {"inner_sigma", {s0}}}};
  return out;
}

MultiTapeInstance or_compose(const std::vector<MultiTapeInstance>& insts) {
  require_same_shape(insts, "or_compose");
  const int P = static_cast<int>(insts.size());
  const int K = static_cast<int>(insts.front().tuples.size());
  const int s0 = insts.front().sigma;
  const int s1 = s0 + 3 * K;
  const int sigma = s1 + 3 * K;
  std::vector<std::vector<Tape>> tuples(K);
  for (int i = 0; i < K; ++i) {
    const int a = s0 + i, s = s0 + K + i, e = s0 + 2 * K + i;
    for (std::size_t j = 0; j < insts.front().tuples[i].size(); ++j) {
      PathBuilder pb;
      for (int q = 1; q <= P; ++q) {
        const Tape& t = insts[q - 1].tuples[i][j];
        auto cell = [&](int c) {
          LetterSet x = widen(t.content[c], sigma);
          x.set(a);
          if (c == t.start) x.set(s);
          if (c == t.end) x.set(e);
          return x;
        };
        pb.add(cell(t.start), 4 * q - 3);
        for (int c : path_order(t)) pb.add(cell(c), 4 * q - 2);
        pb.add(cell(t.end), 4 * q - 1);
        if (q < P) pb.add(LetterSet(sigma), 4 * q);
      }
      tuples[i].push_back(pb.build());
    }
  }
  Tape star = path_synchronizer(tuples, s1, sigma);
  LetterSet Sig = letter_range(sigma, 0, s0);
  LetterSet A = letter_range(sigma, s0, s0 + K);
  LetterSet S = letter_range(sigma, s0 + K, s0 + 2 * K);
  LetterSet E = letter_range(sigma, s0 + 2 * K, s0 + 3 * K);
  PathBuilder sel;
  for (const auto& c : {Sig | A | S | E, Sig | A | E, S | E, Sig | A | S, Sig | A | S | E}) sel.add(c, 0);

  MultiTapeInstance out;
  out.sigma = sigma;
  out.tuples = std::move(tuples);
  for (auto& tuple : out.tuples)
    for (auto& t : tuple) t.number.clear();
  out.tuples.push_back({sel.build(false)});
  out.tuples.push_back({star});
  out.provenance = {"or_compose", {{"inputs", {P}}, {"tuples", {K}}, {"inner_sigma", {s0}}}};
  return out;
}

namespace {

using Op = Formula::Op;

// A conjunction whose members are variables or disjunctions of variables.
bool is_cnf(const Formula& f) {
  for (const auto& c : f.kids) {
    if (c.op == Op::kAnd) return false;
    if (c.op == Op::kOr)
      for (const auto& l : c.kids)
        if (l.op != Op::kVar) return false;
  }
  return true;
}

Formula as_conjunction(const Formula& f) { return f.op == Op::kAnd ? f : Formula::all_of({f}); }

std::vector<Formula> disjuncts(const Formula& c) { return c.op == Op::kOr ? c.kids : std::vector<Formula>{c}; }

int level(const Formula& f) {
  if (is_cnf(f)) return 1;
  int best = 1;
  for (const auto& c : f.kids)
    for (const auto& d : disjuncts(c)) best = std::max(best, level(as_conjunction(d)));
  return best + 1;
}

// Weighted CNF template: k tuples, one tape per variable, one cell per clause.
MultiTapeInstance cnf_instance(const Formula& f, int n, int k) {
  std::vector<std::vector<int>> clauses;
  for (const auto& c : f.kids) {
    std::vector<int> vars;
    for (const auto& l : disjuncts(c)) vars.push_back(l.var);
    clauses.push_back(vars);
  }
  const int m = static_cast<int>(clauses.size());
  const int sigma = 1 + 3 * k;
  std::vector<int> numbers(m);
  std::iota(numbers.begin(), numbers.end(), 1);
  std::vector<Tape> tuple;
  for (int v = 0; v < n; ++v) {
    std::vector<std::vector<int>> cells(m);
    for (int j = 0; j < m; ++j)
      if (std::find(clauses[j].begin(), clauses[j].end(), v) != clauses[j].end()) cells[j] = {0};
    tuple.push_back(path_tape(sigma, cells, numbers));
  }
  std::vector<std::vector<Tape>> tuples(k, tuple);
  Tape star = path_synchronizer(tuples, 1, sigma);
  MultiTapeInstance out;
  out.sigma = sigma;
  out.tuples = std::move(tuples);
  for (auto& tu : out.tuples)
    for (auto& t : tu) t.number.clear();
  out.tuples.push_back({star});
  return out;
}

MultiTapeInstance build(const Formula& f, int L, int n, int k) {
  if (L > level(f)) return and_compose({or_compose({build(f, L - 1, n, k)})});
  if (L == 1) return cnf_instance(f, n, k);
  std::vector<MultiTapeInstance> conj;
  for (const auto& c : f.kids) {
    std::vector<MultiTapeInstance> alts;
    for (const auto& d : disjuncts(c)) alts.push_back(build(as_conjunction(d), L - 1, n, k));
    conj.push_back(or_compose(alts));
  }
  return and_compose(conj);
}

}  // namespace

MultiTapeInstance formula_to_multi(const NormalizedFormula& phi, int k) {
  if (auto err = formula_problem(phi); !err.empty()) throw malformed("formula: " + err);
  if (k < 0) throw precondition("k must be non-negative");
  MultiTapeInstance out = build(phi.root, level(phi.root), phi.variables, k);
  out.provenance = {"formula_to_multi", {{"variables", {phi.variables}}, {"k", {k}}}};
  return out;
}

// ------------------------------------------------------------ tape -> DSR

namespace {

void require_irreducible(const TapeInstance& inst) {
  auto problems = validate_instance(inst);
  if (!problems.empty()) throw malformed(problems.front());
  if (inst.tapes.empty()) throw precondition("instance has no tapes");
  if (!is_tape_irreducible(inst)) throw precondition("instance is not irreducible");
}

}  // namespace

DsrInstance tape_to_ts_dsr(const TapeInstance& inst) {
  require_irreducible(inst);
  const int k = static_cast<int>(inst.tapes.size());
  ExtendedGraph eg = extended_graph(inst);
  const int M = eg.graph.n();
  const int y = M + k, z = M + k + 1, n = M + k + 2;
  std::vector<Edge> edges = eg.graph.edges();
  auto labels = eg.graph.labels();
  for (int i = 0; i < k; ++i) {
    labels[M + i] = "x:" + std::to_string(i);
    for (int c = 0; c < inst.tapes[i].size(); ++c) edges.emplace_back(M + i, eg.offset[i] + c);
  }
  for (int v = 0; v < eg.letter_base; ++v) edges.emplace_back(y, v);
  edges.emplace_back(y, z);
  labels[y] = "y";
  labels[z] = "z";

  DsrInstance out;
  out.graph = Graph(n, edges, std::move(labels));
  out.k = k + 1;
  out.rule = Rule::kSlide;
  auto to_set = [&](const Config& c) {
    VertexSet d(n);
    for (int i = 0; i < k; ++i) d.set(eg.offset[i] + c[i]);
    d.set(y);
    return d;
  };
  out.source = to_set(inst.cs);
  out.target = to_set(inst.ct);
  std::vector<int> sizes, xs;
  for (int i = 0; i < k; ++i) {
    sizes.push_back(inst.tapes[i].size());
    xs.push_back(M + i);
  }
  out.provenance = {"tape_to_ts_dsr",
                    {{"offset", eg.offset},
                     {"size", sizes},
                     {"letter_base", {eg.letter_base}},
                     {"sigma", {inst.sigma}},
                     {"x", xs},
                     {"y", {y}},
                     {"z", {z}}}};
  return out;
}

DsrInstance tape_to_tj_cdsr(const TapeInstance& inst) {
  require_irreducible(inst);
  const int k = static_cast<int>(inst.tapes.size());
  // Pendant path of empty cells hung on each end cell; long enough that
  // dominating its subdivision vertices without x_i costs more than 3k+1.
  const int pad = 4 * k + 3;

  std::vector<int> offset, size;
  std::vector<std::vector<Edge>> tape_edges;
  int next = 0;
  for (const auto& t : inst.tapes) {
    offset.push_back(next);
    auto e = t.cells.edges();
    int prev = t.end;
    for (int p = 0; p < pad; ++p) {
      e.emplace_back(prev, t.size() + p);
      prev = t.size() + p;
    }
    tape_edges.push_back(e);
    size.push_back(t.size() + pad);
    next += t.size() + pad;
  }
  std::vector<Edge> edges;
  std::map<int, std::string> labels;
  std::vector<std::vector<int>> subdivision(k);
  for (int i = 0; i < k; ++i) {
    for (int c = 0; c < size[i]; ++c) labels[offset[i] + c] = "cell:" + std::to_string(i) + ":" + std::to_string(c);
    for (auto [u, v] : tape_edges[i]) {
      int s = next++;
      labels[s] = "sub:" + std::to_string(i) + ":" + std::to_string(u) + "-" + std::to_string(v);
      edges.emplace_back(offset[i] + u, s);
      edges.emplace_back(offset[i] + v, s);
      subdivision[i].push_back(s);
    }
  }
  const int letter_base = next;
  for (int a = 0; a < inst.sigma; ++a) labels[letter_base + a] = "letter:" + std::to_string(a);
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < inst.tapes[i].size(); ++c)
      for (int a : inst.tapes[i].content[c].members()) edges.emplace_back(offset[i] + c, letter_base + a);
  next += inst.sigma;
  std::vector<int> xs;
  for (int i = 0; i < k; ++i) {
    xs.push_back(next);
    labels[next] = "x:" + std::to_string(i);
    for (int s : subdivision[i]) edges.emplace_back(next, s);
    ++next;
  }
  const int y = next++, z = next++;
  labels[y] = "y";
  labels[z] = "z";
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < size[i]; ++c) edges.emplace_back(y, offset[i] + c);
  edges.emplace_back(y, z);

  DsrInstance out;
  out.graph = Graph(next, edges, std::move(labels));
  out.k = 3 * k + 1;
  out.rule = Rule::kJump;
  out.connected = true;
  auto to_set = [&](const Config& c) {
    VertexSet d(next);
    d.set(y);
    for (int i = 0; i < k; ++i) {
      int head = offset[i] + c[i];
      d.set(head);
      d.set(xs[i]);
      for (int s : subdivision[i])
        if (out.graph.has_edge(head, s)) {
          d.set(s);
          break;
        }
    }
    return d;
  };
  out.source = to_set(inst.cs);
  out.target = to_set(inst.ct);
  std::vector<int> subs;
  for (int i = 0; i < k; ++i) subs.push_back(static_cast<int>(subdivision[i].size()));
  out.provenance = {"tape_to_tj_cdsr",
                    {{"offset", offset},
                     {"size", size},
                     {"subdivisions", subs},
                     {"letter_base", {letter_base}},
                     {"sigma", {inst.sigma}},
                     {"x", xs},
                     {"y", {y}},
                     {"z", {z}}}};
  return out;
}

namespace {

const std::vector<int>& prov(const DsrInstance& inst, const std::string& key) {
  auto it = inst.provenance.data.find(key);
  if (it == inst.provenance.data.end()) throw precondition("provenance lacks " + key);
  return it->second;
}

}  // namespace

StructureReport check_min_ds_structure(const DsrInstance& inst, long long cap) {
  if (inst.provenance.construction != "tape_to_ts_dsr") throw precondition("not a tape_to_ts_dsr artifact");
  const auto& offset = prov(inst, "offset");
  const auto& size = prov(inst, "size");
  const int letter_base = prov(inst, "letter_base")[0];
  const int sigma = prov(inst, "sigma")[0];
  const int y = prov(inst, "y")[0], z = prov(inst, "z")[0];
  const int tapes = static_cast<int>(offset.size());

  StructureReport rep;
  auto sets = all_minimum_dominating_sets(inst.graph, tapes + 1, cap);
  rep.sets = static_cast<long long>(sets.size());
  if (sets.empty()) {
    rep.reason = "no dominating set of size <= k+1";
    return rep;
  }
  rep.minimum = sets.front().count();
  if (rep.minimum != tapes + 1) {
    rep.reason = "minimum dominating set has size " + std::to_string(rep.minimum);
    return rep;
  }
  for (const auto& d : sets) {
    if (d.test(y) == d.test(z)) {
      rep.reason = "a minimum dominating set does not hold exactly one of y, z";
      return rep;
    }
    for (int i = 0; i < tapes; ++i) {
      int in = 0;
      for (int c = 0; c < size[i]; ++c) in += d.test(offset[i] + c);
      if (in != 1) {
        rep.reason = "a minimum dominating set holds " + std::to_string(in) + " cells of tape " + std::to_string(i);
        return rep;
      }
    }
    for (int a = 0; a < sigma; ++a)
      if (d.test(letter_base + a)) {
        rep.reason = "a minimum dominating set holds a letter vertex";
        return rep;
      }
  }
  rep.ok = true;
  return rep;
}

StructureReport check_cdsr_anchors(const DsrInstance& inst, long long cap) {
  if (inst.provenance.construction != "tape_to_tj_cdsr") throw precondition("not a tape_to_tj_cdsr artifact");
  StructureReport rep;
  rep.minimum = inst.k;
  for (int x : prov(inst, "x")) {
    VertexSet forbid(inst.graph.n());
    forbid.set(x);
    if (dominating_set_within(inst.graph, inst.k, &forbid, cap)) {
      rep.reason = "a dominating set of size <= " + std::to_string(inst.k) + " avoids " + inst.graph.label(x);
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------- decompositions

namespace {

int max_tapes_per_bag(const TreeDecomposition& td) {
  int best = 0;
  for (const auto& bag : td.bags) {
    std::vector<int> seen;
    for (int v : bag.members())
      if (td.tape_of[v] >= 0) seen.push_back(td.tape_of[v]);
    std::sort(seen.begin(), seen.end());
    best = std::max(best, static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin()));
  }
  return best;
}

int width_of(const TreeDecomposition& td) {
  int w = 0;
  for (const auto& b : td.bags) w = std::max(w, b.count());
  return w - 1;
}

// Min-degree decomposition of the sub-instance on the first `tapes` tapes and
// the first `sigma` letters, expressed in vertex ids of `eg`.
TreeDecomposition inner_decomposition(const ExtendedGraph& eg, int tapes, int sigma) {
  const int n = eg.graph.n();
  VertexSet keep(n);
  for (int v = 0; v < n; ++v) {
    int t = eg.tape_of[v];
    if ((t >= 0 && t < tapes) || (t < 0 && v - eg.letter_base < sigma)) keep.set(v);
  }
  std::vector<int> old_to_new;
  Graph sub = induced_subgraph(eg.graph, keep, &old_to_new);
  TreeDecomposition inner = min_degree_decomposition(sub);
  std::vector<int> new_to_old(sub.n());
  for (int v = 0; v < n; ++v)
    if (old_to_new[v] >= 0) new_to_old[old_to_new[v]] = v;
  TreeDecomposition td;
  td.tree = inner.tree;
  td.tape_of = eg.tape_of;
  for (const auto& b : inner.bags) {
    VertexSet bag(n);
    for (int v : b.members()) bag.set(new_to_old[v]);
    td.bags.push_back(bag);
  }
  return td;
}

DerivedDecomposition stars_decomposition(const TapeInstance& art) {
  const int k = art.provenance.data.at("k")[0];
  ExtendedGraph eg = extended_graph(art);
  const int n = eg.graph.n();
  const int check = eg.letter_base + k;
  auto letter = [&](int i) { return eg.letter_base + i; };
  TreeDecomposition td;
  td.tape_of = eg.tape_of;
  auto bag = [&](std::initializer_list<int> vs) {
    VertexSet b(n);
    for (int v : vs) b.set(v);
    b.set(check);
    td.bags.push_back(b);
    return static_cast<int>(td.bags.size()) - 1;
  };
  // Edge bags of a tree rooted at `root`, restricted to cells `allowed`;
  // root edges hang below `anchor`.
  auto tree_bags = [&](int tape, int root, int i, int anchor, const std::function<bool(int)>& allowed) {
    const Tape& t = art.tapes[tape];
    std::vector<int> edge_bag(t.size(), -1), stack{root};
    std::vector<bool> seen(t.size(), false);
    seen[root] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : t.cells.neighbors(u)) {
        if (seen[w] || !allowed(w)) continue;
        seen[w] = true;
        int b = bag({eg.offset[tape] + u, eg.offset[tape] + w, letter(i)});
        td.tree.emplace_back(u == root ? anchor : edge_bag[u], b);
        edge_bag[w] = b;
        stack.push_back(w);
      }
    }
  };
  const int hub = bag({eg.offset[k]});  // T*'s center
  const Tape& star = art.tapes[k];
  // Branch b of T* occupies cells 1 + b*(2N+1) .. (b+1)*(2N+1).
  const int branch_len = (star.size() - 1) / k;
  for (int i = 0; i < k; ++i) {
    int ci = bag({eg.offset[k], letter(i)});
    td.tree.emplace_back(hub, ci);
    int li = bag({letter(i)});
    td.tree.emplace_back(ci, li);
    int root = bag({eg.offset[i], letter(i)});
    td.tree.emplace_back(li, root);
    tree_bags(i, 0, i, root, [](int) { return true; });
    tree_bags(k, 0, i, ci, [&](int c) { return c == 0 || (c - 1) / branch_len == i; });
  }
  return {eg.graph, td, 3, 1};
}

DerivedDecomposition triangle_decomposition(const TapeInstance& art) {
  const int k = art.provenance.data.at("inner_tapes")[0];
  const int s0 = art.provenance.data.at("inner_sigma")[0];
  ExtendedGraph eg = extended_graph(art);
  TreeDecomposition td = inner_decomposition(eg, k, s0);
  const int s = max_tapes_per_bag(td), w = width_of(td);
  for (auto& b : td.bags) {
    std::vector<bool> hit(k, false);
    for (int v : b.members())
      if (eg.tape_of[v] >= 0) hit[eg.tape_of[v]] = true;
    for (int i = 0; i < k; ++i)
      if (hit[i])
        for (int a : {s0 + i, s0 + k + i, s0 + 2 * k + i}) b.set(eg.letter_base + a);
    for (int c = 0; c < 3; ++c) b.set(eg.offset[k] + c);
  }
  return {eg.graph, td, w + 3 * s + 3, s + 1};
}

}  // namespace

DerivedDecomposition derive_decomposition(const TapeInstance& artifact) {
  const auto& kind = artifact.provenance.construction;
  if (kind == "partitioned_dsr_to_sync_stars") return stars_decomposition(artifact);
  if (kind == "desynchronize_triangle") return triangle_decomposition(artifact);
  throw precondition("no explicit decomposition for provenance '" + kind + "'");
}

DerivedDecomposition derive_decomposition(const DsrInstance& artifact) {
  if (artifact.provenance.construction != "tape_to_ts_dsr")
    throw precondition("no explicit decomposition for provenance '" + artifact.provenance.construction + "'");
  const auto& offset = prov(artifact, "offset");
  const auto& size = prov(artifact, "size");
  const auto& xs = prov(artifact, "x");
  const int letter_base = prov(artifact, "letter_base")[0];
  const int sigma = prov(artifact, "sigma")[0];
  const int y = prov(artifact, "y")[0], z = prov(artifact, "z")[0];
  const int n = artifact.graph.n();
  const int tapes = static_cast<int>(offset.size());

  // The extended graph occupies the first letter_base + sigma ids.
  ExtendedGraph eg;
  eg.offset = offset;
  eg.letter_base = letter_base;
  eg.tape_of.assign(n, -1);
  for (int i = 0; i < tapes; ++i)
    for (int c = 0; c < size[i]; ++c) eg.tape_of[offset[i] + c] = i;
  eg.graph = artifact.graph;
  TreeDecomposition td = inner_decomposition(eg, tapes, sigma);
  const int s = max_tapes_per_bag(td), w = width_of(td);
  for (auto& b : td.bags) {
    for (int v : b.members())
      if (eg.tape_of[v] >= 0) b.set(xs[eg.tape_of[v]]);
    b.set(y);
  }
  VertexSet leaf(n);
  leaf.set(y);
  leaf.set(z);
  td.bags.push_back(leaf);
  td.tree.emplace_back(0, static_cast<int>(td.bags.size()) - 1);
  return {artifact.graph, td, s + w + 1, s};
}

}  // namespace reconf
