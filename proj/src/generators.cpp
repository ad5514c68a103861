#include "reconf/generators.hpp"

#include <algorithm>

#include "reconf/errors.hpp"

namespace reconf {

int uniform(Rng& rng, int n) { return n <= 1 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

bool chance(Rng& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[uniform(rng, i + 1)]);
}

Graph gen_random_graph(std::uint64_t seed, const GraphParams& p) {
  Rng rng(seed);
  return gen_random_graph(rng, p);
}

Graph gen_random_graph(Rng& rng, const GraphParams& p) {
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    std::vector<Edge> e;
    for (int u = 0; u < p.n; ++u)
      for (int v = u + 1; v < p.n; ++v)
        if (chance(rng, p.edge_prob)) e.emplace_back(u, v);
    Graph g(p.n, e);
    switch (p.constraint) {
      case GraphConstraint::kNone:
        return g;
      case GraphConstraint::kConnected:
        if (is_connected(g)) return g;
        break;
      case GraphConstraint::kK3dFree:
        if (is_connected(g) && !contains_biclique(g, 3, p.d)) return g;
        break;
    }
  }
  throw infeasible("graph generator retry budget exhausted");
}

namespace {

// Random connected cell graph: a random tree plus a few chords, or a path.
Graph random_cells(Rng& rng, int n, bool path, double extra) {
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) e.emplace_back(path ? v - 1 : uniform(rng, v), v);
  if (!path)
    for (int u = 0; u < n; ++u)
      for (int v = u + 2; v < n; ++v)
        if (chance(rng, extra / n)) e.emplace_back(u, v);
  return Graph(n, e);
}

std::vector<LetterSet> random_contents(Rng& rng, int n, int sigma, double p) {
  std::vector<LetterSet> out;
  for (int c = 0; c < n; ++c) {
    LetterSet s(sigma);
    for (int a = 0; a < sigma; ++a)
      if (chance(rng, p)) s.set(a);
    out.push_back(s);
  }
  return out;
}

// Non-decreasing numbering of a path of `len` cells from 1 up to `top`.
std::vector<int> staircase(Rng& rng, int len, int top) {
  std::vector<int> steps(len - 1, 0);
  for (int i = 0; i < top - 1; ++i) steps[i] = 1;
  shuffle(rng, steps);
  std::vector<int> num{1};
  for (int s : steps) num.push_back(num.back() + s);
  return num;
}

int round_up_to_three(int x) { return (x + 2) / 3 * 3; }

}  // namespace

TapeInstance gen_random_tape_instance(std::uint64_t seed, const TapeParams& p) {
  Rng rng(seed);
  return gen_random_tape_instance(rng, p);
}

TapeInstance gen_random_tape_instance(Rng& rng, const TapeParams& p) {
  const bool paths = p.paths || p.path_sync;
  const bool sync = p.sync || p.path_sync;
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    TapeInstance inst;
    inst.sigma = p.sigma;
    inst.sync = sync;
    int top = 0;
    std::vector<int> lens;
    for (int t = 0; t < p.tapes; ++t) lens.push_back(p.min_cells + uniform(rng, p.max_cells - p.min_cells + 1));
    if (p.path_sync) top = 1 + uniform(rng, *std::min_element(lens.begin(), lens.end()));
    int max_number = 1;
    for (int t = 0; t < p.tapes; ++t) {
      Tape tape;
      tape.cells = random_cells(rng, lens[t], paths, p.extra_edge_prob);
      tape.content = random_contents(rng, lens[t], p.sigma, p.letter_prob);
      tape.start = 0;
      tape.end = paths ? lens[t] - 1 : uniform(rng, lens[t]);
      if (p.path_sync) {
        tape.number = staircase(rng, lens[t], top);
      } else if (sync) {
        auto dist = bfs_distances(tape.cells, 0);
        for (int d : dist) tape.number.push_back(d + 1);
      }
      for (int x : tape.number) max_number = std::max(max_number, x);
      inst.tapes.push_back(std::move(tape));
    }
    if (sync) inst.r = round_up_to_three(max_number + 2);
    // Heads.
    if (p.path_sync) {
      for (const auto& t : inst.tapes) {
        inst.cs.push_back(t.start);
        inst.ct.push_back(t.end);
      }
    } else if (sync) {
      auto pick = [&](Config& c) {
        int q = 1 + uniform(rng, max_number);
        for (const auto& t : inst.tapes) {
          std::vector<int> cand;
          for (int v = 0; v < t.size(); ++v)
            if (t.number[v] == q) cand.push_back(v);
          if (cand.empty()) return false;
          c.push_back(cand[uniform(rng, static_cast<int>(cand.size()))]);
        }
        return true;
      };
      if (!pick(inst.cs) || !pick(inst.ct)) continue;
    } else {
      for (const auto& t : inst.tapes) {
        inst.cs.push_back(paths ? t.start : uniform(rng, t.size()));
        inst.ct.push_back(paths ? t.end : uniform(rng, t.size()));
      }
    }
    if (p.distinct_heads && inst.cs == inst.ct &&
        std::any_of(inst.tapes.begin(), inst.tapes.end(), [](const Tape& t) { return t.size() > 1; }))
      continue;
    if (is_valid_configuration(inst, inst.cs) && is_valid_configuration(inst, inst.ct)) return inst;
  }
  throw infeasible("tape generator retry budget exhausted");
}

MultiTapeInstance gen_random_multi(Rng& rng, const MultiParams& p) {
  MultiTapeInstance inst;
  inst.sigma = p.sigma;
  inst.sync = p.sync;
  int top = 1 + uniform(rng, p.min_cells);
  for (int i = 0; i < p.tuples; ++i) {
    std::vector<Tape> tuple;
    for (int j = 0; j < p.tapes_per_tuple; ++j) {
      int len = p.min_cells + uniform(rng, p.max_cells - p.min_cells + 1);
      Tape t;
      t.cells = random_cells(rng, len, true, 0);
      t.content = random_contents(rng, len, p.sigma, p.letter_prob);
      t.start = 0;
      t.end = len - 1;
      if (p.sync) t.number = staircase(rng, len, top);
      tuple.push_back(std::move(t));
    }
    inst.tuples.push_back(std::move(tuple));
  }
  if (p.sync) inst.r = round_up_to_three(top + 2);
  return inst;
}

std::optional<DsrInstance> gen_random_dsr(Rng& rng, const DsrParams& p) {
  DsrInstance inst;
  inst.graph = gen_random_graph(rng, p.graph);
  inst.k = p.k;
  inst.rule = p.partitioned ? Rule::kJump : p.rule;
  inst.connected = p.connected;
  const int n = inst.graph.n();
  if (p.partitioned) {
    if (p.k > n || p.k < 1) return std::nullopt;
    // Every part gets at least one vertex.
    std::vector<int> perm(n);
    for (int v = 0; v < n; ++v) perm[v] = v;
    shuffle(rng, perm);
    inst.partition.assign(p.k, VertexSet(n));
    for (int i = 0; i < n; ++i) inst.partition[i < p.k ? i : uniform(rng, p.k)].set(perm[i]);
    std::vector<VertexSet> feasible;
    std::vector<int> pick(p.k, 0);
    std::vector<std::vector<int>> parts;
    for (const auto& part : inst.partition) parts.push_back(part.members());
    while (true) {
      VertexSet d(n);
      for (int i = 0; i < p.k; ++i) d.set(parts[i][pick[i]]);
      if (is_feasible(inst, d)) feasible.push_back(d);
      int i = p.k - 1;
      while (i >= 0 && pick[i] + 1 == static_cast<int>(parts[i].size())) pick[i--] = 0;
      if (i < 0) break;
      ++pick[i];
    }
    if (feasible.empty()) return std::nullopt;
    inst.source = feasible[uniform(rng, static_cast<int>(feasible.size()))];
    inst.target = feasible[uniform(rng, static_cast<int>(feasible.size()))];
    return inst;
  }
  auto sets = minimum_dominating_sets(inst.graph, p.k, {std::nullopt, p.connected});
  if (sets.empty()) return std::nullopt;
  inst.source = sets[uniform(rng, static_cast<int>(sets.size()))];
  inst.target = sets[uniform(rng, static_cast<int>(sets.size()))];
  return inst;
}

}  // namespace reconf
