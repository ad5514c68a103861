#include "reconf/tape_reduce.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "reconf/errors.hpp"
#include "reconf/matching.hpp"

namespace reconf {

namespace {

constexpr int kFar = std::numeric_limits<int>::max() / 4;

LetterSet alphabet_of(const Tape& t, int sigma) {
  LetterSet a(sigma);
  for (const auto& c : t.content) a |= c;
  return a;
}

// Nearest cell of `t` containing `letter`, by distance from `from`; ties to
// the smaller cell id. Returns {distance, cell} or {kFar, -1}.
std::pair<int, int> nearest(const Tape& t, const std::vector<int>& dist, int letter) {
  std::pair<int, int> best{kFar, -1};
  for (int c = 0; c < t.size(); ++c)
    if (t.content[c].test(letter) && dist[c] < best.first) best = {dist[c], c};
  return best;
}

// First subset (by size, then lexicographically) of `pool` whose alphabet is
// nonempty and smaller than the subset.
std::vector<int> minimal_subset(const std::vector<Tape>& tapes, const std::vector<int>& pool, int sigma) {
  const int m = static_cast<int>(pool.size());
  std::vector<LetterSet> alph;
  for (int t : pool) alph.push_back(alphabet_of(tapes[t], sigma));
  for (int size = 1; size <= m; ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      LetterSet u(sigma);
      for (int i : idx) u |= alph[i];
      int c = u.count();
      if (c >= 1 && c < size) {
        std::vector<int> out;
        for (int i : idx) out.push_back(pool[i]);
        return out;
      }
      int i = size - 1;
      while (i >= 0 && idx[i] == m - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {};
}

}  // namespace

ReducibleSubset extract_reducible_subset(const std::vector<Tape>& tapes, int sigma) {
  if (static_cast<int>(tapes.size()) < sigma + 1) throw precondition("need at least |Σ|+1 tapes");
  ReducibleSubset out;
  for (int t = 0; t < static_cast<int>(tapes.size()); ++t)
    if (alphabet_of(tapes[t], sigma).empty()) out.empty_tapes.push_back(t);
  if (!out.empty_tapes.empty()) return out;

  std::vector<int> pool(sigma + 1);
  for (int i = 0; i <= sigma; ++i) pool[i] = i;
  out.tapes = minimal_subset(tapes, pool, sigma);
  LetterSet u(sigma);
  for (int t : out.tapes) u |= alphabet_of(tapes[t], sigma);
  out.alphabet = u.members();

  std::vector<std::pair<int, int>> edges;
  for (std::size_t a = 0; a < out.alphabet.size(); ++a)
    for (std::size_t j = 0; j < out.tapes.size(); ++j)
      if (alphabet_of(tapes[out.tapes[j]], sigma).test(out.alphabet[a]))
        edges.emplace_back(static_cast<int>(a), static_cast<int>(j));
  auto m = max_bipartite_matching(static_cast<int>(out.alphabet.size()), static_cast<int>(out.tapes.size()), edges);
  if (m.size() != out.alphabet.size()) throw std::logic_error("minimal subset violates Hall's condition");
  for (auto [a, j] : m) {
    const Tape& t = tapes[out.tapes[j]];
    auto cell = nearest(t, bfs_distances(t.cells, t.start), out.alphabet[a]).second;
    out.matching.push_back({out.alphabet[a], {out.tapes[j], cell}});
  }
  return out;
}

TapeInstance tape_reduce_once(const TapeInstance& inst, ReductionStep* step) {
  if (inst.sync) throw precondition("tape reduction applies to unsynchronized instances");
  auto problems = validate_instance(inst);
  if (!problems.empty()) throw malformed(problems.front());
  const int k = static_cast<int>(inst.tapes.size());
  const int sigma = inst.sigma;
  if (k <= 2 * sigma) throw precondition("at most 2|Σ| tapes; nothing to reduce");
  if (!is_valid_configuration(inst, inst.cs) || !is_valid_configuration(inst, inst.ct))
    throw precondition("cs and ct must be valid");

  ReductionStep local;
  ReductionStep& log = step ? *step : local;
  log = {};
  auto finish = [&](const std::vector<int>& drop, const LetterSet& erase) {
    std::vector<int> remap(sigma, -1);
    int next = 0;
    for (int a = 0; a < sigma; ++a)
      if (!erase.test(a)) remap[a] = next++;
    TapeInstance out;
    out.sigma = next;
    out.provenance = inst.provenance;
    for (int t = 0; t < k; ++t) {
      if (std::binary_search(drop.begin(), drop.end(), t)) continue;
      Tape tape = inst.tapes[t];
      for (auto& c : tape.content) {
        LetterSet n(next);
        for (int a : c.members())
          if (remap[a] >= 0) n.set(remap[a]);
        c = n;
      }
      out.tapes.push_back(std::move(tape));
      out.cs.push_back(inst.cs[t]);
      out.ct.push_back(inst.ct[t]);
    }
    log.deleted = drop;
    log.erased = erase.members();
    return out;
  };

  // Content-empty tapes never matter.
  std::vector<int> empty;
  for (int t = 0; t < k; ++t)
    if (alphabet_of(inst.tapes[t], sigma).empty()) empty.push_back(t);
  if (!empty.empty()) {
    log.rule = "empty-tapes";
    return finish(empty, LetterSet(sigma));
  }

  // Greedy cover of Σ by end cells.
  LetterSet covered(sigma);
  std::vector<bool> reserved(k, false);
  while (covered.count() < sigma) {
    int best = -1, gain = 0;
    for (int t = 0; t < k; ++t) {
      if (reserved[t]) continue;
      LetterSet add = inst.tapes[t].content[inst.ct[t]];
      add.subtract(covered);
      if (add.count() > gain) {
        gain = add.count();
        best = t;
      }
    }
    reserved[best] = true;
    covered |= inst.tapes[best].content[inst.ct[best]];
    log.reserved.push_back(best);
  }
  std::sort(log.reserved.begin(), log.reserved.end());

  std::vector<int> pool;
  for (int t = 0; t < k && static_cast<int>(pool.size()) < sigma + 1; ++t)
    if (!reserved[t]) pool.push_back(t);
  std::vector<int> L = minimal_subset(inst.tapes, pool, sigma);
  if (L.empty()) throw std::logic_error("no reducible subset among |Σ|+1 tapes");
  LetterSet alph(sigma);
  for (int t : L) alph |= alphabet_of(inst.tapes[t], sigma);
  const std::vector<int> letters = alph.members();
  const int q = static_cast<int>(letters.size());
  const int m = static_cast<int>(L.size());

  // cost[a][j]: distance from tape L[j]'s start head to its nearest cell with letter a.
  std::vector<std::vector<int>> dist(m);
  std::vector<std::vector<std::pair<int, int>>> cost(q, std::vector<std::pair<int, int>>(m));
  for (int j = 0; j < m; ++j) {
    dist[j] = bfs_distances(inst.tapes[L[j]].cells, inst.cs[L[j]]);
    for (int a = 0; a < q; ++a) cost[a][j] = nearest(inst.tapes[L[j]], dist[j], letters[a]);
  }
  // Minimum total distance over injective letter -> tape maps; the smallest
  // tape index wins ties letter by letter.
  const int full = 1 << m;
  std::vector<std::vector<int>> best(q + 1, std::vector<int>(full, kFar));
  for (int mask = 0; mask < full; ++mask) best[q][mask] = 0;
  for (int a = q - 1; a >= 0; --a)
    for (int mask = 0; mask < full; ++mask)
      for (int j = 0; j < m; ++j)
        if (!(mask >> j & 1) && cost[a][j].first < kFar && best[a + 1][mask | 1 << j] < kFar)
          best[a][mask] = std::min(best[a][mask], cost[a][j].first + best[a + 1][mask | 1 << j]);
  if (best[0][0] >= kFar) throw std::logic_error("letters of the subset cannot be matched");
  std::vector<int> tape_of(q), cell_of(q);
  for (int a = 0, mask = 0; a < q; ++a)
    for (int j = 0; j < m; ++j)
      if (!(mask >> j & 1) && cost[a][j].first < kFar &&
          cost[a][j].first + best[a + 1][mask | 1 << j] == best[a][mask]) {
        tape_of[a] = j;
        cell_of[a] = cost[a][j].second;
        mask |= 1 << j;
        break;
      }

  // Arc (a, b) when letter a sits on tape_of[b] strictly closer to its start than cell_of[b].
  std::vector<std::vector<int>> out_arcs(q);
  std::vector<int> indeg(q, 0);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (a == b) continue;
      const int j = tape_of[b];
      const Tape& t = inst.tapes[L[j]];
      const int limit = dist[j][cell_of[b]];
      bool arc = false;
      for (int c = 0; c < t.size() && !arc; ++c) arc = dist[j][c] < limit && t.content[c].test(letters[a]);
      if (arc) {
        out_arcs[a].push_back(b);
        ++indeg[b];
      }
    }
  std::vector<int> ready;
  for (int a = 0; a < q; ++a)
    if (indeg[a] == 0) ready.push_back(a);
  int seen = 0;
  while (!ready.empty()) {
    int a = ready.back();
    ready.pop_back();
    ++seen;
    for (int b : out_arcs[a])
      if (--indeg[b] == 0) ready.push_back(b);
  }
  if (seen != q) throw std::logic_error("auxiliary digraph has a cycle; matched cells are not distance-minimal");

  log.rule = "matched-subset";
  for (int a = 0; a < q; ++a) log.assignment.emplace_back(letters[a], L[tape_of[a]]);
  return finish(L, alph);
}

TapeReduction reduce_tapes(const TapeInstance& inst) {
  auto problems = validate_instance(inst);
  if (!problems.empty()) throw malformed(problems.front());
  if (!is_valid_configuration(inst, inst.cs) || !is_valid_configuration(inst, inst.ct))
    throw precondition("cs and ct must be valid");
  TapeReduction res{inst, {}};
  while (static_cast<int>(res.reduced.tapes.size()) > 2 * res.reduced.sigma) {
    ReductionStep step;
    res.reduced = tape_reduce_once(res.reduced, &step);
    res.log.push_back(std::move(step));
  }
  return res;
}

BoundedResult solve_bounded_alphabet(const TapeInstance& inst, long long state_cap) {
  BoundedResult res;
  auto red = reduce_tapes(inst);
  res.reduced = std::move(red.reduced);
  res.log = std::move(red.log);
  if (res.reduced.tapes.empty()) {
    res.reachable = true;
    return res;
  }
  auto r = solve_tape(res.reduced, state_cap);
  res.reachable = r.reachable;
  res.explored = r.explored;
  return res;
}

}  // namespace reconf
