#include "reconf/tape.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include "reconf/errors.hpp"

namespace reconf {

Tape path_tape(int sigma, const std::vector<std::vector<int>>& letters, std::vector<int> number) {
  Tape t;
  const int len = static_cast<int>(letters.size());
  std::vector<Edge> e;
  for (int i = 0; i + 1 < len; ++i) e.emplace_back(i, i + 1);
  t.cells = Graph(len, e);
  for (const auto& cell : letters) {
    for (int a : cell)
      if (a < 0 || a >= sigma) throw malformed("letter " + std::to_string(a) + " outside alphabet");
    t.content.push_back(LetterSet::of(sigma, cell));
  }
  t.start = 0;
  t.end = len - 1;
  t.number = std::move(number);
  return t;
}

namespace {

int cyclic_gap(int a, int b, int r) {
  int d = ((a - b) % r + r) % r;
  return std::min(d, r - d);
}

bool config_shape_ok(const TapeInstance& inst, const Config& c) {
  if (c.size() != inst.tapes.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] < 0 || c[i] >= inst.tapes[i].size()) return false;
  return true;
}

bool covers(const TapeInstance& inst, const Config& c) {
  LetterSet u(inst.sigma);
  for (std::size_t i = 0; i < c.size(); ++i) u |= inst.tapes[i].content[c[i]];
  return u.count() == inst.sigma;
}

}  // namespace

bool synchronized(const TapeInstance& inst, const Config& c) {
  if (!inst.sync) return true;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (cyclic_gap(inst.tapes[i].number[c[i]], inst.tapes[j].number[c[j]], inst.r) > 1) return false;
  return true;
}

bool is_valid_configuration(const TapeInstance& inst, const Config& c) {
  return config_shape_ok(inst, c) && covers(inst, c) && synchronized(inst, c);
}

namespace {

// Successor generation shared by the public call and the BFS loop.
class Mover {
 public:
  explicit Mover(const TapeInstance& inst) : inst_(inst), k_(static_cast<int>(inst.tapes.size())) {}

  template <class F>
  void each(const Config& c, F&& emit) {
    // prefix[i] = union of tapes < i, suffix[i] = union of tapes >= i
    prefix_.assign(k_ + 1, LetterSet(inst_.sigma));
    suffix_.assign(k_ + 1, LetterSet(inst_.sigma));
    for (int i = 0; i < k_; ++i) prefix_[i + 1] = prefix_[i] | inst_.tapes[i].content[c[i]];
    for (int i = k_ - 1; i >= 0; --i) suffix_[i] = suffix_[i + 1] | inst_.tapes[i].content[c[i]];
    for (int j = 0; j < k_; ++j) {
      const Tape& t = inst_.tapes[j];
      LetterSet others = prefix_[j] | suffix_[j + 1];
      for (int cell : t.cells.neighbors(c[j])) {
        if ((others | t.content[cell]).count() != inst_.sigma) continue;
        if (inst_.sync) {
          bool ok = true;
          for (int i = 0; i < k_ && ok; ++i)
            if (i != j && cyclic_gap(inst_.tapes[i].number[c[i]], t.number[cell], inst_.r) > 1) ok = false;
          if (!ok) continue;
        }
        emit(j, cell);
      }
    }
  }

 private:
  const TapeInstance& inst_;
  int k_;
  std::vector<LetterSet> prefix_, suffix_;
};

using Key = unsigned __int128;
struct KeyHash {
  std::size_t operator()(Key k) const {
    auto lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace

std::vector<Config> tape_successors(const TapeInstance& inst, const Config& c) {
  if (!is_valid_configuration(inst, c)) throw precondition("successors of an invalid tape configuration");
  std::vector<Config> out;
  Mover(inst).each(c, [&](int j, int cell) {
    Config n = c;
    n[j] = cell;
    out.push_back(std::move(n));
  });
  std::sort(out.begin(), out.end());
  return out;
}

TapeResult solve_tape(const TapeInstance& inst, long long state_cap) {
  if (!is_valid_configuration(inst, inst.cs)) throw precondition("start configuration is invalid");
  if (!is_valid_configuration(inst, inst.ct)) throw precondition("target configuration is invalid");
  const int k = static_cast<int>(inst.tapes.size());
  // Mixed-radix encoding of head tuples.
  std::vector<Key> radix(k);
  Key span = 1;
  for (int i = k - 1; i >= 0; --i) {
    radix[i] = span;
    Key size = static_cast<Key>(inst.tapes[i].size());
    if (span > (~Key{0}) / size) throw cap_exceeded("configuration space too large to index");
    span *= size;
  }
  auto encode = [&](const Config& c) {
    Key key = 0;
    for (int i = 0; i < k; ++i) key += radix[i] * static_cast<Key>(c[i]);
    return key;
  };
  auto decode = [&](Key key) {
    Config c(k);
    for (int i = 0; i < k; ++i) {
      c[i] = static_cast<int>(key / radix[i]);
      key %= radix[i];
    }
    return c;
  };

  TapeResult res;
  const Key src = encode(inst.cs), dst = encode(inst.ct);
  std::vector<Key> states{src};
  std::vector<int> parent{-1};
  std::unordered_map<Key, int, KeyHash> index{{src, 0}};
  bool found = src == dst;
  Mover mover(inst);
  std::vector<Key> batch;
  for (std::size_t head = 0; head < states.size() && !found; ++head) {
    const Config cur = decode(states[head]);
    const Key base = states[head];
    batch.clear();
    mover.each(cur, [&](int j, int cell) {
      batch.push_back(base - radix[j] * static_cast<Key>(cur[j]) + radix[j] * static_cast<Key>(cell));
    });
    // Key order equals lexicographic order on head tuples.
    std::sort(batch.begin(), batch.end());
    for (Key nk : batch) {
      if (index.count(nk)) continue;
      if (static_cast<long long>(states.size()) >= state_cap)
        throw cap_exceeded("state cap of " + std::to_string(state_cap) + " configurations exceeded");
      index.emplace(nk, static_cast<int>(states.size()));
      states.push_back(nk);
      parent.push_back(static_cast<int>(head));
      if (nk == dst) {
        found = true;
        break;
      }
    }
  }
  res.explored = static_cast<long long>(states.size());
  res.reachable = found;
  if (found) {
    for (int at = index.at(dst); at >= 0; at = parent[at]) res.witness.push_back(decode(states[at]));
    std::reverse(res.witness.begin(), res.witness.end());
  }
  return res;
}

bool verify_tape_witness(const TapeInstance& inst, const std::vector<Config>& seq) {
  if (seq.empty() || seq.front() != inst.cs || seq.back() != inst.ct) return false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!is_valid_configuration(inst, seq[i])) return false;
    if (i == 0) continue;
    int diff = -1, count = 0;
    for (std::size_t j = 0; j < seq[i].size(); ++j)
      if (seq[i][j] != seq[i - 1][j]) {
        diff = static_cast<int>(j);
        ++count;
      }
    if (count != 1 || !inst.tapes[diff].cells.has_edge(seq[i - 1][diff], seq[i][diff])) return false;
  }
  return true;
}

TapeInstance select(const MultiTapeInstance& inst, const std::vector<int>& selection) {
  TapeInstance out;
  out.sigma = inst.sigma;
  out.sync = inst.sync;
  out.r = inst.r;
  for (std::size_t i = 0; i < inst.tuples.size(); ++i) {
    const Tape& t = inst.tuples[i].at(selection[i]);
    out.tapes.push_back(t);
    out.cs.push_back(t.start);
    out.ct.push_back(t.end);
  }
  return out;
}

MultiResult solve_multi(const MultiTapeInstance& inst, long long state_cap) {
  MultiResult res;
  const int k = static_cast<int>(inst.tuples.size());
  for (const auto& tuple : inst.tuples)
    if (tuple.empty()) throw precondition("empty tuple");
  std::vector<int> sel(k, 0);
  while (true) {
    TapeInstance picked = select(inst, sel);
    if (is_valid_configuration(picked, picked.cs) && is_valid_configuration(picked, picked.ct)) {
      auto r = solve_tape(picked, state_cap);
      res.explored += r.explored;
      if (r.reachable) {
        res.positive = true;
        res.selection = sel;
        return res;
      }
    }
    int i = k - 1;
    while (i >= 0 && sel[i] + 1 == static_cast<int>(inst.tuples[i].size())) sel[i--] = 0;
    if (i < 0) break;
    ++sel[i];
  }
  return res;
}

int min_cover_cells(const TapeInstance& inst, int limit, long long cap) {
  const LetterSet all = LetterSet::full(inst.sigma);
  if (inst.sigma == 0) return 0;
  // Distinct maximal contents only.
  std::vector<LetterSet> sets;
  for (const auto& t : inst.tapes)
    for (const auto& c : t.content)
      if (!c.empty()) sets.push_back(c);
  std::sort(sets.begin(), sets.end(), [](const LetterSet& a, const LetterSet& b) {
    return a.count() != b.count() ? a.count() > b.count() : lex_less(a, b);
  });
  std::vector<LetterSet> maximal;
  for (const auto& s : sets) {
    bool dominated = false;
    for (const auto& m : maximal) dominated = dominated || s.is_subset_of(m);
    if (!dominated) maximal.push_back(s);
  }
  long long nodes = 0;
  std::function<bool(const LetterSet&, int)> search = [&](const LetterSet& covered, int budget) {
    if (++nodes > cap) throw cap_exceeded("cover search exceeds " + std::to_string(cap) + " nodes");
    LetterSet missing = all;
    missing.subtract(covered);
    int a = missing.first();
    if (a < 0) return true;
    if (budget == 0) return false;
    for (const auto& m : maximal)
      if (m.test(a) && search(covered | m, budget - 1)) return true;
    return false;
  };
  for (int size = 1; size <= limit; ++size)
    if (search(LetterSet(inst.sigma), size)) return size;
  return -1;
}

bool is_irreducible(const TapeInstance& inst, long long cap) {
  const int k = static_cast<int>(inst.tapes.size());
  if (k == 0) return true;
  if (inst.sigma == 0) return false;
  return min_cover_cells(inst, k - 1, cap) < 0;
}

bool is_tape_irreducible(const TapeInstance& inst, long long cap) {
  const int k = static_cast<int>(inst.tapes.size());
  if (k == 0) return true;
  const LetterSet all = LetterSet::full(inst.sigma);
  // Distinct maximal contents per tape.
  std::vector<std::vector<LetterSet>> options(k);
  for (int i = 0; i < k; ++i) {
    for (const auto& c : inst.tapes[i].content) {
      bool dominated = false;
      for (const auto& o : options[i]) dominated = dominated || c.is_subset_of(o);
      if (dominated) continue;
      std::erase_if(options[i], [&](const LetterSet& o) { return o.is_subset_of(c); });
      options[i].push_back(c);
    }
  }
  long long nodes = 0;
  for (int skip = 0; skip < k; ++skip) {
    std::function<bool(int, const LetterSet&)> search = [&](int i, const LetterSet& covered) {
      if (++nodes > cap) throw cap_exceeded("cover search exceeds " + std::to_string(cap) + " nodes");
      if (all.is_subset_of(covered)) return true;
      if (i == skip) ++i;
      if (i >= k) return false;
      for (const auto& o : options[i])
        if (search(i + 1, covered | o)) return true;
      return false;
    };
    if (search(0, LetterSet(inst.sigma))) return false;
  }
  return true;
}

ExtendedGraph extended_graph(const TapeInstance& inst) {
  ExtendedGraph out;
  std::vector<Edge> edges;
  std::map<int, std::string> labels;
  int next = 0;
  for (std::size_t t = 0; t < inst.tapes.size(); ++t) {
    out.offset.push_back(next);
    const Tape& tape = inst.tapes[t];
    for (auto [u, v] : tape.cells.edges()) edges.emplace_back(next + u, next + v);
    for (int c = 0; c < tape.size(); ++c) {
      labels[next + c] = "cell:" + std::to_string(t) + ":" + std::to_string(c);
      out.tape_of.push_back(static_cast<int>(t));
    }
    next += tape.size();
  }
  out.letter_base = next;
  for (int a = 0; a < inst.sigma; ++a) {
    labels[next + a] = "letter:" + std::to_string(a);
    out.tape_of.push_back(-1);
  }
  for (std::size_t t = 0; t < inst.tapes.size(); ++t)
    for (int c = 0; c < inst.tapes[t].size(); ++c)
      for (int a : inst.tapes[t].content[c].members()) edges.emplace_back(out.offset[t] + c, next + a);
  out.graph = Graph(next + inst.sigma, edges, std::move(labels));
  return out;
}

std::vector<int> path_order(const Tape& t) {
  const int n = t.size();
  if (n == 0) return {};
  if (t.cells.edge_count() != n - 1 || !is_connected(t.cells)) return {};
  if (n == 1) return t.start == 0 && t.end == 0 ? std::vector<int>{0} : std::vector<int>{};
  for (int v = 0; v < n; ++v)
    if (t.cells.degree(v) > 2) return {};
  if (t.cells.degree(t.start) != 1 || t.cells.degree(t.end) != 1 || t.start == t.end) return {};
  std::vector<int> order{t.start};
  int prev = -1, cur = t.start;
  while (cur != t.end) {
    int nxt = -1;
    for (int w : t.cells.neighbors(cur))
      if (w != prev) nxt = w;
    prev = cur;
    cur = nxt;
    order.push_back(cur);
  }
  return order;
}

bool is_path_tape(const Tape& t) { return !path_order(t).empty(); }

bool is_subdivided_star(const Tape& t) {
  const int n = t.size();
  if (n == 0 || t.cells.edge_count() != n - 1 || !is_connected(t.cells)) return false;
  int branching = 0;
  for (int v = 0; v < n; ++v) branching += t.cells.degree(v) > 2;
  return branching <= 1;
}

namespace {

void check_tape(const Tape& t, int sigma, bool sync, int r, const std::string& name, std::vector<std::string>& out) {
  const int n = t.size();
  if (n == 0) {
    out.push_back(name + " has no cells");
    return;
  }
  if (!is_connected(t.cells)) out.push_back(name + " cell graph is disconnected");
  if (static_cast<int>(t.content.size()) != n) out.push_back(name + " content size differs from cell count");
  for (const auto& c : t.content)
    if (c.universe() != sigma) {
      out.push_back(name + " content over the wrong alphabet");
      break;
    }
  if (t.start < 0 || t.start >= n || t.end < 0 || t.end >= n) out.push_back(name + " start/end out of range");
  if (sync) {
    if (static_cast<int>(t.number.size()) != n) {
      out.push_back(name + " is not numbered");
      return;
    }
    for (int v = 0; v < n; ++v)
      if (t.number[v] < 1 || t.number[v] > r) out.push_back(name + " number outside [1, r] at cell " + std::to_string(v));
    for (auto [u, v] : t.cells.edges())
      if (cyclic_gap(t.number[u], t.number[v], r) > 1)
        out.push_back(name + " numbering jumps on edge " + std::to_string(u) + "-" + std::to_string(v));
  }
}

void check_path_sync(const Tape& t, const std::string& name, std::vector<std::string>& out) {
  auto order = path_order(t);
  if (order.empty() || t.number.empty()) return;
  if (t.number[order.front()] != 1) out.push_back(name + " start cell not numbered 1");
  for (std::size_t i = 1; i < order.size(); ++i)
    if (t.number[order[i]] < t.number[order[i - 1]]) {
      out.push_back(name + " numbering decreases along the path");
      break;
    }
}

}  // namespace

std::vector<std::string> validate_instance(const TapeInstance& inst, const ShapeChecks& shape) {
  std::vector<std::string> out;
  if (inst.sigma < 0) out.push_back("negative alphabet size");
  if (inst.sync && inst.r < 1) out.push_back("sync instance without a modulus");
  for (std::size_t i = 0; i < inst.tapes.size(); ++i) {
    std::string name = "tape " + std::to_string(i);
    check_tape(inst.tapes[i], inst.sigma, inst.sync, inst.r, name, out);
    if (shape.paths && !is_path_tape(inst.tapes[i])) out.push_back(name + " is not a start-to-end path");
    if (shape.path_sync) check_path_sync(inst.tapes[i], name, out);
    if (shape.subdivided_stars && !is_subdivided_star(inst.tapes[i])) out.push_back(name + " is not a subdivided star");
  }
  if (!out.empty()) return out;
  for (const auto* c : {&inst.cs, &inst.ct}) {
    const char* which = c == &inst.cs ? "cs" : "ct";
    if (!config_shape_ok(inst, *c)) {
      out.push_back(std::string(which) + " does not place one head per tape");
      continue;
    }
    if (!covers(inst, *c)) out.push_back(std::string(which) + " does not cover the alphabet");
    if (inst.sync)
      for (std::size_t i = 1; i < c->size(); ++i)
        if (inst.tapes[i].number[(*c)[i]] != inst.tapes[0].number[(*c)[0]]) {
          out.push_back(std::string(which) + " heads are not on equal numbers");
          break;
        }
  }
  return out;
}

std::vector<std::string> validate_multi(const MultiTapeInstance& inst, bool path_sync) {
  std::vector<std::string> out;
  if (inst.tuples.empty()) out.push_back("no tuples");
  std::optional<int> start_no, end_no;
  for (std::size_t i = 0; i < inst.tuples.size(); ++i) {
    if (inst.tuples[i].empty()) out.push_back("tuple " + std::to_string(i) + " is empty");
    for (std::size_t j = 0; j < inst.tuples[i].size(); ++j) {
      const Tape& t = inst.tuples[i][j];
      std::string name = "tape " + std::to_string(i) + "." + std::to_string(j);
      check_tape(t, inst.sigma, inst.sync, inst.r, name, out);
      if (!is_path_tape(t)) out.push_back(name + " is not a start-to-end path");
      if (path_sync) check_path_sync(t, name, out);
      if (inst.sync && static_cast<int>(t.number.size()) == t.size() && t.size() > 0) {
        if (!start_no) start_no = t.number[t.start];
        if (!end_no) end_no = t.number[t.end];
        if (t.number[t.start] != *start_no || t.number[t.end] != *end_no)
          out.push_back(name + " endpoints numbered unlike the other tapes");
      }
    }
  }
  return out;
}

}  // namespace reconf
