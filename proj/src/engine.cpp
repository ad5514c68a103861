#include "reconf/engine.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "reconf/errors.hpp"

namespace reconf {

namespace {

int part_of(const DsrInstance& inst, int v) {
  for (std::size_t i = 0; i < inst.partition.size(); ++i)
    if (inst.partition[i].test(v)) return static_cast<int>(i);
  return -1;
}

bool partition_ok(const DsrInstance& inst, const VertexSet& d) {
  for (const auto& part : inst.partition)
    if ((part & d).count() != 1) return false;
  return true;
}

}  // namespace

bool is_feasible(const DsrInstance& inst, const VertexSet& d) {
  if (d.universe() != inst.graph.n() || d.count() != inst.k) return false;
  if (!dominates(inst.graph, d, inst.core_set())) return false;
  if (inst.connected && !induces_connected(inst.graph, d)) return false;
  return inst.partition.empty() || partition_ok(inst, d);
}

std::vector<std::string> validate_dsr(const DsrInstance& inst) {
  std::vector<std::string> out;
  const int n = inst.graph.n();
  if (inst.k < 0) out.push_back("negative token count");
  if (inst.source.universe() != n) out.push_back("source universe differs from graph");
  if (inst.target.universe() != n) out.push_back("target universe differs from graph");
  if (inst.core && inst.core->universe() != n) out.push_back("core universe differs from graph");
  if (!out.empty()) return out;
  if (inst.source.count() != inst.k) out.push_back("source size differs from k");
  if (inst.target.count() != inst.k) out.push_back("target size differs from k");
  const VertexSet x = inst.core_set();
  if (!dominates(inst.graph, inst.source, x)) out.push_back("source does not dominate the core");
  if (!dominates(inst.graph, inst.target, x)) out.push_back("target does not dominate the core");
  if (inst.connected) {
    if (!induces_connected(inst.graph, inst.source)) out.push_back("source is not connected");
    if (!induces_connected(inst.graph, inst.target)) out.push_back("target is not connected");
  }
  if (!inst.partition.empty()) {
    if (inst.rule != Rule::kJump) out.push_back("partitioned instances use jumping");
    if (static_cast<int>(inst.partition.size()) != inst.k) out.push_back("partition size differs from k");
    VertexSet seen(n);
    for (const auto& p : inst.partition) {
      if (p.universe() != n) {
        out.push_back("partition part universe differs from graph");
        return out;
      }
      if (p.intersects(seen)) out.push_back("partition parts overlap");
      seen |= p;
    }
    if (!partition_ok(inst, inst.source)) out.push_back("source is not one vertex per part");
    if (!partition_ok(inst, inst.target)) out.push_back("target is not one vertex per part");
  }
  return out;
}

bool is_move(const Graph& g, Rule rule, const VertexSet& a, const VertexSet& b) {
  VertexSet out = a, in = b;
  out.subtract(b);
  in.subtract(a);
  if (out.count() != 1 || in.count() != 1) return false;
  return rule == Rule::kJump || g.has_edge(out.first(), in.first());
}

std::vector<VertexSet> successors(const DsrInstance& inst, const VertexSet& d) {
  if (!is_feasible(inst, d)) throw precondition("successors of an infeasible configuration");
  const Graph& g = inst.graph;
  const VertexSet x = inst.core_set();
  std::vector<VertexSet> out;
  for (int u : d.members()) {
    VertexSet rest = d;
    rest.reset(u);
    const VertexSet covered = closed_neighborhood_of(g, rest);
    const int pu = inst.partition.empty() ? -1 : part_of(inst, u);
    auto consider = [&](int v) {
      if (d.test(v)) return;
      if (pu >= 0 && !inst.partition[pu].test(v)) return;
      if (!x.is_subset_of(covered | g.closed_neighborhood(v))) return;
      VertexSet next = rest;
      next.set(v);
      if (inst.connected && !induces_connected(g, next)) return;
      out.push_back(std::move(next));
    };
    if (inst.rule == Rule::kSlide) {
      for (int v : g.neighbors(u)) consider(v);
    } else {
      for (int v = 0; v < g.n(); ++v) consider(v);
    }
  }
  std::sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) { return lex_less(a, b); });
  return out;
}

namespace {

ReconfigResult bfs(const DsrInstance& inst, long long cap, long long& budget_used) {
  ReconfigResult res;
  std::unordered_map<VertexSet, VertexSet, BitsetHash> parent;
  std::deque<VertexSet> queue;
  parent.emplace(inst.source, inst.source);
  queue.push_back(inst.source);
  bool found = inst.source == inst.target;
  while (!queue.empty() && !found) {
    VertexSet cur = std::move(queue.front());
    queue.pop_front();
    for (auto& next : successors(inst, cur)) {
      if (parent.count(next)) continue;
      if (budget_used + static_cast<long long>(parent.size()) >= cap)
        throw cap_exceeded("state cap of " + std::to_string(cap) + " configurations exceeded");
      parent.emplace(next, cur);
      if (next == inst.target) {
        found = true;
        break;
      }
      queue.push_back(std::move(next));
    }
  }
  res.explored = static_cast<long long>(parent.size());
  budget_used += res.explored;
  res.reachable = found;
  if (found) {
    VertexSet cur = inst.target;
    res.witness.push_back(cur);
    while (!(cur == inst.source)) {
      cur = parent.at(cur);
      res.witness.push_back(cur);
    }
    std::reverse(res.witness.begin(), res.witness.end());
  }
  return res;
}

}  // namespace

ReconfigResult solve(const DsrInstance& inst, long long state_cap) {
  if (auto bad = validate_dsr(inst); !bad.empty()) throw precondition(bad.front());
  long long used = 0;
  int ncomp = 0;
  auto comp = connected_components(inst.graph, &ncomp);
  if (ncomp <= 1 || inst.rule != Rule::kSlide || inst.connected || !inst.partition.empty())
    return bfs(inst, state_cap, used);

  // Tokens never leave their component when sliding.
  ReconfigResult total;
  total.reachable = true;
  std::vector<VertexSet> current{inst.source};
  const VertexSet x = inst.core_set();
  for (int c = 0; c < ncomp; ++c) {
    VertexSet keep(inst.graph.n());
    for (int v = 0; v < inst.graph.n(); ++v)
      if (comp[v] == c) keep.set(v);
    if ((inst.source & keep).count() != (inst.target & keep).count()) {
      total.reachable = false;
      total.witness.clear();
      return total;
    }
    std::vector<int> old_to_new;
    DsrInstance sub;
    sub.graph = induced_subgraph(inst.graph, keep, &old_to_new);
    std::vector<int> new_to_old(sub.graph.n());
    for (int v = 0; v < inst.graph.n(); ++v)
      if (old_to_new[v] >= 0) new_to_old[old_to_new[v]] = v;
    auto project = [&](const VertexSet& s) {
      VertexSet out(sub.graph.n());
      for (int v : s.members())
        if (old_to_new[v] >= 0) out.set(old_to_new[v]);
      return out;
    };
    sub.source = project(inst.source);
    sub.target = project(inst.target);
    sub.core = project(x);
    sub.k = sub.source.count();
    sub.rule = Rule::kSlide;
    auto part = bfs(sub, state_cap, used);
    total.explored += part.explored;
    if (!part.reachable) {
      total.reachable = false;
      total.witness.clear();
      return total;
    }
    // Lift: swap this component's tokens step by step.
    for (std::size_t i = 1; i < part.witness.size(); ++i) {
      VertexSet next = current.back();
      next.subtract(keep);
      for (int v : part.witness[i].members()) next.set(new_to_old[v]);
      current.push_back(next);
    }
  }
  total.witness = std::move(current);
  return total;
}

bool verify_witness(const DsrInstance& inst, const std::vector<VertexSet>& seq) {
  if (seq.empty() || !(seq.front() == inst.source) || !(seq.back() == inst.target)) return false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!is_feasible(inst, seq[i])) return false;
    if (i == 0) continue;
    if (!is_move(inst.graph, inst.rule, seq[i - 1], seq[i])) return false;
    if (!inst.partition.empty()) {
      VertexSet out = seq[i - 1];
      out.subtract(seq[i]);
      VertexSet in = seq[i];
      in.subtract(seq[i - 1]);
      if (part_of(inst, out.first()) != part_of(inst, in.first())) return false;
    }
  }
  return true;
}

namespace {

// Lexicographic enumeration of size-k sets dominating x. A branch dies once the
// smallest undominated vertex has no closed neighbour left to pick.
class DsEnumerator {
 public:
  DsEnumerator(const Graph& g, int k, const DominatingSetQuery& q, long long cap, bool stop_at_first)
      : g_(g), k_(k), x_(q.core ? *q.core : g.all_vertices()), connected_(q.connected), cap_(cap),
        stop_(stop_at_first), chosen_(g.n()) {
    if (x_.universe() != g.n()) throw malformed("core universe differs from graph");
    max_nb_.resize(g.n());
    for (int v = 0; v < g.n(); ++v) {
      int m = v;
      for (int u : g.neighbors(v)) m = std::max(m, u);
      max_nb_[v] = m;
    }
  }

  std::vector<VertexSet> run() {
    if (k_ >= 0 && k_ <= g_.n()) rec(0, 0, VertexSet(g_.n()));
    return found_;
  }

 private:
  void rec(int from, int picked, const VertexSet& covered) {
    if (++nodes_ > cap_) throw cap_exceeded("dominating set enumeration exceeds " + std::to_string(cap_) + " nodes");
    VertexSet missing = x_;
    missing.subtract(covered);
    int u = missing.first();
    if (picked == k_) {
      if (u < 0 && (!connected_ || (k_ > 0 && induces_connected(g_, chosen_)))) found_.push_back(chosen_);
      return;
    }
    if (u >= 0 && max_nb_[u] < from) return;
    for (int v = from; v < g_.n() && g_.n() - v >= k_ - picked; ++v) {
      if (stop_ && !found_.empty()) return;
      chosen_.set(v);
      rec(v + 1, picked + 1, covered | g_.closed_neighborhood(v));
      chosen_.reset(v);
      if (u >= 0 && max_nb_[u] <= v) break;
    }
  }

  const Graph& g_;
  int k_;
  VertexSet x_;
  bool connected_;
  long long cap_;
  bool stop_;
  VertexSet chosen_;
  std::vector<int> max_nb_;
  std::vector<VertexSet> found_;
  long long nodes_ = 0;
};

}  // namespace

std::vector<VertexSet> minimum_dominating_sets(const Graph& g, int k, const DominatingSetQuery& q, long long cap) {
  return DsEnumerator(g, k, q, cap, false).run();
}

bool has_dominating_set(const Graph& g, int k, const DominatingSetQuery& q, long long cap) {
  return !DsEnumerator(g, k, q, cap, true).run().empty();
}

int domination_number(const Graph& g, const DominatingSetQuery& q, long long cap) {
  for (int k = 0; k <= g.n(); ++k)
    if (has_dominating_set(g, k, q, cap)) return k;
  return -1;
}

}  // namespace reconf

namespace reconf {

void for_each_small_dominating_set(const Graph& g, int limit, const VertexSet* forbidden,
                                   const std::function<bool(const VertexSet&)>& visit, long long cap,
                                   const VertexSet* targets) {
  const int n = g.n();
  VertexSet banned = forbidden ? *forbidden : VertexSet(n);
  long long nodes = 0;
  bool stop = false;
  std::function<void(VertexSet&, const VertexSet&, VertexSet&)> rec = [&](VertexSet& chosen, const VertexSet& covered,
                                                                        VertexSet& excluded) {
    if (stop) return;
    if (++nodes > cap) throw cap_exceeded("dominating set search exceeds " + std::to_string(cap) + " nodes");
    if (covered.count() == n) {
      if (!visit(chosen)) stop = true;
      return;
    }
    if (chosen.count() >= limit) return;
    // Most constrained undominated vertex.
    int best = -1, best_opts = n + 1;
    for (int u = 0; u < n; ++u) {
      if (covered.test(u)) continue;
      VertexSet opts = g.closed_neighborhood(u);
      opts.subtract(excluded);
      int c = opts.count();
      if (c < best_opts) {
        best_opts = c;
        best = u;
        if (c == 0) return;
      }
    }
    VertexSet opts = g.closed_neighborhood(best);
    opts.subtract(excluded);
    auto list = opts.members();
    std::vector<int> added;
    for (int w : list) {
      chosen.set(w);
      rec(chosen, covered | g.closed_neighborhood(w), excluded);
      chosen.reset(w);
      if (stop) break;
      excluded.set(w);
      added.push_back(w);
    }
    for (int w : added) excluded.reset(w);
  };
  VertexSet chosen(n), covered(n);
  if (targets) covered = VertexSet::full(n).subtract(*targets);
  VertexSet excluded = banned;
  rec(chosen, covered, excluded);
}

bool dominating_set_within(const Graph& g, int limit, const VertexSet* forbidden, long long cap,
                           const VertexSet* targets) {
  bool found = false;
  for_each_small_dominating_set(
      g, limit, forbidden,
      [&](const VertexSet&) {
        found = true;
        return false;
      },
      cap, targets);
  return found;
}

std::vector<VertexSet> all_minimum_dominating_sets(const Graph& g, int limit, long long cap) {
  std::vector<VertexSet> best;
  int best_size = limit + 1;
  for_each_small_dominating_set(
      g, limit, nullptr,
      [&](const VertexSet& d) {
        int c = d.count();
        if (c < best_size) {
          best_size = c;
          best.clear();
        }
        if (c == best_size) best.push_back(d);
        return true;
      },
      cap);
  std::sort(best.begin(), best.end(), [](const VertexSet& a, const VertexSet& b) { return lex_less(a, b); });
  return best;
}

}  // namespace reconf
