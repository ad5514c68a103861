#include "reconf/kernelize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "reconf/matching.hpp"

namespace reconf {

namespace {

VertexSet remap_set(const VertexSet& s, const std::vector<int>& old_to_new, int n) {
  VertexSet out(n);
  for (int v : s.members())
    if (old_to_new[v] >= 0) out.set(old_to_new[v]);
  return out;
}

// New instance over `n` vertices; `old_to_new` maps kept vertices (-1 drops),
// edges are given in old ids and loops vanish.
DcrInstance rebuild(const DcrInstance& inst, const std::vector<int>& old_to_new, int n,
                    const std::vector<Edge>& old_edges) {
  std::vector<Edge> edges;
  for (auto [u, v] : old_edges) {
    int a = old_to_new[u], b = old_to_new[v];
    if (a >= 0 && b >= 0 && a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::map<int, std::string> labels;
  for (const auto& [v, l] : inst.graph.labels())
    if (old_to_new[v] >= 0 && !labels.count(old_to_new[v])) labels[old_to_new[v]] = l;
  DcrInstance out = inst;
  out.graph = Graph(n, edges, labels);
  out.core = remap_set(inst.core_set(), old_to_new, n);
  out.source = remap_set(inst.source, old_to_new, n);
  out.target = remap_set(inst.target, old_to_new, n);
  out.anchor = inst.anchor >= 0 ? old_to_new[inst.anchor] : -1;
  return out;
}

DcrInstance without_vertex(const DcrInstance& inst, int x) {
  std::vector<int> m(inst.graph.n());
  int next = 0;
  for (int v = 0; v < inst.graph.n(); ++v) m[v] = v == x ? -1 : next++;
  return rebuild(inst, m, next, inst.graph.edges());
}

void require_core(const DcrInstance& inst) {
  if (!inst.core) throw precondition("instance has no core");
}

// An anchor added when V = X has no neighbours; it is the only vertex allowed
// to sit outside the main component.
bool connected_enough(const DcrInstance& inst) {
  if (is_connected(inst.graph)) return true;
  if (inst.anchor < 0 || inst.graph.degree(inst.anchor) > 0) return false;
  VertexSet rest = inst.graph.all_vertices();
  rest.reset(inst.anchor);
  return is_connected(induced_subgraph(inst.graph, rest));
}

void require_connected(const DcrInstance& inst, const char* rule) {
  if (!connected_enough(inst)) throw std::logic_error(std::string(rule) + " disconnected the graph");
}

long long size_of(const Graph& g) { return g.n() + g.edge_count(); }

std::vector<int> class_index(const Graph& g, const std::vector<NeighborhoodClass>& classes) {
  std::vector<int> of(g.n(), -1);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (int v : classes[c].members.members()) of[v] = static_cast<int>(c);
  return of;
}

int matching_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
  auto left = a.members(), right = b.members();
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j)
      if (g.has_edge(left[i], right[j])) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return static_cast<int>(
      max_bipartite_matching(static_cast<int>(left.size()), static_cast<int>(right.size()), edges).size());
}

// log2 of the bounds, so huge exponents stay comparable.
double log2_small_class_bound(int p, int core) { return p * std::ldexp(1.0, std::min(core, 1000)); }
double log2_three_class_bound(int k, int d, int core) {
  double kd = static_cast<double>(k) * d;
  return std::ldexp(1.0, std::min(core, 1000)) * (kd + std::ldexp(1.0, static_cast<int>(std::min(kd, 1000.0))));
}

}  // namespace

const VertexSet& DcrInstance::core_set() const {
  if (!core) throw precondition("instance has no core");
  return *core;
}

DsrInstance DcrInstance::as_dsr() const {
  DsrInstance out;
  out.graph = graph;
  out.k = k;
  out.source = source;
  out.target = target;
  out.rule = Rule::kSlide;
  out.core = core_set();
  return out;
}

std::vector<std::string> validate_dcr(const DcrInstance& inst) {
  std::vector<std::string> out;
  const int n = inst.graph.n();
  if (!inst.core) out.push_back("core missing");
  if (inst.source.universe() != n || inst.target.universe() != n) {
    out.push_back("source/target universe differs from the graph");
    return out;
  }
  if (inst.core && inst.core->universe() != n) {
    out.push_back("core universe differs from the graph");
    return out;
  }
  if (inst.k < 0) out.push_back("k negative");
  if (inst.d < 1) out.push_back("d must be positive");
  if (inst.source.count() != inst.k) out.push_back("source size differs from k");
  if (inst.target.count() != inst.k) out.push_back("target size differs from k");
  if (inst.core) {
    if (!inst.source.is_subset_of(*inst.core) || !inst.target.is_subset_of(*inst.core))
      out.push_back("core must contain source and target");
    if (!dominates(inst.graph, inst.source, *inst.core)) out.push_back("source does not dominate the core");
    if (!dominates(inst.graph, inst.target, *inst.core)) out.push_back("target does not dominate the core");
  }
  if (inst.anchor >= n) out.push_back("anchor out of range");
  if (inst.anchor >= 0 && inst.core && inst.core->test(inst.anchor)) out.push_back("anchor inside the core");
  if (n > 0 && !connected_enough(inst)) out.push_back("graph not connected");
  return out;
}

bool is_domination_core(const Graph& g, int k, const VertexSet& x, long long cap) {
  for (int v = 0; v < g.n(); ++v) {
    if (x.test(v)) continue;
    // A set missing N[v] that still dominates X refutes X.
    const VertexSet& banned = g.closed_neighborhood(v);
    if (dominating_set_within(g, k, &banned, cap, &x)) return false;
  }
  return true;
}

long long core_size_bound(int d, int k) {
  constexpr long long kMax = std::numeric_limits<long long>::max();
  long long out = 2LL * d + 1;
  for (int i = 0; i <= d; ++i) {
    if (k != 0 && out > kMax / k) return kMax;
    out *= k;
  }
  return out;
}

VertexSet compute_core(const Graph& g, int k, const VertexSet& must_include, int d, long long cap) {
  (void)d;  // the size bound is reported, not enforced
  if (!dominating_set_within(g, k, nullptr, cap)) throw infeasible("no dominating set of size at most k");
  VertexSet x = g.all_vertices();
  for (int v = 0; v < g.n(); ++v) {
    if (must_include.test(v)) continue;
    x.reset(v);
    if (!is_domination_core(g, k, x, cap)) x.set(v);
  }
  return x;
}

static DcrInstance reduce_twins_raw(const DcrInstance& inst) {
  require_core(inst);
  DcrInstance cur = inst;
  while (true) {
    VertexSet protect(cur.graph.n());
    if (cur.anchor >= 0) protect.set(cur.anchor);
    auto pair = find_reducible_vertex(cur.graph, *cur.core, &protect);
    if (!pair) break;
    cur = without_vertex(cur, pair->removable);
  }
  require_connected(cur, "twin removal");
  return cur;
}

static DcrInstance contract_class_components_raw(const DcrInstance& inst) {
  require_core(inst);
  const Graph& g = inst.graph;
  auto classes = neighborhood_classes(g, *inst.core);
  auto cls = class_index(g, classes);
  std::vector<int> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  bool merged = false;
  for (auto [u, v] : g.edges()) {
    if (cls[u] < 0 || cls[u] != cls[v]) continue;
    int a = find(u), b = find(v);
    if (a == b) continue;
    // The anchor, else the smallest id, represents the component.
    if (b == inst.anchor || (a != inst.anchor && b < a)) std::swap(a, b);
    parent[b] = a;
    merged = true;
  }
  if (!merged) return inst;
  std::vector<int> m(g.n(), -1);
  int next = 0;
  for (int v = 0; v < g.n(); ++v)
    if (find(v) == v) m[v] = next++;
  for (int v = 0; v < g.n(); ++v) m[v] = m[find(v)];
  auto out = rebuild(inst, m, next, g.edges());
  require_connected(out, "class contraction");
  return out;
}

static DcrInstance add_universal_and_prune_zero_class_raw(const DcrInstance& inst) {
  require_core(inst);
  if (!is_connected(inst.graph)) throw precondition("graph must be connected");
  if (inst.anchor >= 0) return reduce_twins_raw(inst);
  const Graph& g = inst.graph;
  const int n = g.n();
  std::vector<Edge> edges = g.edges();
  for (int v = 0; v < n; ++v)
    if (!inst.core->test(v)) edges.emplace_back(v, n);
  auto labels = g.labels();
  labels[n] = "anchor";
  DcrInstance out = inst;
  out.graph = Graph(n + 1, edges, labels);
  auto widen = [&](const VertexSet& s) {
    VertexSet w(n + 1);
    for (int v : s.members()) w.set(v);
    return w;
  };
  out.core = widen(*inst.core);
  out.source = widen(inst.source);
  out.target = widen(inst.target);
  out.anchor = n;
  return reduce_twins_raw(out);
}

static DcrInstance prune_small_type_edges_raw(const DcrInstance& inst) {
  require_core(inst);
  if (inst.anchor < 0) throw precondition("the universal anchor must be present");
  auto classes = neighborhood_classes(inst.graph, *inst.core);
  auto cls = class_index(inst.graph, classes);
  auto small = [&](int v) { return cls[v] >= 0 && classes[cls[v]].type() <= 2; };

  std::vector<Edge> between, to_anchor;
  for (auto [u, v] : inst.graph.edges()) {
    if (cls[u] < 0 || cls[v] < 0 || cls[u] == cls[v]) continue;
    if (u == inst.anchor || v == inst.anchor)
      to_anchor.emplace_back(u, v);
    else if (small(u) && small(v))
      between.emplace_back(u, v);
  }
  // Inter-class edges first; anchor edges afterwards, so the anchor keeps
  // carrying connectivity for the classes whose edges were cut.
  std::set<Edge> kept;
  for (auto e : inst.graph.edges()) kept.insert(e);
  bool changed = false;
  for (const auto* list : {&between, &to_anchor})
    for (auto e : *list) {
      kept.erase(e);
      Graph trial(inst.graph.n(), {kept.begin(), kept.end()});
      if (is_connected(trial))
        changed = true;
      else
        kept.insert(e);
    }
  if (!changed) return inst;
  std::vector<int> id(inst.graph.n());
  std::iota(id.begin(), id.end(), 0);
  auto out = rebuild(inst, id, inst.graph.n(), {kept.begin(), kept.end()});
  require_connected(out, "edge pruning");
  return out;
}

std::vector<ClassPair> fat_pairs(const DcrInstance& inst) {
  require_core(inst);
  auto classes = neighborhood_classes(inst.graph, *inst.core);
  std::vector<ClassPair> out;
  const int c = static_cast<int>(classes.size());
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) {
      if (i == j) continue;
      int m = matching_between(inst.graph, classes[i].members, classes[j].members);
      if (m > inst.k * inst.d) out.push_back({i, j, m});
    }
  return out;
}

static DcrInstance prune_three_classes_raw(const DcrInstance& inst) {
  require_core(inst);
  if (inst.family != Family::kK4dMinorFree) throw precondition("3-class pruning needs the K_{4,d}-minor-free family");
  auto classes = neighborhood_classes(inst.graph, *inst.core);
  std::set<Edge> cut;
  for (auto pr : fat_pairs(inst)) {
    if (classes[pr.from].type() != 3) continue;
    for (int a : classes[pr.from].members.members())
      for (int b : classes[pr.to].members.members())
        if (inst.graph.has_edge(a, b)) cut.insert({std::min(a, b), std::max(a, b)});
  }
  DcrInstance out = inst;
  if (!cut.empty()) {
    std::vector<Edge> keep;
    for (auto e : inst.graph.edges())
      if (!cut.count(e)) keep.push_back(e);
    std::vector<int> id(inst.graph.n());
    std::iota(id.begin(), id.end(), 0);
    out = rebuild(inst, id, inst.graph.n(), keep);
  }
  return reduce_twins_raw(out);
}

bool is_tight(const DcrInstance& inst, long long cap) {
  require_core(inst);
  if (inst.k <= 0) return true;
  return !dominating_set_within(inst.graph, inst.k - 1, nullptr, cap, &*inst.core);
}

DcrInstance reduce_twins(const DcrInstance& inst) { return is_tight(inst) ? reduce_twins_raw(inst) : inst; }

DcrInstance contract_class_components(const DcrInstance& inst) {
  return is_tight(inst) ? contract_class_components_raw(inst) : inst;
}

DcrInstance add_universal_and_prune_zero_class(const DcrInstance& inst) {
  require_core(inst);
  if (!is_connected(inst.graph)) throw precondition("graph must be connected");
  return is_tight(inst) ? add_universal_and_prune_zero_class_raw(inst) : inst;
}

DcrInstance prune_small_type_edges(const DcrInstance& inst) {
  require_core(inst);
  if (inst.anchor < 0) throw precondition("the universal anchor must be present");
  return is_tight(inst) ? prune_small_type_edges_raw(inst) : inst;
}

DcrInstance prune_three_classes(const DcrInstance& inst) {
  require_core(inst);
  if (inst.family != Family::kK4dMinorFree) throw precondition("3-class pruning needs the K_{4,d}-minor-free family");
  return is_tight(inst) ? prune_three_classes_raw(inst) : inst;
}

std::map<int, std::vector<int>> class_histogram(const Graph& g, const VertexSet& x) {
  std::map<int, std::vector<int>> out;
  for (const auto& c : neighborhood_classes(g, x)) out[c.type()].push_back(c.members.count());
  for (auto& [_, v] : out) std::sort(v.begin(), v.end());
  return out;
}

KernelResult kernelize(const DcrInstance& input, long long cap) {
  KernelResult res;
  KernelReport& rep = res.report;
  rep.size_before = size_of(input.graph);
  if (input.source.universe() != input.graph.n() || input.target.universe() != input.graph.n())
    throw malformed("source/target universe differs from the graph");
  if (!connected_enough(input)) throw malformed("graph not connected");
  if (input.family == Family::kK3dFree) {
    if (auto b = find_biclique(input.graph, 3, input.d, cap))
      throw FamilyViolation("graph contains K_{3," + std::to_string(input.d) + "}", *b);
  }

  DcrInstance cur = input;
  if (!cur.core) {
    cur.core = compute_core(cur.graph, cur.k, cur.source | cur.target, cur.d, cap);
    rep.core_computed = true;
    rep.rules_applied.push_back("compute_core");
  }
  auto problems = validate_dcr(cur);
  if (!problems.empty()) throw malformed(problems.front());

  auto step = [&](const char* name, DcrInstance next) {
    bool changed = size_of(next.graph) != size_of(cur.graph);
    if (changed) {
      if (size_of(next.graph) > size_of(cur.graph))
        throw std::logic_error(std::string(name) + " grew the instance");
      rep.rules_applied.push_back(name);
    }
    cur = std::move(next);
    return changed;
  };

  rep.tight = is_tight(cur, cap);
  if (!rep.tight) {
    // The class rules are unsound here; a computed core can be widened to V
    // without changing the answer, which makes the certificates vacuous.
    if (rep.core_computed) {
      cur.core = cur.graph.all_vertices();
      rep.rules_applied.push_back("widen_core");
    }
  } else {
    step("contract_class_components", contract_class_components_raw(cur));
    if (cur.anchor < 0) {
      cur = add_universal_and_prune_zero_class_raw(cur);
      rep.rules_applied.push_back("add_universal_and_prune_zero_class");
    }
    for (bool changed = true; changed;) {
      changed = false;
      changed |= step("contract_class_components", contract_class_components_raw(cur));
      changed |= step("prune_small_type_edges", prune_small_type_edges_raw(cur));
      if (cur.family == Family::kK4dMinorFree) changed |= step("prune_three_classes", prune_three_classes_raw(cur));
      changed |= step("reduce_twins", reduce_twins_raw(cur));
    }
  }

  const VertexSet& x = *cur.core;
  rep.core_size = x.count();
  rep.core_bound = core_size_bound(cur.d, cur.k);
  rep.size_after = size_of(cur.graph);
  rep.class_sizes = class_histogram(cur.graph, x);
  const int large_from = cur.family == Family::kK3dFree ? 3 : 4;
  int p = 2;
  rep.zero_class_ok = true;
  rep.large_classes_ok = true;
  for (const auto& [type, sizes] : rep.class_sizes)
    for (int s : sizes) {
      if (type == 0) rep.zero_class_ok = rep.zero_class_ok && s <= 1;
      if (type >= large_from) rep.large_classes_ok = rep.large_classes_ok && s < cur.d;
      if (type == 0 || type >= 3) p = std::max(p, s);
      if (type == 3 && cur.family == Family::kK4dMinorFree)
        rep.three_classes_ok = rep.three_classes_ok && std::log2(s) <= log2_three_class_bound(cur.k, cur.d, rep.core_size);
    }
  rep.p = p;
  rep.small_classes_ok = true;
  for (int type : {1, 2})
    if (rep.class_sizes.count(type))
      for (int s : rep.class_sizes.at(type))
        rep.small_classes_ok = rep.small_classes_ok && std::log2(s) <= log2_small_class_bound(p, rep.core_size);
  VertexSet protect(cur.graph.n());
  if (cur.anchor >= 0) protect.set(cur.anchor);
  rep.twin_free = !find_reducible_vertex(cur.graph, x, &protect).has_value();
  res.kernel = std::move(cur);
  return res;
}

ReconfigResult solve_via_kernel(const DcrInstance& inst, long long state_cap) {
  auto k = kernelize(inst);
  return solve(k.kernel.as_dsr(), state_cap);
}

}  // namespace reconf
