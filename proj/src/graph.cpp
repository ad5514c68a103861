#include "reconf/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "reconf/errors.hpp"

namespace reconf {

Graph::Graph(int n, const std::vector<Edge>& edges, std::map<int, std::string> labels)
    : adj_(n), labels_(std::move(labels)) {
  if (n < 0) throw malformed("negative vertex count");
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw malformed("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
    if (u == v) throw malformed("self-loop on vertex " + std::to_string(u));
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    edge_count_ += static_cast<int>(a.size());
  }
  edge_count_ /= 2;
  for (const auto& [v, _] : labels_)
    if (v < 0 || v >= n) throw malformed("label on out-of-range vertex " + std::to_string(v));
  closed_.reserve(n);
  for (int v = 0; v < n; ++v) {
    VertexSet s(n);
    s.set(v);
    for (int u : adj_[v]) s.set(u);
    closed_.push_back(std::move(s));
  }
}

bool Graph::has_edge(int u, int v) const {
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

VertexSet Graph::open_neighborhood(int v) const {
  VertexSet s = closed_[v];
  s.reset(v);
  return s;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (int u = 0; u < n(); ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::string Graph::label(int v) const {
  auto it = labels_.find(v);
  return it == labels_.end() ? std::string{} : it->second;
}

Graph induced_subgraph(const Graph& g, const VertexSet& keep, std::vector<int>* old_to_new) {
  std::vector<int> map(g.n(), -1);
  int next = 0;
  for (int v = 0; v < g.n(); ++v)
    if (keep.test(v)) map[v] = next++;
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges())
    if (map[u] >= 0 && map[v] >= 0) edges.emplace_back(map[u], map[v]);
  std::map<int, std::string> labels;
  for (const auto& [v, l] : g.labels())
    if (map[v] >= 0) labels[map[v]] = l;
  if (old_to_new) *old_to_new = map;
  return Graph(next, edges, std::move(labels));
}

Graph remove_vertices(const Graph& g, const VertexSet& drop, std::vector<int>* old_to_new) {
  VertexSet keep = g.all_vertices();
  keep.subtract(drop);
  return induced_subgraph(g, keep, old_to_new);
}

static void check_range(const Graph& g, const VertexSet& s, const char* what) {
  if (s.universe() != g.n())
    throw malformed(std::string(what) + " is over a universe of " + std::to_string(s.universe()) +
                    " vertices, graph has " + std::to_string(g.n()));
}

VertexSet closed_neighborhood_of(const Graph& g, const VertexSet& d) {
  check_range(g, d, "dominating set");
  VertexSet cov(g.n());
  for (int v : d.members()) cov |= g.closed_neighborhood(v);
  return cov;
}

bool dominates(const Graph& g, const VertexSet& d, const VertexSet& x) {
  check_range(g, x, "target set");
  return x.is_subset_of(closed_neighborhood_of(g, d));
}

bool dominates_all(const Graph& g, const VertexSet& d) { return dominates(g, d, g.all_vertices()); }

std::vector<int> bfs_distances(const Graph& g, int source) {
  std::vector<int> dist(g.n(), -1);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

std::vector<int> connected_components(const Graph& g, int* count) {
  std::vector<int> comp(g.n(), -1);
  int c = 0;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors(u))
        if (comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}

bool is_connected(const Graph& g) {
  int c = 0;
  connected_components(g, &c);
  return c <= 1;
}

bool induces_connected(const Graph& g, const VertexSet& d) {
  int start = d.first();
  if (start < 0) return false;
  VertexSet seen(g.n());
  seen.set(start);
  std::vector<int> stack{start};
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.neighbors(u))
      if (d.test(v) && !seen.test(v)) {
        seen.set(v);
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == d.count();
}

std::vector<NeighborhoodClass> neighborhood_classes(const Graph& g, const VertexSet& x) {
  check_range(g, x, "core");
  std::map<std::vector<int>, NeighborhoodClass> by_key;
  for (int v = 0; v < g.n(); ++v) {
    if (x.test(v)) continue;
    VertexSet y = g.open_neighborhood(v) & x;
    auto key = y.members();
    auto it = by_key.find(key);
    if (it == by_key.end()) it = by_key.emplace(key, NeighborhoodClass{y, VertexSet(g.n())}).first;
    it->second.members.set(v);
  }
  std::vector<NeighborhoodClass> out;
  out.reserve(by_key.size());
  for (auto& [_, cls] : by_key) out.push_back(std::move(cls));
  return out;
}

std::optional<TwinPair> find_reducible_vertex(const Graph& g, const VertexSet& x, const VertexSet* protect) {
  check_range(g, x, "core");
  for (int a = 0; a < g.n(); ++a) {
    if (x.test(a) || (protect && protect->test(a))) continue;
    VertexSet na = g.open_neighborhood(a);
    for (int b = 0; b < g.n(); ++b) {
      if (b == a || x.test(b)) continue;
      VertexSet rest = na;
      rest.reset(b);
      if (rest.is_subset_of(g.open_neighborhood(b))) return TwinPair{a, b};
    }
  }
  return std::nullopt;
}

Degeneracy degeneracy(const Graph& g) {
  Degeneracy out;
  std::vector<int> deg(g.n());
  std::vector<bool> gone(g.n(), false);
  for (int v = 0; v < g.n(); ++v) deg[v] = g.degree(v);
  for (int step = 0; step < g.n(); ++step) {
    int best = -1;
    for (int v = 0; v < g.n(); ++v)
      if (!gone[v] && (best < 0 || deg[v] < deg[best])) best = v;
    out.d = std::max(out.d, deg[best]);
    out.ordering.push_back(best);
    gone[best] = true;
    for (int u : g.neighbors(best))
      if (!gone[u]) --deg[u];
  }
  return out;
}

bool is_forest(const Graph& g, const VertexSet& removed) {
  std::vector<int> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto [u, v] : g.edges()) {
    if (removed.test(u) || removed.test(v)) continue;
    int a = find(u), b = find(v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

namespace {

// Multigraph used by the feedback vertex set search. Degree-2 vertices are
// bypassed, which can create parallel edges and self-loops.
struct FvsState {
  int n;
  std::vector<int> mult;  // n*n edge multiplicities, diagonal holds loops
  std::vector<char> alive;

  int& m(int u, int v) { return mult[u * n + v]; }
  int deg(int v) const {
    int d = 0;
    for (int u = 0; u < n; ++u)
      if (alive[u]) d += (u == v ? 2 : 1) * mult[v * n + u];
    return d;
  }
  void kill(int v) {
    alive[v] = 0;
    for (int u = 0; u < n; ++u) m(v, u) = m(u, v) = 0;
  }
};

// Reduces in place; returns false when the forced picks exceed the budget.
bool fvs_reduce(FvsState& s, int& budget, std::vector<int>& picked) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < s.n; ++v) {
      if (!s.alive[v]) continue;
      if (s.m(v, v) > 0) {
        if (budget == 0) return false;
        --budget;
        picked.push_back(v);
        s.kill(v);
        changed = true;
        continue;
      }
      int d = s.deg(v);
      if (d <= 1) {
        s.kill(v);
        changed = true;
      } else if (d == 2) {
        std::vector<int> nb;
        for (int u = 0; u < s.n; ++u)
          if (s.alive[u] && u != v)
            for (int c = 0; c < s.m(v, u); ++c) nb.push_back(u);
        if (nb[0] == nb[1]) {
          // v sits on a 2-cycle with nb[0]; every cycle through v uses nb[0].
          if (budget == 0) return false;
          --budget;
          picked.push_back(nb[0]);
          s.kill(nb[0]);
          s.kill(v);
        } else {
          s.kill(v);
          ++s.m(nb[0], nb[1]);
          ++s.m(nb[1], nb[0]);
        }
        changed = true;
      }
    }
  }
  return true;
}

std::vector<int> shortest_cycle(FvsState& s) {
  for (int u = 0; u < s.n; ++u)
    for (int v = u + 1; v < s.n; ++v)
      if (s.alive[u] && s.alive[v] && s.m(u, v) >= 2) return {u, v};
  std::vector<int> best;
  for (int root = 0; root < s.n; ++root) {
    if (!s.alive[root]) continue;
    std::vector<int> dist(s.n, -1), par(s.n, -1);
    std::queue<int> q;
    dist[root] = 0;
    q.push(root);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < s.n; ++v) {
        if (!s.alive[v] || s.m(u, v) == 0 || v == par[u]) continue;
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          par[v] = u;
          q.push(v);
        } else {
          int len = dist[u] + dist[v] + 1;
          if (best.empty() || len < static_cast<int>(best.size())) {
            std::vector<int> a, b;
            for (int x = u; x >= 0; x = par[x]) a.push_back(x);
            for (int x = v; x >= 0; x = par[x]) b.push_back(x);
            // Trim to the lowest common ancestor.
            while (a.size() > 1 && b.size() > 1 && a[a.size() - 2] == b[b.size() - 2]) {
              a.pop_back();
              b.pop_back();
            }
            std::vector<int> cyc = a;
            for (int i = static_cast<int>(b.size()) - 2; i >= 0; --i) cyc.push_back(b[i]);
            if (best.empty() || cyc.size() < best.size()) best = cyc;
          }
        }
      }
    }
  }
  return best;
}

int fvs_lower_bound(const FvsState& s) {
  int n = 0, m2 = 0;
  std::vector<int> degs;
  for (int v = 0; v < s.n; ++v)
    if (s.alive[v]) {
      ++n;
      int d = s.deg(v);
      m2 += d;
      degs.push_back(d);
    }
  int cyclomatic = m2 / 2 - n + 1;  // graph is connected or this underestimates
  if (cyclomatic <= 0) return degs.empty() ? 0 : 1;
  std::sort(degs.rbegin(), degs.rend());
  int lb = 0, acc = 0;
  for (int d : degs) {
    if (acc >= cyclomatic) break;
    acc += d - 1;
    ++lb;
  }
  return lb;
}

bool fvs_search(FvsState s, int budget, std::vector<int>& picked) {
  std::size_t mark = picked.size();
  if (!fvs_reduce(s, budget, picked)) {
    picked.resize(mark);
    return false;
  }
  bool any = false;
  for (int v = 0; v < s.n; ++v) any = any || s.alive[v];
  if (!any) return true;
  if (budget == 0 || fvs_lower_bound(s) > budget) {
    picked.resize(mark);
    return false;
  }
  for (int v : shortest_cycle(s)) {
    FvsState next = s;
    next.kill(v);
    picked.push_back(v);
    if (fvs_search(std::move(next), budget - 1, picked)) return true;
    picked.pop_back();
  }
  picked.resize(mark);
  return false;
}

}  // namespace

VertexSet min_feedback_vertex_set(const Graph& g, int cap) {
  if (g.n() > cap)
    throw cap_exceeded("feedback vertex set search capped at " + std::to_string(cap) + " vertices");
  FvsState s{g.n(), std::vector<int>(static_cast<std::size_t>(g.n()) * g.n(), 0),
             std::vector<char>(g.n(), 1)};
  for (auto [u, v] : g.edges()) s.m(u, v) = s.m(v, u) = 1;
  for (int budget = 0; budget <= g.n(); ++budget) {
    std::vector<int> picked;
    if (fvs_search(s, budget, picked)) return VertexSet::of(g.n(), picked);
  }
  return g.all_vertices();
}

std::optional<Biclique> find_biclique(const Graph& g, int a, int b, long long cap) {
  if (a <= 0 || b <= 0) return Biclique{};
  if (a > g.n()) return std::nullopt;
  // Binomial guard.
  long double combos = 1;
  for (int i = 0; i < a; ++i) combos = combos * (g.n() - i) / (i + 1);
  if (combos > static_cast<long double>(cap))
    throw cap_exceeded("biclique search exceeds " + std::to_string(cap) + " subsets");
  std::vector<int> idx(a);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    VertexSet common = g.all_vertices();
    for (int v : idx) common &= g.open_neighborhood(v);
    if (common.count() >= b) {
      auto right = common.members();
      right.resize(b);
      return Biclique{idx, right};
    }
    int i = a - 1;
    while (i >= 0 && idx[i] == g.n() - a + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
  }
  return std::nullopt;
}

bool contains_biclique(const Graph& g, int a, int b, long long cap) {
  return find_biclique(g, a, b, cap).has_value();
}

DecompositionCheck verify_decomposition(const Graph& g, const TreeDecomposition& td, std::optional<int> s) {
  DecompositionCheck out;
  const int nb = static_cast<int>(td.bags.size());
  auto fail = [&](std::string why) {
    out.valid = false;
    out.reason = std::move(why);
    return out;
  };
  for (const auto& bag : td.bags) {
    if (bag.universe() != g.n()) return fail("bag universe differs from graph");
    out.width = std::max(out.width, bag.count() - 1);
    std::vector<int> tapes;
    if (!td.tape_of.empty())
      for (int v : bag.members())
        if (td.tape_of[v] >= 0) tapes.push_back(td.tape_of[v]);
    std::sort(tapes.begin(), tapes.end());
    tapes.erase(std::unique(tapes.begin(), tapes.end()), tapes.end());
    out.max_tapes_per_bag = std::max(out.max_tapes_per_bag, static_cast<int>(tapes.size()));
  }
  out.structured = !s || out.max_tapes_per_bag <= *s;
  if (nb == 0) {
    if (g.n() == 0) {
      out.valid = true;
      return out;
    }
    return fail("no bags");
  }
  // The bag tree must be a tree.
  if (static_cast<int>(td.tree.size()) != nb - 1) return fail("bag graph is not a tree (edge count)");
  std::vector<std::vector<int>> tadj(nb);
  for (auto [a, b] : td.tree) {
    if (a < 0 || b < 0 || a >= nb || b >= nb || a == b) return fail("bag tree edge out of range");
    tadj[a].push_back(b);
    tadj[b].push_back(a);
  }
  {
    std::vector<char> seen(nb, 0);
    std::vector<int> st{0};
    seen[0] = 1;
    int cnt = 1;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int v : tadj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++cnt;
          st.push_back(v);
        }
    }
    if (cnt != nb) return fail("bag graph is not a tree (disconnected)");
  }
  // Vertex coverage and subtree connectivity.
  for (int v = 0; v < g.n(); ++v) {
    std::vector<int> holding;
    for (int i = 0; i < nb; ++i)
      if (td.bags[i].test(v)) holding.push_back(i);
    if (holding.empty()) return fail("vertex " + std::to_string(v) + " in no bag");
    std::vector<char> in(nb, 0), seen(nb, 0);
    for (int i : holding) in[i] = 1;
    std::vector<int> st{holding[0]};
    seen[holding[0]] = 1;
    std::size_t cnt = 1;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int w : tadj[u])
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          ++cnt;
          st.push_back(w);
        }
    }
    if (cnt != holding.size()) return fail("bags holding vertex " + std::to_string(v) + " are not connected");
  }
  for (auto [u, v] : g.edges()) {
    bool found = false;
    for (const auto& bag : td.bags)
      if (bag.test(u) && bag.test(v)) {
        found = true;
        break;
      }
    if (!found) return fail("edge " + std::to_string(u) + "-" + std::to_string(v) + " in no bag");
  }
  out.valid = true;
  return out;
}

TreeDecomposition min_degree_decomposition(const Graph& g) {
  const int n = g.n();
  TreeDecomposition td;
  td.tape_of.assign(n, -1);
  if (n == 0) return td;
  std::vector<VertexSet> nb(n, VertexSet(n));
  for (int v = 0; v < n; ++v) nb[v] = g.open_neighborhood(v);
  std::vector<char> gone(n, 0);
  std::vector<int> order, pos(n);
  std::vector<VertexSet> later(n, VertexSet(n));
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!gone[v] && (best < 0 || nb[v].count() < nb[best].count())) best = v;
    pos[best] = step;
    order.push_back(best);
    later[best] = nb[best];
    auto members = nb[best].members();
    for (int a : members) {
      nb[a] |= nb[best];
      nb[a].reset(a);
      nb[a].reset(best);
    }
    gone[best] = 1;
    for (int a = 0; a < n; ++a) nb[a].reset(best);
  }
  // Bag i belongs to order[i].
  for (int i = 0; i < n; ++i) {
    VertexSet bag = later[order[i]];
    bag.set(order[i]);
    td.bags.push_back(bag);
  }
  int prev_root = -1;
  for (int i = 0; i < n; ++i) {
    int parent = -1;
    for (int u : later[order[i]].members())
      if (parent < 0 || pos[u] < parent) parent = pos[u];
    if (parent >= 0) {
      td.tree.emplace_back(i, parent);
    } else {
      if (prev_root >= 0) td.tree.emplace_back(prev_root, i);
      prev_root = i;
    }
  }
  return td;
}

}  // namespace reconf
