#include "monogamy/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace monogamy {

UndirectedGraph::UndirectedGraph(std::vector<std::string> ids)
    : ids_(std::move(ids)), adj_(ids_.size(), std::vector<char>(ids_.size(), 0)), nbrs_(ids_.size()) {
  std::set<std::string_view> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) throw InputError("duplicate vertex id " + id);
  }
}

UndirectedGraph UndirectedGraph::with_order(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return UndirectedGraph(std::move(ids));
}

std::optional<std::size_t> UndirectedGraph::find(std::string_view id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return i;
  }
  return std::nullopt;
}

void UndirectedGraph::add_edge(std::size_t u, std::size_t v) {
  if (u >= order() || v >= order()) throw InputError("edge endpoint out of range");
  if (u == v) throw InputError("self-loop on vertex " + ids_[u]);
  if (adj_[u][v]) return;
  adj_[u][v] = adj_[v][u] = 1;
  nbrs_[u].insert(std::lower_bound(nbrs_[u].begin(), nbrs_[u].end(), v), v);
  nbrs_[v].insert(std::lower_bound(nbrs_[v].begin(), nbrs_[v].end(), u), u);
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& n : nbrs_) twice += n.size();
  return twice / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> UndirectedGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < order(); ++u) {
    for (std::size_t v : nbrs_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool UndirectedGraph::is_clique(std::span<const std::size_t> vertices) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j] || !adjacent(vertices[i], vertices[j])) return false;
    }
  }
  return true;
}

VertexSet make_vertex_set(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

EliminationOrdering mcs_ordering(const UndirectedGraph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> weight(n, 0);
  std::vector<char> visited(n, 0);
  std::vector<std::size_t> visit;
  visit.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!visited[v] && (best == n || weight[v] > weight[best])) best = v;
    }
    visited[best] = 1;
    visit.push_back(best);
    for (std::size_t u : g.neighbors(best)) {
      if (!visited[u]) ++weight[u];
    }
  }
  EliminationOrdering result;
  result.order.assign(visit.rbegin(), visit.rend());
  result.perfect = is_perfect_elimination_ordering(g, result.order);
  return result;
}

bool is_perfect_elimination_ordering(const UndirectedGraph& g, std::span<const std::size_t> order) {
  const std::size_t n = g.order();
  if (order.size() != n) return false;
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || position[order[i]] != n) return false;
    position[order[i]] = i;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> later;
    for (std::size_t u : g.neighbors(v)) {
      if (position[u] > position[v]) later.push_back(u);
    }
    if (!g.is_clique(later)) return false;
  }
  return true;
}

bool is_chordal(const UndirectedGraph& g) { return mcs_ordering(g).perfect; }

namespace {

// Shortest path from `from` to `to` avoiding `blocked`; empty if none.
std::vector<std::size_t> shortest_path(const UndirectedGraph& g, std::size_t from, std::size_t to,
                                       const std::vector<char>& blocked) {
  const std::size_t n = g.order();
  std::vector<std::size_t> parent(n, n);
  std::queue<std::size_t> q;
  parent[from] = from;
  q.push(from);
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    if (v == to) break;
    for (std::size_t u : g.neighbors(v)) {
      if (parent[u] == n && !blocked[u]) {
        parent[u] = v;
        q.push(u);
      }
    }
  }
  if (parent[to] == n) return {};
  std::vector<std::size_t> path;
  for (std::size_t v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<std::vector<std::size_t>> chordless_cycle(const UndirectedGraph& g) {
  if (is_chordal(g)) return std::nullopt;
  const std::size_t n = g.order();
  // Any chordless cycle through v passes through two non-adjacent neighbours
  // u, w of v and then along a shortest u-w path avoiding the rest of N[v].
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nv = g.neighbors(v);
    for (std::size_t i = 0; i < nv.size(); ++i) {
      for (std::size_t j = i + 1; j < nv.size(); ++j) {
        std::size_t u = nv[i], w = nv[j];
        if (g.adjacent(u, w)) continue;
        std::vector<char> blocked(n, 0);
        blocked[v] = 1;
        for (std::size_t x : nv) {
          if (x != u && x != w) blocked[x] = 1;
        }
        auto path = shortest_path(g, u, w, blocked);
        if (path.empty()) continue;
        std::vector<std::size_t> cycle{v};
        cycle.insert(cycle.end(), path.begin(), path.end());
        return cycle;
      }
    }
  }
  return std::nullopt;  // unreachable for a non-chordal graph
}

namespace {

void bron_kerbosch(const UndirectedGraph& g, VertexSet& r, VertexSet p, VertexSet x, std::vector<VertexSet>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(make_vertex_set(r));
    return;
  }
  // Pivot on the vertex of P ∪ X with the most neighbours in P.
  std::size_t pivot = 0;
  std::size_t best = 0;
  bool have = false;
  for (const VertexSet* s : {&p, &x}) {
    for (std::size_t u : *s) {
      std::size_t c = 0;
      for (std::size_t v : p) c += g.adjacent(u, v);
      if (!have || c > best) {
        pivot = u;
        best = c;
        have = true;
      }
    }
  }
  VertexSet candidates;
  for (std::size_t v : p) {
    if (!g.adjacent(pivot, v)) candidates.push_back(v);
  }
  for (std::size_t v : candidates) {
    const auto& nv = g.neighbors(v);
    r.push_back(v);
    bron_kerbosch(g, r, set_intersection(p, nv), set_intersection(x, nv), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

std::vector<VertexSet> maximal_cliques(const UndirectedGraph& g) {
  const std::size_t n = g.order();
  std::vector<VertexSet> cliques;
  EliminationOrdering peo = mcs_ordering(g);
  if (peo.perfect) {
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[peo.order[i]] = i;
    std::vector<VertexSet> candidates;
    for (std::size_t v = 0; v < n; ++v) {
      VertexSet c{v};
      for (std::size_t u : g.neighbors(v)) {
        if (position[u] > position[v]) c.push_back(u);
      }
      candidates.push_back(make_vertex_set(std::move(c)));
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
        if (i == j) continue;
        const auto& a = candidates[i];
        const auto& b = candidates[j];
        if (is_subset(a, b) && (a.size() < b.size() || j < i)) dominated = true;
      }
      if (!dominated) cliques.push_back(candidates[i]);
    }
  } else {
    VertexSet r;
    VertexSet all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    bron_kerbosch(g, r, all, {}, cliques);
  }
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

bool separates(const UndirectedGraph& g, const VertexSet& separator, const VertexSet& from, const VertexSet& to) {
  const std::size_t n = g.order();
  std::vector<char> blocked(n, 0);
  for (std::size_t v : separator) blocked[v] = 1;
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> q;
  for (std::size_t v : from) {
    if (!blocked[v] && !seen[v]) {
      seen[v] = 1;
      q.push(v);
    }
  }
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (std::size_t u : g.neighbors(v)) {
      if (!blocked[u] && !seen[u]) {
        seen[u] = 1;
        q.push(u);
      }
    }
  }
  for (std::size_t v : to) {
    if (!blocked[v] && seen[v]) return false;
  }
  return true;
}

std::vector<VertexSet> connected_components(const UndirectedGraph& g) {
  const std::size_t n = g.order();
  std::vector<char> seen(n, 0);
  std::vector<VertexSet> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    VertexSet comp;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      comp.push_back(v);
      for (std::size_t u : g.neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          q.push(u);
        }
      }
    }
    out.push_back(make_vertex_set(std::move(comp)));
  }
  return out;
}

CliqueGraph reduced_clique_graph(const UndirectedGraph& g) {
  if (!is_chordal(g)) throw NotChordal("reduced clique graph requires a chordal graph");
  CliqueGraph out;
  out.cliques = maximal_cliques(g);
  const auto& c = out.cliques;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      VertexSet s = set_intersection(c[i], c[j]);
      if (s.empty()) continue;
      if (separates(g, s, set_difference(c[i], s), set_difference(c[j], s))) {
        out.edges.push_back({i, j, std::move(s)});
      }
    }
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

CliqueTree clique_tree(const UndirectedGraph& g) {
  CliqueGraph h = reduced_clique_graph(g);
  std::vector<std::size_t> idx(h.edges.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    const auto& ex = h.edges[x];
    const auto& ey = h.edges[y];
    if (ex.label.size() != ey.label.size()) return ex.label.size() > ey.label.size();
    return std::tie(ex.a, ex.b) < std::tie(ey.a, ey.b);
  });
  CliqueTree tree;
  tree.nodes = h.cliques;
  DisjointSets dsu(h.cliques.size());
  for (std::size_t k : idx) {
    if (dsu.unite(h.edges[k].a, h.edges[k].b)) tree.edges.push_back(h.edges[k]);
  }
  return tree;
}

bool is_valid_clique_tree(const UndirectedGraph& g, const CliqueTree& tree) {
  if (tree.nodes != maximal_cliques(g)) return false;
  const std::size_t k = tree.nodes.size();
  DisjointSets dsu(k);
  for (const auto& e : tree.edges) {
    if (e.a >= k || e.b >= k) return false;
    if (e.label != set_intersection(tree.nodes[e.a], tree.nodes[e.b]) || e.label.empty()) return false;
    if (!dsu.unite(e.a, e.b)) return false;
  }
  if (tree.edges.size() + connected_components(g).size() != k) return false;
  for (std::size_t v = 0; v < g.order(); ++v) {
    std::vector<char> holds(k, 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < k; ++i) {
      holds[i] = std::binary_search(tree.nodes[i].begin(), tree.nodes[i].end(), v);
      count += holds[i];
    }
    std::size_t internal = 0;
    for (const auto& e : tree.edges) internal += holds[e.a] && holds[e.b];
    if (count == 0 || internal + 1 != count) return false;
  }
  return true;
}

UndirectedGraph induced_subgraph(const UndirectedGraph& g, std::span<const std::size_t> vertices) {
  VertexSet keep = make_vertex_set({vertices.begin(), vertices.end()});
  for (std::size_t v : keep) {
    if (v >= g.order()) throw InputError("induced_subgraph: unknown vertex index " + std::to_string(v));
  }
  std::vector<std::string> ids;
  for (std::size_t v : keep) ids.push_back(g.id(v));
  UndirectedGraph sub(std::move(ids));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = i + 1; j < keep.size(); ++j) {
      if (g.adjacent(keep[i], keep[j])) sub.add_edge(i, j);
    }
  }
  return sub;
}

}  // namespace monogamy
