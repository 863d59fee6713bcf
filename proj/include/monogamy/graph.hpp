#pragma once

#include "monogamy/errors.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace monogamy {

/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<std::size_t>;

/// Simple undirected graph on vertices 0..n-1, each carrying a display id.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::vector<std::string> ids);
  /// Graph with ids "0".."n-1".
  static UndirectedGraph with_order(std::size_t n);

  std::size_t order() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t v) const { return ids_.at(v); }
  std::optional<std::size_t> find(std::string_view id) const;

  /// Adds {u,v}; adding an existing edge is a no-op. Self-loops are rejected.
  void add_edge(std::size_t u, std::size_t v);
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u][v] != 0; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return nbrs_[v]; }
  std::size_t edge_count() const;
  /// Edges as (u,v) with u < v in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool is_clique(std::span<const std::size_t> vertices) const;

  friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
    return a.ids_ == b.ids_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<char>> adj_;
  std::vector<std::vector<std::size_t>> nbrs_;
};

struct EliminationOrdering {
  /// Vertices in elimination order: each vertex is removed before the ones after it.
  std::vector<std::size_t> order;
  /// Every vertex's later neighbours form a clique.
  bool perfect = false;
};

/// A maximal-clique graph edge; `label` is the intersection of the two cliques.
struct LabeledEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  VertexSet label;
};

struct CliqueGraph {
  std::vector<VertexSet> cliques;
  std::vector<LabeledEdge> edges;
};

/// Maximal clique tree (a forest when the graph is disconnected).
struct CliqueTree {
  std::vector<VertexSet> nodes;
  std::vector<LabeledEdge> edges;
};

/// Maximum cardinality search. The reverse of the visit order is returned as
/// the elimination ordering; it is perfect exactly when the graph is chordal.
EliminationOrdering mcs_ordering(const UndirectedGraph& g);

bool is_perfect_elimination_ordering(const UndirectedGraph& g, std::span<const std::size_t> order);

bool is_chordal(const UndirectedGraph& g);

/// An induced cycle of length >= 4, in cycle order, or nullopt when chordal.
std::optional<std::vector<std::size_t>> chordless_cycle(const UndirectedGraph& g);

/// Inclusion-maximal cliques, each sorted, the list sorted lexicographically.
/// Isolated vertices are returned as singleton cliques.
std::vector<VertexSet> maximal_cliques(const UndirectedGraph& g);

/// True if removing `separator` leaves no path from any vertex of `from` to any of `to`.
bool separates(const UndirectedGraph& g, const VertexSet& separator, const VertexSet& from, const VertexSet& to);

std::vector<VertexSet> connected_components(const UndirectedGraph& g);

CliqueGraph reduced_clique_graph(const UndirectedGraph& g);

/// Maximum-weight spanning forest of the reduced clique graph, weight = |label|,
/// ties broken by the lexicographically smaller clique index pair.
CliqueTree clique_tree(const UndirectedGraph& g);

/// Checks tree shape, edge labels and the running-intersection property.
bool is_valid_clique_tree(const UndirectedGraph& g, const CliqueTree& tree);

/// Induced subgraph on `vertices` (any order, duplicates ignored); the result
/// lists the kept vertices in ascending original index.
UndirectedGraph induced_subgraph(const UndirectedGraph& g, std::span<const std::size_t> vertices);

VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);
VertexSet make_vertex_set(std::vector<std::size_t> v);

}  // namespace monogamy
