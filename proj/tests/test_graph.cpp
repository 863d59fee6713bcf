#include "helpers.hpp"

#include "monogamy/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace monogamy;
using testing::graph_from_edges;

namespace {

// Chordal example graph: maximal cliques {1,3,5} {3,5,7} {3,6,7,8} {3,4,6,8}
// {2,4,6} {7,9} {6,10}.
UndirectedGraph example_chordal() {
  std::vector<std::string> ids;
  for (int i = 1; i <= 10; ++i) ids.push_back(std::to_string(i));
  UndirectedGraph g(ids);
  const std::vector<std::vector<int>> cliques{{1, 3, 5}, {3, 5, 7}, {3, 6, 7, 8}, {3, 4, 6, 8}, {2, 4, 6}, {7, 9}, {6, 10}};
  for (const auto& c : cliques)
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b) g.add_edge(c[a] - 1, c[b] - 1);
  return g;
}

std::vector<std::vector<std::string>> labels(const UndirectedGraph& g, const std::vector<LabeledEdge>& edges) {
  std::vector<std::vector<std::string>> out;
  for (const auto& e : edges) {
    std::vector<std::string> l;
    for (auto v : e.label) l.push_back(g.id(v));
    std::sort(l.begin(), l.end());
    out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  return out;
}

UndirectedGraph cycle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return graph_from_edges(n, e);
}

}  // namespace

TEST_CASE("graph construction") {
  UndirectedGraph g = UndirectedGraph::with_order(3);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  CHECK(g.edge_count() == 1);
  CHECK(g.adjacent(1, 0));
  CHECK_THROWS_AS(g.add_edge(2, 2), InputError);
  CHECK_THROWS_AS(UndirectedGraph(std::vector<std::string>{"a", "a"}), InputError);
}

TEST_CASE("maximum cardinality search") {
  auto k3 = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  auto o = mcs_ordering(k3);
  CHECK(o.perfect);
  CHECK(o.order.size() == 3);
  CHECK(is_perfect_elimination_ordering(k3, o.order));

  auto c4 = cycle(4);
  CHECK_FALSE(mcs_ordering(c4).perfect);
  // No ordering of C4 is perfect.
  std::vector<std::size_t> perm{0, 1, 2, 3};
  do {
    CHECK_FALSE(is_perfect_elimination_ordering(c4, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto fig = example_chordal();
  auto fo = mcs_ordering(fig);
  CHECK(fo.perfect);
  CHECK(is_perfect_elimination_ordering(fig, fo.order));
}

TEST_CASE("chordality examples") {
  CHECK_FALSE(is_chordal(cycle(5)));
  auto c4_chord = cycle(4);
  c4_chord.add_edge(0, 2);
  CHECK(is_chordal(c4_chord));

  // A1-B1-A2-C2 plus the chord B1-C2 inside the tripartite CHSH scenario.
  auto s = build_bell_scenario({{"A", testing::party("A", 2)}, {"B", testing::party("B", 2)}, {"C", testing::party("C", 2)}});
  auto sub = induced_subgraph(s->graph(), make_vertex_set(s->indices_of({"A1", "A2", "B1", "C2"})));
  CHECK(sub.edge_count() == 5);
  CHECK(is_chordal(sub));
  CHECK(is_chordal(UndirectedGraph::with_order(0)));
  CHECK(is_chordal(UndirectedGraph::with_order(4)));
}

TEST_CASE("chordless cycle witness") {
  auto g = cycle(6);
  g.add_edge(0, 2);
  auto w = chordless_cycle(g);
  REQUIRE(w);
  CHECK(w->size() == 5);
  for (std::size_t i = 0; i < w->size(); ++i) {
    for (std::size_t j = i + 1; j < w->size(); ++j) {
      const bool consecutive = j == i + 1 || (i == 0 && j == w->size() - 1);
      CHECK(g.adjacent((*w)[i], (*w)[j]) == consecutive);
    }
  }
  CHECK_FALSE(chordless_cycle(example_chordal()));
}

TEST_CASE("is_chordal agrees with induced-cycle brute force") {
  std::mt19937_64 rng(2024);
  int disagreements = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const double p = 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0;
    auto g = testing::random_graph(rng, n, p);
    if (is_chordal(g) == testing::has_induced_long_cycle(g)) ++disagreements;
    if (auto w = chordless_cycle(g)) {
      CHECK(w->size() >= 4);
      CHECK(is_chordal(g) == false);
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("maximal cliques") {
  auto k4 = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto c = maximal_cliques(k4);
  REQUIRE(c.size() == 1);
  CHECK(c[0].size() == 4);

  auto c5 = maximal_cliques(cycle(5));
  CHECK(c5.size() == 5);
  for (const auto& e : c5) CHECK(e.size() == 2);

  auto xor3 = build_bell_scenario({{"A", testing::party("A", 3)}, {"B", testing::party("B", 3)}, {"C", testing::party("C", 3)}});
  auto triples = maximal_cliques(xor3->graph());
  CHECK(triples.size() == 27);
  for (const auto& t : triples) {
    REQUIRE(t.size() == 3);
    std::set<std::string> parties;
    for (auto v : t) parties.insert(*xor3->observable(v).party);
    CHECK(parties.size() == 3);
  }

  auto fig = maximal_cliques(example_chordal());
  CHECK(fig.size() == 7);
  CHECK(fig.size() <= 10);
}

TEST_CASE("maximal cliques on random graphs are exact") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto g = testing::random_graph(rng, n, 0.5);
    auto cliques = maximal_cliques(g);
    std::set<VertexSet> seen(cliques.begin(), cliques.end());
    CHECK(seen.size() == cliques.size());
    // Brute force over subsets.
    std::set<VertexSet> expected;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      VertexSet s;
      for (std::size_t v = 0; v < n; ++v)
        if (mask >> v & 1) s.push_back(v);
      if (!g.is_clique(s)) continue;
      bool maximal = true;
      for (std::size_t v = 0; v < n && maximal; ++v) {
        if (mask >> v & 1) continue;
        VertexSet bigger = s;
        bigger.push_back(v);
        std::sort(bigger.begin(), bigger.end());
        if (g.is_clique(bigger)) maximal = false;
      }
      if (maximal) expected.insert(s);
    }
    CHECK(seen == expected);
  }
}

TEST_CASE("reduced clique graph") {
  auto path = graph_from_edges(3, {{0, 1}, {1, 2}});
  auto rcg = reduced_clique_graph(path);
  CHECK(rcg.cliques.size() == 2);
  REQUIRE(rcg.edges.size() == 1);
  CHECK(rcg.edges[0].label == VertexSet{1});

  auto disjoint = graph_from_edges(4, {{0, 1}, {2, 3}});
  CHECK(reduced_clique_graph(disjoint).edges.empty());

  auto fig = example_chordal();
  auto fr = reduced_clique_graph(fig);
  CHECK(fr.cliques.size() == 7);
  // Each label is the intersection of its cliques and separates them.
  for (const auto& e : fr.edges) {
    CHECK(e.label == set_intersection(fr.cliques[e.a], fr.cliques[e.b]));
    CHECK(separates(fig, e.label, set_difference(fr.cliques[e.a], e.label), set_difference(fr.cliques[e.b], e.label)));
  }
  CHECK(fr.edges.size() > 6);
  CHECK_THROWS_AS(reduced_clique_graph(cycle(4)), NotChordal);
}

TEST_CASE("clique tree of the example graph") {
  auto fig = example_chordal();
  auto t = clique_tree(fig);
  CHECK(t.nodes.size() == 7);
  CHECK(t.edges.size() == 6);
  CHECK(is_valid_clique_tree(fig, t));
  const std::vector<std::vector<std::string>> expected{{"3", "5"}, {"3", "6", "8"}, {"3", "7"}, {"4", "6"}, {"6"}, {"7"}};
  CHECK(labels(fig, t.edges) == expected);
}

TEST_CASE("clique tree degenerate cases") {
  auto k3 = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  auto t = clique_tree(k3);
  CHECK(t.nodes.size() == 1);
  CHECK(t.edges.empty());

  auto path = graph_from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  auto pt = clique_tree(path);
  CHECK(pt.nodes.size() == 5);
  CHECK(pt.edges.size() == 4);
  for (const auto& e : pt.edges) CHECK(e.label.size() == 1);
  CHECK(is_valid_clique_tree(path, pt));

  // Disconnected graphs give a forest.
  auto two = graph_from_edges(5, {{0, 1}, {1, 2}, {3, 4}});
  auto ft = clique_tree(two);
  CHECK(ft.nodes.size() == 3);
  CHECK(ft.edges.size() == 1);
  CHECK(is_valid_clique_tree(two, ft));

  CHECK_THROWS_AS(clique_tree(cycle(5)), NotChordal);
}

TEST_CASE("clique trees of random chordal graphs satisfy running intersection") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    auto g = graph_from_edges(n, testing::random_chordal_edges(rng, n));
    REQUIRE(is_chordal(g));
    auto t = clique_tree(g);
    CHECK(is_valid_clique_tree(g, t));
    CHECK(t.nodes.size() <= n);

    // Separator multiset is invariant under relabeling the vertices.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> ids(n);
    for (std::size_t v = 0; v < n; ++v) ids[perm[v]] = g.id(v);
    UndirectedGraph h(ids);
    for (auto [a, b] : g.edges()) h.add_edge(perm[a], perm[b]);
    CHECK(labels(g, t.edges) == labels(h, clique_tree(h).edges));
  }
}

TEST_CASE("induced subgraphs") {
  auto c5 = cycle(5);
  auto p3 = induced_subgraph(c5, VertexSet{0, 1, 2});
  CHECK(p3.order() == 3);
  CHECK(p3.edge_count() == 2);
  CHECK(p3.adjacent(0, 1));
  CHECK_FALSE(p3.adjacent(0, 2));
  CHECK(induced_subgraph(c5, VertexSet{0, 1, 2, 3, 4}) == c5);
  CHECK_THROWS_AS(induced_subgraph(c5, VertexSet{7}), InputError);
}

TEST_CASE("set helpers") {
  CHECK(set_union(VertexSet{1, 3}, VertexSet{2, 3}) == VertexSet{1, 2, 3});
  CHECK(set_difference(VertexSet{1, 2, 3}, VertexSet{2}) == VertexSet{1, 3});
  CHECK(is_subset(VertexSet{1, 3}, VertexSet{1, 2, 3}));
  CHECK(make_vertex_set({4, 1, 4}) == VertexSet{1, 4});
  CHECK(connected_components(graph_from_edges(4, {{0, 1}})).size() == 3);
}
