#pragma once

// Shared builders and random generators for the unit and acceptance tests.

#include "monogamy/behavior.hpp"
#include "monogamy/bounds.hpp"
#include "monogamy/graph.hpp"
#include "monogamy/scenario.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testing {

using namespace monogamy;

inline std::vector<Observable> party(const std::string& p, int count, int outcomes = 2) {
  std::vector<Observable> v;
  for (int i = 1; i <= count; ++i) v.push_back(Observable{p + std::to_string(i), {}, outcomes, p});
  return v;
}

inline ScenarioPtr scenario_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                       const std::vector<int>& outcomes = {}) {
  std::vector<Observable> obs;
  for (std::size_t i = 0; i < n; ++i) obs.push_back(Observable{"X" + std::to_string(i), {}, outcomes.empty() ? 2 : outcomes[i], {}});
  std::vector<std::pair<std::string, std::string>> e;
  for (auto [a, b] : edges) e.emplace_back(obs[a].id, obs[b].id);
  return std::make_shared<const Scenario>(std::move(obs), e);
}

inline UndirectedGraph graph_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  UndirectedGraph g = UndirectedGraph::with_order(n);
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

inline UndirectedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  UndirectedGraph g = UndirectedGraph::with_order(n);
  std::bernoulli_distribution coin(p);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng)) g.add_edge(a, b);
  return g;
}

/// Definitional check: no induced cycle of length >= 4. Exponential; fine
/// up to ~10 vertices.
inline bool has_induced_long_cycle(const UndirectedGraph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> path;
  std::vector<char> used(n, 0);
  // Paths start at their smallest vertex; each interior vertex may only touch
  // its path neighbours, and the closing vertex must see the start.
  std::function<bool()> extend = [&]() -> bool {
    const std::size_t last = path.back();
    for (std::size_t v : g.neighbors(last)) {
      if (used[v] || v < path.front()) continue;
      bool chordless = true;
      for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        if (g.adjacent(v, path[k])) {
          chordless = false;
          break;
        }
      }
      if (!chordless) continue;
      const bool closes = path.size() > 1 && g.adjacent(v, path.front());
      if (closes) {
        if (path.size() >= 3) return true;
        continue;
      }
      used[v] = 1;
      path.push_back(v);
      if (extend()) return true;
      path.pop_back();
      used[v] = 0;
    }
    return false;
  };
  for (std::size_t s = 0; s < n; ++s) {
    path = {s};
    std::fill(used.begin(), used.end(), 0);
    used[s] = 1;
    if (extend()) return true;
  }
  return false;
}

/// Random chordal graph: each new vertex joins a random clique of the
/// graph built so far (a random subset of an existing maximal clique).
inline std::vector<std::pair<std::size_t, std::size_t>> random_chordal_edges(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> cliques{{0}};
  for (std::size_t v = 1; v < n; ++v) {
    const auto& base = cliques[std::uniform_int_distribution<std::size_t>(0, cliques.size() - 1)(rng)];
    std::vector<std::size_t> joined;
    std::bernoulli_distribution coin(0.6);
    for (std::size_t u : base)
      if (coin(rng)) joined.push_back(u);
    for (std::size_t u : joined) edges.emplace_back(u, v);
    joined.push_back(v);
    cliques.push_back(joined);
  }
  return edges;
}

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi, int den) {
  return Rational(std::uniform_int_distribution<int>(lo, hi)(rng), std::uniform_int_distribution<int>(1, den)(rng));
}

/// Random expression with one term per maximal clique plus a few sub-clique terms.
inline Expression random_expression(std::mt19937_64& rng, const ScenarioPtr& s, const std::string& name = "R") {
  std::vector<ExpressionTerm> terms;
  auto add = [&](VertexSet support) {
    ExpressionTerm t;
    t.support = support;
    t.coefficient = random_rational(rng, -3, 3, 2);
    for (std::size_t k = 0; k < s->table_size(support); ++k) t.values.push_back(random_rational(rng, -4, 4, 3));
    terms.push_back(std::move(t));
  };
  for (const auto& c : maximal_cliques(s->graph())) {
    add(c);
    if (c.size() > 1) add({c.front()});
  }
  return Expression(s, name, Sense::maximize, std::move(terms));
}

/// Random full joint distribution with small integer weights.
inline JointDistribution random_joint(std::mt19937_64& rng, const ScenarioPtr& s, int zero_percent = 20) {
  std::size_t total = 1;
  for (std::size_t v = 0; v < s->size(); ++v) total *= static_cast<std::size_t>(s->outcomes(v));
  std::vector<Rational> w(total);
  Rational sum = 0;
  std::uniform_int_distribution<int> pct(0, 99), weight(1, 9);
  for (auto& x : w) {
    x = pct(rng) < zero_percent ? 0 : weight(rng);
    sum += x;
  }
  if (sum == 0) {
    w[0] = 1;
    sum = 1;
  }
  for (auto& x : w) x /= sum;
  return JointDistribution{s, std::move(w)};
}

}  // namespace testing
