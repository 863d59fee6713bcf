#pragma once

#include "monogamy/graph.hpp"
#include "monogamy/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace monogamy {

struct Observable {
  std::string id;
  std::string label;
  /// Number of outcomes d; outcomes are indexed 0..d-1. Dichotomic +1/-1
  /// observables use index a with value (-1)^a.
  int outcomes = 2;
  std::optional<std::string> party;
};

/// Full deterministic assignment: one outcome index per scenario observable.
using Assignment = std::vector<int>;

/// Observables plus their commutation (compatibility) graph. Immutable once built.
class Scenario {
 public:
  Scenario(std::vector<Observable> observables, const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t size() const { return observables_.size(); }
  const std::vector<Observable>& observables() const { return observables_; }
  const Observable& observable(std::size_t i) const { return observables_.at(i); }
  int outcomes(std::size_t i) const { return observables_.at(i).outcomes; }
  const UndirectedGraph& graph() const { return graph_; }

  std::optional<std::size_t> find(std::string_view id) const { return graph_.find(id); }
  /// Throws InputError for unknown ids.
  std::size_t index_of(std::string_view id) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& ids) const;
  std::vector<std::string> ids_of(std::span<const std::size_t> indices) const;

  bool adjacent(std::size_t a, std::size_t b) const { return graph_.adjacent(a, b); }
  bool is_clique(std::span<const std::size_t> vertices) const { return graph_.is_clique(vertices); }
  std::vector<std::pair<std::string, std::string>> edge_ids() const;

  /// Product of outcome counts over `vertices` (1 for the empty set).
  std::size_t table_size(std::span<const std::size_t> vertices) const;

  friend bool operator==(const Scenario& a, const Scenario& b);

 private:
  std::vector<Observable> observables_;
  UndirectedGraph graph_;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;

/// Row-major index of a joint outcome over `vertices`, first vertex varying slowest.
std::size_t tuple_index(const Scenario& s, std::span<const std::size_t> vertices, const Assignment& full);

/// Inverse of the row-major layout: outcome indices for entry `index`.
std::vector<int> tuple_outcomes(const Scenario& s, std::span<const std::size_t> vertices, std::size_t index);

struct ExpressionTerm {
  /// Ordered observable indices; must be a clique of the scenario.
  std::vector<std::size_t> support;
  Rational coefficient{1};
  /// One value per joint outcome of `support`, row-major.
  std::vector<Rational> values;

  Rational value_at(const Scenario& s, const Assignment& a) const;
  /// coefficient * value, over the row-major layout.
  std::vector<Rational> weighted_values() const;
};

enum class Sense { maximize, minimize };

/// Rational-linear functional over behaviours, written as terms on cliques.
class Expression {
 public:
  Expression(ScenarioPtr scenario, std::string name, Sense sense, std::vector<ExpressionTerm> terms);

  const Scenario& scenario() const { return *scenario_; }
  const ScenarioPtr& scenario_ptr() const { return scenario_; }
  const std::string& name() const { return name_; }
  Sense sense() const { return sense_; }
  const std::vector<ExpressionTerm>& terms() const { return terms_; }

  /// Value on a deterministic assignment.
  Rational evaluate(const Assignment& a) const;

  /// MAXIMIZE form: a MINIMIZE expression has every value negated.
  Expression normalized() const;
  /// Same terms bound to another scenario with the same observables.
  Expression rebind(ScenarioPtr scenario) const;
  Expression renamed(std::string name) const;
  /// Terms sharing an identical ordered support are summed into one term.
  Expression merged() const;
  /// Observables appearing in at least one term, ascending.
  VertexSet used_observables() const;

 private:
  ScenarioPtr scenario_;
  std::string name_;
  Sense sense_;
  std::vector<ExpressionTerm> terms_;
};

/// Exact bound with an optional deterministic witness.
struct BoundResult {
  Rational value;
  std::optional<Assignment> witness;
};

/// Observables of distinct parties commute, observables of the same party do not.
ScenarioPtr build_bell_scenario(const std::vector<std::pair<std::string, std::vector<Observable>>>& parties);

/// Adds every pair inside each clique as an edge.
ScenarioPtr add_contexts(const Scenario& s, const std::vector<std::vector<std::string>>& cliques);

/// Weighted concatenation of terms; zero weights drop the expression. Mixed
/// senses are normalised to MAXIMIZE first.
Expression combine(const std::vector<Expression>& exprs, const std::vector<Rational>& weights, std::string name = {});

/// Keeps exactly the terms whose support lies inside `vertices`.
Expression reduce_to(const Expression& e, const VertexSet& vertices);

// Term builders for the common correlator families.

/// <X1 X2 ... Xk> for dichotomic observables: value (-1)^(a1+...+ak).
ExpressionTerm correlator(const Scenario& s, const std::vector<std::string>& ids, Rational coefficient = 1);

/// <[X - Y + offset]>: the residue modulo d of the outcome difference.
ExpressionTerm modular_difference(const Scenario& s, const std::string& x, const std::string& y, int offset,
                                  Rational coefficient = 1);

}  // namespace monogamy
