#pragma once

#include "monogamy/graph.hpp"
#include "monogamy/scenario.hpp"

#include <string>
#include <vector>

namespace monogamy {

/// Probability tables on every maximal context of a scenario (a "box").
/// Tables use the row-major layout of the context, first observable slowest.
class Behavior {
 public:
  /// `tables` is indexed like maximal_cliques(scenario->graph()). Only the
  /// shape is validated here; normalisation and positivity are reported by
  /// check_no_disturbance.
  Behavior(ScenarioPtr scenario, std::vector<std::vector<Rational>> tables);

  const Scenario& scenario() const { return *scenario_; }
  const ScenarioPtr& scenario_ptr() const { return scenario_; }
  const std::vector<VertexSet>& contexts() const { return contexts_; }
  const std::vector<std::vector<Rational>>& tables() const { return tables_; }
  const std::vector<Rational>& table(std::size_t context) const { return tables_.at(context); }

  /// First context containing `vertices`, if any.
  std::optional<std::size_t> containing_context(std::span<const std::size_t> vertices) const;

 private:
  ScenarioPtr scenario_;
  std::vector<VertexSet> contexts_;
  std::vector<std::vector<Rational>> tables_;
};

/// Distribution over the joint outcomes of all observables of a scenario.
struct JointDistribution {
  ScenarioPtr scenario;
  std::vector<Rational> probabilities;

  /// Marginal over `vertices` in the given order.
  std::vector<Rational> marginal(std::span<const std::size_t> vertices) const;
};

struct TableDefect {
  std::size_t context;
  std::string message;
};

struct DisturbanceViolation {
  std::size_t first;
  std::size_t second;
  VertexSet shared;
};

struct NoDisturbanceReport {
  /// Malformed tables (negative entries, wrong sums).
  std::vector<TableDefect> defects;
  /// Context pairs whose shared marginals differ.
  std::vector<DisturbanceViolation> violations;

  bool well_formed() const { return defects.empty(); }
  bool no_disturbance() const { return defects.empty() && violations.empty(); }
};

/// A probability table over a context written in an arbitrary observable order.
struct ContextTable {
  std::vector<std::string> observables;
  std::vector<Rational> probabilities;
};

/// Builds a behavior from one table per maximal context; tables may list the
/// context's observables in any order.
Behavior behavior_from_tables(ScenarioPtr s, const std::vector<ContextTable>& tables);

/// Tables of `b` in the scenario's own context order.
std::vector<ContextTable> context_tables(const Behavior& b);

NoDisturbanceReport check_no_disturbance(const Behavior& b);
bool is_no_disturbance(const Behavior& b);

/// Marginal of the table on `context` over `subset` (ids in subset order).
std::vector<Rational> marginal(const Behavior& b, std::size_t context, std::span<const std::size_t> subset);

/// Exact value; each term is read from the first context containing its support.
Rational evaluate(const Expression& e, const Behavior& b);

/// Value of one term read from a specific context.
Rational evaluate_term_in(const ExpressionTerm& t, const Behavior& b, std::size_t context);

/// Point mass on the assigned outcome of every context.
Behavior deterministic_behavior(ScenarioPtr s, const Assignment& assignment);

/// Joint distribution built from clique marginals along a clique tree:
/// product of clique tables over product of separator marginals, with 0/0 = 0.
JointDistribution jpd_from_clique_tree(const Behavior& b, const CliqueTree& t);
JointDistribution jpd_from_clique_tree(const Behavior& b);

/// Context tables obtained by marginalising a joint distribution.
Behavior behavior_from_joint(const JointDistribution& p);

/// Mixture sum_k w_k b_k of behaviours on the same scenario.
Behavior mix(const std::vector<Behavior>& boxes, const std::vector<Rational>& weights);

}  // namespace monogamy
