#pragma once

#include "monogamy/behavior.hpp"
#include "monogamy/scenario.hpp"
#include "monogamy/simplex.hpp"

#include <optional>
#include <vector>

namespace monogamy {

/// Sum over terms of the best single-term value, in the expression's own
/// sense (a MINIMIZE expression gets the algebraic minimum).
Rational algebraic_max(const Expression& e);

struct ClassicalOptions {
  /// Maximum number of deterministic assignments to enumerate.
  unsigned long long budget = 1ULL << 24;
  unsigned threads = 1;
};

/// Number of deterministic assignments classical_max would enumerate: the
/// product of outcome counts over observables used by some term.
unsigned long long classical_assignment_count(const Expression& e);

/// Exact optimum over deterministic assignments (maximum, or minimum for
/// MINIMIZE). The witness is the first optimal assignment in row-major
/// order over the used observables; unused observables are set to 0.
BoundResult classical_max(const Expression& e, const ClassicalOptions& options = {});

/// Constraint system of the no-disturbance polytope: one variable per
/// (maximal context, joint outcome), normalisation per context and equal
/// marginals on every context overlap.
struct NdPolytope {
  ScenarioPtr scenario;
  std::vector<VertexSet> contexts;
  /// First LP variable of each context's table.
  std::vector<std::size_t> offsets;
  LinearProgram lp;
  std::size_t normalization_rows = 0;
  std::size_t marginal_rows = 0;
};

NdPolytope nd_polytope(ScenarioPtr s);

/// LP objective for the MAXIMIZE form of `e` over `polytope`.
std::vector<Rational> nd_objective(const Expression& e, const NdPolytope& polytope);

struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  /// Optimum in the expression's sense.
  Rational optimum;
  std::optional<Behavior> witness;
  SimplexStats stats;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

/// Exact optimum of `e` over the no-disturbance polytope, with a primal
/// witness that is re-checked before returning.
LPSolution nd_max(const Expression& e);
LPSolution nd_max(const Expression& e, const NdPolytope& polytope);

/// Optimum of an arbitrary objective vector over a polytope (used to draw
/// random vertices); returns the witness behavior.
Behavior nd_vertex(const NdPolytope& polytope, const std::vector<Rational>& objective);

}  // namespace monogamy
