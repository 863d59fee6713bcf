#pragma once

#include "monogamy/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace monogamy {

/// max objective·x  subject to  rows·x = rhs,  x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, Rational>> entries;
    Rational rhs;
  };

  std::size_t num_variables = 0;
  std::vector<Rational> objective;
  std::vector<Row> equalities;
  /// Optional starting pivots (row, column) applied before phase 1. They are
  /// kept only if the resulting basic solution is nonnegative.
  std::vector<std::pair<std::size_t, std::size_t>> crash;
};

enum class LPStatus { optimal, infeasible, unbounded };

std::string to_string(LPStatus status);

struct SimplexStats {
  std::size_t phase1_pivots = 0;
  std::size_t phase2_pivots = 0;
  std::size_t bland_pivots = 0;
  /// Equality rows found linearly dependent and dropped after phase 1.
  std::size_t redundant_rows = 0;
};

struct SimplexResult {
  LPStatus status = LPStatus::infeasible;
  Rational optimum;
  /// Primal optimum (empty unless status == optimal).
  std::vector<Rational> x;
  SimplexStats stats;
};

/// Two-phase exact rational simplex. Pricing is steepest edge (column norms
/// in floating point); after a long run of degenerate pivots it switches to
/// Bland's rule until the objective moves again, which rules out cycling.
SimplexResult solve_exact(const LinearProgram& lp);

}  // namespace monogamy
