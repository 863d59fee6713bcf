#include "monogamy/simplex.hpp"

#include <algorithm>
#include <optional>

namespace monogamy {

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kDegenerateRunBeforeBland = 200;

class Tableau {
 public:
  Tableau(const LinearProgram& lp) : n_(lp.num_variables) {
    const std::size_t m = lp.equalities.size();
    rows_.assign(m, std::vector<Rational>(n_));
    rhs_.resize(m);
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp.equalities[i];
      bool flip = row.rhs < 0;
      for (const auto& [j, v] : row.entries) {
        if (j >= n_) throw InputError("LP row references an unknown variable");
        rows_[i][j] += flip ? Rational(-v) : v;
      }
      rhs_[i] = flip ? Rational(-row.rhs) : row.rhs;
      basis_[i] = n_ + i;  // artificial
    }
  }

  // Applies the crash pivots; false if they leave a structural basic
  // variable negative (the tableau must then be rebuilt).
  bool crash(const std::vector<std::pair<std::size_t, std::size_t>>& pivots) {
    cost_.assign(n_, Rational(0));
    for (auto [row, col] : pivots) {
      if (row >= rows_.size() || col >= n_ || rows_[row][col] == 0 || !is_artificial(basis_[row])) return false;
      pivot(row, col);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rhs_[i] >= 0) continue;
      if (!is_artificial(basis_[i])) return false;
      for (auto& v : rows_[i]) {
        if (v != 0) v = -v;
      }
      rhs_[i] = -rhs_[i];
    }
    return true;
  }

  SimplexResult solve(const std::vector<Rational>& objective) {
    SimplexResult result;
    // Phase 1: maximise -(sum of artificials).
    cost_.assign(n_, Rational(0));
    value_ = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[i][j] != 0) cost_[j] += rows_[i][j];
      }
      value_ -= rhs_[i];
    }
    if (!optimize(result.stats.phase1_pivots, result.stats.bland_pivots)) {
      throw Error("phase 1 reported unbounded; this cannot happen");
    }
    if (value_ != 0) {
      result.status = LPStatus::infeasible;
      return result;
    }
    result.stats.redundant_rows = drive_out_artificials();

    // Phase 2.
    std::vector<Rational> c = objective;
    c.resize(n_);
    cost_ = c;
    value_ = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[i][j] != 0) cost_[j] -= cb * rows_[i][j];
      }
      value_ += cb * rhs_[i];
    }
    if (!optimize(result.stats.phase2_pivots, result.stats.bland_pivots)) {
      result.status = LPStatus::unbounded;
      return result;
    }
    result.status = LPStatus::optimal;
    result.optimum = value_;
    result.x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) result.x[basis_[i]] = rhs_[i];
    return result;
  }

 private:
  bool is_artificial(std::size_t var) const { return var >= n_; }

  // Bland order: artificials first, then structural variables by index.
  bool bland_less(std::size_t a, std::size_t b) const {
    bool aa = is_artificial(a), ab = is_artificial(b);
    if (aa != ab) return aa;
    return a < b;
  }

  std::optional<std::size_t> first_improving() const {
    for (std::size_t j = 0; j < n_; ++j) {
      if (cost_[j] > 0) return j;
    }
    return std::nullopt;
  }

  // Largest reduced cost per unit length of the column, measured in floating
  // point; the choice only steers the path, every pivot stays exact.
  std::optional<std::size_t> steepest_edge() const {
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < n_; ++j) {
      if (cost_[j] > 0) candidates.push_back(j);
    }
    if (candidates.empty()) return std::nullopt;
    std::vector<double> norm(candidates.size(), 1.0);
    for (const auto& row : rows_) {
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        const Rational& a = row[candidates[k]];
        if (a == 0) continue;
        const double v = a.convert_to<double>();
        norm[k] += v * v;
      }
    }
    std::size_t best = 0;
    double best_score = -1;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const double c = cost_[candidates[k]].convert_to<double>();
      const double score = c * c / norm[k];
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
    return candidates[best];
  }

  // Returns false when unbounded.
  bool optimize(std::size_t& pivots, std::size_t& bland_pivots) {
    std::size_t degenerate_run = 0;
    for (;;) {
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      const std::optional<std::size_t> enter = bland ? first_improving() : steepest_edge();
      if (!enter) return true;
      const std::size_t e = *enter;

      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rational& a = rows_[i][e];
        if (a <= 0) continue;
        Rational ratio = rhs_[i] / a;
        if (!leave || ratio < best || (ratio == best && bland_less(basis_[i], basis_[*leave]))) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      degenerate_run = best == 0 ? degenerate_run + 1 : 0;
      if (bland) ++bland_pivots;
      pivot(*leave, e);
      ++pivots;
    }
  }

  void pivot(std::size_t p, std::size_t e) {
    auto& prow = rows_[p];
    const Rational inv = 1 / prow[e];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < n_; ++j) {
      if (prow[j] != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    }
    rhs_[p] *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == p) continue;
      auto& row = rows_[i];
      if (row[e] == 0) continue;
      const Rational f = row[e];
      for (std::size_t j : nz) row[j] -= f * prow[j];
      if (rhs_[p] != 0) rhs_[i] -= f * rhs_[p];
    }
    if (cost_[e] != 0) {
      const Rational f = cost_[e];
      for (std::size_t j : nz) cost_[j] -= f * prow[j];
      value_ += f * rhs_[p];
    }
    basis_[p] = e;
  }

  // Pivots zero-level artificials out of the basis; rows where that is
  // impossible are linearly dependent and get removed.
  std::size_t drive_out_artificials() {
    std::size_t removed = 0;
    for (std::size_t i = 0; i < rows_.size();) {
      if (!is_artificial(basis_[i])) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < n_ && !col; ++j) {
        if (rows_[i][j] != 0) col = j;
      }
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        ++removed;
      }
    }
    return removed;
  }

  std::size_t n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> cost_;
  Rational value_;
};

}  // namespace

SimplexResult solve_exact(const LinearProgram& lp) {
  if (lp.objective.size() > lp.num_variables) throw InputError("LP objective longer than the variable count");
  if (!lp.crash.empty()) {
    Tableau crashed(lp);
    if (crashed.crash(lp.crash)) return crashed.solve(lp.objective);
  }
  Tableau tableau(lp);
  return tableau.solve(lp.objective);
}

}  // namespace monogamy
