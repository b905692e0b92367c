#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace freegeo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class ObjectiveSense { Minimize, Maximize };

/// Dense linear program
///
///     min/max  c.x   s.t.  row_lower <= A x <= row_upper,  lower <= x <= upper.
///
/// Single-sided rows carry an infinite bound on the other side; equality
/// rows have equal bounds. Columns default to [0, +inf).
struct LpProblem {
  ObjectiveSense sense = ObjectiveSense::Minimize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> matrix;  // row-major, rows() x cols()
  std::vector<double> row_lower;
  std::vector<double> row_upper;

  explicit LpProblem(std::size_t cols = 0, ObjectiveSense s = ObjectiveSense::Minimize)
      : sense(s), objective(cols, 0.0), lower(cols, 0.0), upper(cols, kInf) {}

  std::size_t cols() const { return objective.size(); }
  std::size_t rows() const { return row_lower.size(); }
  double coeff(std::size_t r, std::size_t c) const { return matrix[r * cols() + c]; }

  using Term = std::pair<std::size_t, double>;

  /// Appends a row; returns its index.
  std::size_t add_row(std::span<const Term> terms, RowSense s, double rhs);
  std::size_t add_range_row(std::span<const Term> terms, double lo, double hi);
  std::size_t add_row(std::initializer_list<Term> terms, RowSense s, double rhs) {
    return add_row(std::span<const Term>(terms.begin(), terms.size()), s, rhs);
  }
  std::size_t add_range_row(std::initializer_list<Term> terms, double lo, double hi) {
    return add_range_row(std::span<const Term>(terms.begin(), terms.size()), lo, hi);
  }

  void set_free(std::size_t col) {
    lower[col] = -kInf;
    upper[col] = kInf;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Solution with a Lagrangian certificate.
///
/// `dual` holds one multiplier per row with the convention that
/// reduced costs are c - A^T y. The residuals are recomputed from the
/// original data, independent of the tableau:
///   primal_residual  largest row or bound violation of `primal`,
///   dual_residual    largest multiplier whose sign is not backed by a
///                    finite bound,
///   duality_gap      |c.x - dual objective|.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double optimum = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  std::size_t pivots = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
  /// All three residuals within `tol` (the gap relative to 1 + |optimum|).
  bool certified(double tol) const;
};

/// Two-phase dense simplex. Dantzig pricing with lowest-index ties, switching
/// to Bland's rule after a run of degenerate pivots. Deterministic.
///
/// Throws LpFailure on malformed input (dimension mismatch, NaN, inverted
/// bounds) or when the pivot limit is exhausted.
LpSolution solve(const LpProblem& problem);

}  // namespace freegeo
