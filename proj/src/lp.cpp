#include "freegeo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freegeo/config.hpp"

namespace freegeo {

std::size_t LpProblem::add_range_row(std::span<const Term> terms, double lo, double hi) {
  const std::size_t n = cols();
  const std::size_t offset = matrix.size();
  matrix.resize(offset + n, 0.0);
  for (const auto& [col, value] : terms) {
    if (col >= n) throw LpFailure("row term refers to column " + std::to_string(col));
    matrix[offset + col] += value;
  }
  row_lower.push_back(lo);
  row_upper.push_back(hi);
  return rows() - 1;
}

std::size_t LpProblem::add_row(std::span<const Term> terms, RowSense s, double rhs) {
  switch (s) {
    case RowSense::LessEqual: return add_range_row(terms, -kInf, rhs);
    case RowSense::GreaterEqual: return add_range_row(terms, rhs, kInf);
    case RowSense::Equal: break;
  }
  return add_range_row(terms, rhs, rhs);
}

bool LpSolution::certified(double tol) const {
  return optimal() && primal_residual <= tol && dual_residual <= tol &&
         duality_gap <= tol * (1.0 + std::abs(optimum));
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr std::size_t kStallLimit = 40;

// Dictionary simplex on  max c.x  s.t.  A x <= b, x >= 0.
//
// Row r of D holds basic variable B[r] = D[r][n+1] - sum_j D[r][j] x_N[j].
// Row m is the objective (entries -reduced cost), row m+1 the phase-one
// objective, column n the single artificial variable (index -1).
class Dictionary {
 public:
  Dictionary(std::size_t m, std::size_t n, const std::vector<double>& a,
             const std::vector<double>& b, const std::vector<double>& c)
      : m_(m), n_(n), w_(n + 2), D_((m + 2) * (n + 2), 0.0), B_(m), N_(n + 1) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) at(i, j) = a[i * n + j];
      B_[i] = static_cast<long>(n + i);
      at(i, n) = -1.0;
      at(i, n + 1) = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      N_[j] = static_cast<long>(j);
      at(m, j) = -c[j];
    }
    N_[n] = -1;
    at(m + 1, n) = 1.0;
    limit_ = 200 * (m + n + 10);
  }

  LpStatus run() {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -kPivotEps) {
      pivot(r, n_);
      if (!simplex(2) || at(m_ + 1, n_ + 1) < -1e-9) return LpStatus::Infeasible;
      for (std::size_t i = 0; i < m_; ++i) {
        if (B_[i] != -1) continue;
        std::size_t s = n_ + 1;
        double best = kPivotEps;
        for (std::size_t j = 0; j <= n_; ++j) {
          if (N_[j] == -1) continue;
          if (std::abs(at(i, j)) > best) {
            best = std::abs(at(i, j));
            s = j;
          }
        }
        if (s <= n_) pivot(i, s);
      }
    }
    return simplex(1) ? LpStatus::Optimal : LpStatus::Unbounded;
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (B_[i] >= 0 && static_cast<std::size_t>(B_[i]) < n_)
        x[static_cast<std::size_t>(B_[i])] = at(i, n_ + 1);
    return x;
  }

  // Nonnegative multipliers of the <= rows.
  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t j = 0; j <= n_; ++j) {
      if (N_[j] >= static_cast<long>(n_)) y[static_cast<std::size_t>(N_[j]) - n_] = at(m_, j);
    }
    return y;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  double& at(std::size_t i, std::size_t j) { return D_[i * w_ + j]; }
  double at(std::size_t i, std::size_t j) const { return D_[i * w_ + j]; }

  void pivot(std::size_t r, std::size_t s) {
    if (++pivots_ > limit_) throw LpFailure("simplex pivot limit exceeded");
    double* row = &D_[r * w_];
    const double inv = 1.0 / row[s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* other = &D_[i * w_];
      if (other[s] == 0.0) continue;
      const double f = other[s] * inv;
      for (std::size_t j = 0; j < w_; ++j) other[j] -= row[j] * f;
      other[s] = row[s] * f;
    }
    for (std::size_t j = 0; j < w_; ++j)
      if (j != s) row[j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) at(i, s) *= -inv;
    row[s] = inv;
    std::swap(B_[r], N_[s]);
  }

  bool simplex(int phase) {
    const std::size_t x = phase == 1 ? m_ : m_ + 1;
    std::size_t stall = 0;
    for (;;) {
      const bool bland = stall >= kStallLimit;
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (phase == 1 && N_[j] == -1) continue;
        const double v = at(x, j);
        if (v >= -kCostEps) continue;
        if (s > n_) {
          s = j;
        } else if (bland ? N_[j] < N_[s]
                         : (v < at(x, s) || (v == at(x, s) && N_[j] < N_[s]))) {
          s = j;
        }
      }
      if (s > n_) return true;

      std::size_t r = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, s);
        if (a <= kPivotEps) continue;
        const double ratio = at(i, n_ + 1) / a;
        if (r == m_ || ratio < best || (ratio == best && B_[i] < B_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) return false;
      stall = best <= 0.0 ? stall + 1 : 0;
      pivot(r, s);
    }
  }

  std::size_t m_, n_, w_;
  std::vector<double> D_;
  std::vector<long> B_, N_;
  std::size_t pivots_ = 0;
  std::size_t limit_ = 0;
};

// x_j = offset + sum of coef * internal column.
struct ColumnMap {
  double offset = 0.0;
  std::size_t plus = 0;
  double plus_coef = 1.0;
  std::size_t minus = static_cast<std::size_t>(-1);
};

void check_input(const LpProblem& p) {
  const std::size_t n = p.cols();
  if (p.lower.size() != n || p.upper.size() != n)
    throw LpFailure("variable bound vectors do not match column count");
  if (p.row_upper.size() != p.row_lower.size() || p.matrix.size() != p.rows() * n)
    throw LpFailure("constraint matrix dimensions are inconsistent");
  auto bad = [](double v) { return std::isnan(v); };
  if (std::any_of(p.objective.begin(), p.objective.end(), bad) ||
      std::any_of(p.matrix.begin(), p.matrix.end(), bad) ||
      std::any_of(p.lower.begin(), p.lower.end(), bad) ||
      std::any_of(p.upper.begin(), p.upper.end(), bad) ||
      std::any_of(p.row_lower.begin(), p.row_lower.end(), bad) ||
      std::any_of(p.row_upper.begin(), p.row_upper.end(), bad))
    throw LpFailure("NaN in linear program");
  for (double v : p.objective)
    if (!std::isfinite(v)) throw LpFailure("infinite objective coefficient");
  for (double v : p.matrix)
    if (!std::isfinite(v)) throw LpFailure("infinite constraint coefficient");
  for (std::size_t j = 0; j < n; ++j)
    if (p.lower[j] > p.upper[j] || p.lower[j] == kInf || p.upper[j] == -kInf)
      throw LpFailure("inverted bounds on column " + std::to_string(j));
  for (std::size_t r = 0; r < p.rows(); ++r)
    if (p.row_lower[r] > p.row_upper[r] || p.row_lower[r] == kInf || p.row_upper[r] == -kInf)
      throw LpFailure("inverted bounds on row " + std::to_string(r));
}

void certify(const LpProblem& p, LpSolution& sol) {
  const std::size_t n = p.cols();
  const std::size_t m = p.rows();
  const double sigma = p.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;

  double pres = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    pres = std::max(pres, p.lower[j] - sol.primal[j]);
    pres = std::max(pres, sol.primal[j] - p.upper[j]);
  }
  std::vector<double> activity(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += p.coeff(r, j) * sol.primal[j];
    activity[r] = s;
    pres = std::max(pres, p.row_lower[r] - s);
    pres = std::max(pres, s - p.row_upper[r]);
  }

  // Lagrangian dual in minimisation form.
  double dres = 0.0;
  double dobj = 0.0;
  std::vector<double> reduced(n);
  for (std::size_t j = 0; j < n; ++j) reduced[j] = sigma * p.objective[j];
  for (std::size_t r = 0; r < m; ++r) {
    const double y = sigma * sol.dual[r];
    for (std::size_t j = 0; j < n; ++j) reduced[j] -= p.coeff(r, j) * y;
    const double bound = y > 0.0 ? p.row_lower[r] : p.row_upper[r];
    if (y == 0.0) continue;
    if (std::isfinite(bound)) {
      dobj += y * bound;
    } else {
      dres = std::max(dres, std::abs(y));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double d = reduced[j];
    if (d == 0.0) continue;
    const double bound = d > 0.0 ? p.lower[j] : p.upper[j];
    if (std::isfinite(bound)) {
      dobj += d * bound;
    } else {
      dres = std::max(dres, std::abs(d));
    }
  }
  double pobj = 0.0;
  for (std::size_t j = 0; j < n; ++j) pobj += p.objective[j] * sol.primal[j];

  sol.optimum = pobj;
  sol.dual_objective = sigma * dobj;
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.duality_gap = std::abs(pobj - sol.dual_objective);
}

}  // namespace

LpSolution solve(const LpProblem& p) {
  check_input(p);
  const std::size_t n = p.cols();
  const std::size_t m = p.rows();
  const double sigma = p.sense == ObjectiveSense::Maximize ? 1.0 : -1.0;

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<ColumnMap> map(n);
  std::size_t inner = 0;
  // Internal rows: coefficients over internal columns, rhs.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_terms;
  std::vector<double> rhs;
  for (std::size_t j = 0; j < n; ++j) {
    ColumnMap& c = map[j];
    if (std::isfinite(p.lower[j])) {
      c.offset = p.lower[j];
      c.plus = inner++;
      if (std::isfinite(p.upper[j])) {
        rows_terms.push_back({{c.plus, 1.0}});
        rhs.push_back(p.upper[j] - p.lower[j]);
      }
    } else if (std::isfinite(p.upper[j])) {
      c.offset = p.upper[j];
      c.plus = inner++;
      c.plus_coef = -1.0;
    } else {
      c.plus = inner++;
      c.minus = inner++;
    }
  }

  // Each original row maps to an upper copy and/or a negated lower copy.
  std::vector<std::size_t> upper_row(m, none), lower_row(m, none);
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<std::pair<std::size_t, double>> terms;
    double shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = p.coeff(r, j);
      if (a == 0.0) continue;
      shift += a * map[j].offset;
      terms.emplace_back(map[j].plus, a * map[j].plus_coef);
      if (map[j].minus != none) terms.emplace_back(map[j].minus, -a);
    }
    if (std::isfinite(p.row_upper[r])) {
      upper_row[r] = rhs.size();
      rows_terms.push_back(terms);
      rhs.push_back(p.row_upper[r] - shift);
    }
    if (std::isfinite(p.row_lower[r])) {
      lower_row[r] = rhs.size();
      auto neg = terms;
      for (auto& t : neg) t.second = -t.second;
      rows_terms.push_back(std::move(neg));
      rhs.push_back(shift - p.row_lower[r]);
    }
  }

  const std::size_t mi = rhs.size();
  std::vector<double> a(mi * inner, 0.0);
  for (std::size_t i = 0; i < mi; ++i)
    for (const auto& [col, v] : rows_terms[i]) a[i * inner + col] += v;
  std::vector<double> c(inner, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    c[map[j].plus] += sigma * p.objective[j] * map[j].plus_coef;
    if (map[j].minus != none) c[map[j].minus] -= sigma * p.objective[j];
  }

  Dictionary dict(mi, inner, a, rhs, c);
  LpSolution sol;
  sol.status = dict.run();
  sol.pivots = dict.pivots();
  if (sol.status != LpStatus::Optimal) return sol;

  const auto xi = dict.primal();
  const auto yi = dict.duals();
  sol.primal.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double v = map[j].offset + map[j].plus_coef * xi[map[j].plus];
    if (map[j].minus != none) v -= xi[map[j].minus];
    sol.primal[j] = v;
  }
  // Internal problem maximises sigma*c; u = y_up - y_low are its multipliers.
  sol.dual.assign(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    double u = 0.0;
    if (upper_row[r] != none) u += yi[upper_row[r]];
    if (lower_row[r] != none) u -= yi[lower_row[r]];
    sol.dual[r] = sigma * u;
  }
  certify(p, sol);
  return sol;
}

}  // namespace freegeo
