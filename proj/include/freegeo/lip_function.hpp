#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "freegeo/metric_space.hpp"

namespace freegeo {

/// Real function on the points of a pointed metric space, vanishing at the
/// base. The Lipschitz norm is computed once at construction.
class LipFunction {
 public:
  /// Values are shifted by a constant so that the base value is 0; slopes
  /// are unaffected. Throws Error on a size mismatch or non-finite values.
  LipFunction(PointedMetricSpace space, std::vector<double> values);

  static LipFunction zero(const PointedMetricSpace& space);

  const PointedMetricSpace& space() const { return space_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator()(std::size_t p) const { return values_[p]; }
  double lip_norm() const { return norm_; }

  /// Same values read in another metric on the same point set.
  LipFunction in_space(const PointedMetricSpace& other) const;

 private:
  PointedMetricSpace space_;
  std::vector<double> values_;
  double norm_ = 0.0;
};

// Pointwise arithmetic; both operands must live on the same space.
LipFunction operator+(const LipFunction& a, const LipFunction& b);
LipFunction operator-(const LipFunction& a, const LipFunction& b);
LipFunction operator*(double s, const LipFunction& f);

/// max over p != q of |v(p) - v(q)| / d(p,q).
double lip_norm(const PointedMetricSpace& space, std::span<const double> values);

/// Signed slope (f(p) - f(q)) / d(p,q). Throws Error when p == q.
double pair_slope(const LipFunction& f, std::size_t p, std::size_t q);

/// Ordered pair realizing the norm (first in index order), for reports.
std::pair<std::size_t, std::size_t> steepest_pair(const LipFunction& f);

/// z -> (d(x,y)/2)(d(z,y) - d(z,x))/(d(z,y) + d(z,x)), base-shifted.
/// Throws Error when x == y or the norm exceeds 1 + tau_lp.
LipFunction aux_f_xy(const PointedMetricSpace& space, std::size_t x, std::size_t y);

/// Minimal peaking constant: the largest |slope| over unordered pairs other
/// than {x,y}, provided f has norm 1, slope 1 at (x,y), and that largest
/// slope stays below 1 - tau_lp. A two-point space peaks with constant 0.
/// Throws Error when x == y.
std::optional<double> peaking_check(const LipFunction& f, std::size_t x, std::size_t y);

struct Clip {
  double lo;
  double hi;
};

/// Upper McShane extension z -> min over p in N of f_N(p) + L d(z,p),
/// clamped to `clip` when given. Agrees with f_N on N exactly.
/// Throws Error when the base is not in N, f_N(base) != 0, f_N is not
/// L-Lipschitz on N, or f_N leaves the clip range.
LipFunction mcshane_extend(const PointedMetricSpace& space, std::span<const std::size_t> subset,
                           std::span<const double> subset_values, double lipschitz,
                           std::optional<Clip> clip = std::nullopt);

/// Cutoff: 1 on [0, beta], affine to 0 at T, 0 beyond.
class CutoffXi {
 public:
  /// Throws Error unless 0 < beta < T.
  CutoffXi(double beta, double big_t);
  double operator()(double t) const;
  double beta() const { return beta_; }
  double big_t() const { return big_t_; }

 private:
  double beta_;
  double big_t_;
};

/// T0 = (gamma/4)(T - beta)/(beta + gamma/2).
double cutoff_t0(double beta, double gamma, double big_t);

/// Left side of the large-T condition; the cutoff is admissible when < 3/4:
/// (2 beta + 3 gamma/2)/(T0 + gamma) + (beta + gamma/2)/(T - beta).
double big_t_lhs(double beta, double gamma, double big_t);

/// Smallest beta + 2^k (k >= 0) with big_t_lhs < 3/4.
CutoffXi select_cutoff(double beta, double gamma);

struct FGamma {
  LipFunction function;   // on gamma_fatten(space, gamma)
  double case_margin;     // worst slack over the three pair cases
  double radius_margin;   // (beta + gamma/2) - max |f_gamma| off N
};

/// f_gamma: f + gamma at each x_i, f at each y_i, f + gamma/2 elsewhere
/// (the base included when it is not an endpoint), then base-shifted.
/// `pairs` lists (x_i, y_i). Throws Error naming the offending index when
/// the endpoint sets meet, f is not norm-one with f(x_i) - f(y_i) = d(x_i,y_i),
/// or a case bound fails beyond tau_lp.
FGamma f_gamma_construct(const PointedMetricSpace& space, double gamma,
                         std::span<const std::pair<std::size_t, std::size_t>> pairs,
                         const LipFunction& f);

/// G_gamma(z) = f_gamma(z) xi(d(0,z)) with d the unfattened metric.
LipFunction g_gamma_construct(const LipFunction& f_gamma, const CutoffXi& xi,
                              const PointedMetricSpace& original);

}  // namespace freegeo
