#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "freegeo/lip_function.hpp"
#include "freegeo/lp.hpp"
#include "freegeo/metric_space.hpp"

namespace freegeo {

/// Finitely supported element of the free space, as a mass vector summing
/// to zero. The base mass is recomputed at construction to absorb any
/// imbalance (delta(0) is the zero element).
class FreeElement {
 public:
  FreeElement(PointedMetricSpace space, std::vector<double> masses);

  static FreeElement zero(const PointedMetricSpace& space);
  /// delta(p); equals delta(p) - delta(0) as a mass vector.
  static FreeElement delta(const PointedMetricSpace& space, std::size_t p);
  /// m_{x,y} = (delta(x) - delta(y))/d(x,y). Throws Error when x == y.
  static FreeElement molecule(const PointedMetricSpace& space, std::size_t x, std::size_t y);

  const PointedMetricSpace& space() const { return space_; }
  const std::vector<double>& masses() const { return masses_; }
  double operator[](std::size_t p) const { return masses_[p]; }
  std::size_t size() const { return masses_.size(); }
  bool is_zero() const;

  /// Same masses over another metric on the same points.
  FreeElement in_space(const PointedMetricSpace& other) const;

 private:
  PointedMetricSpace space_;
  std::vector<double> masses_;
};

FreeElement operator+(const FreeElement& a, const FreeElement& b);
FreeElement operator-(const FreeElement& a, const FreeElement& b);
FreeElement operator*(double s, const FreeElement& e);

struct Molecule {
  double lambda = 0.0;
  std::size_t x = 0;
  std::size_t y = 0;
};

/// sum lambda_i m_{x_i,y_i} with lambda_i > 0.
struct MoleculeCombination {
  std::vector<Molecule> terms;

  double total() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  /// Throws Error on a nonpositive weight, x == y, or an index out of range.
  FreeElement to_element(const PointedMetricSpace& space) const;
};

/// sum_p masses[p] f(p). Throws Error when the spaces differ.
double pairing(const LipFunction& f, const FreeElement& mu);

/// Unordered pairs (p < q) whose Lipschitz constraint is not implied by a
/// point z with G_z(p,q) = 0 (exact arithmetic when available).
std::vector<std::pair<std::size_t, std::size_t>> constraint_pairs(const PointedMetricSpace& space);

struct NormCertificate {
  double value = 0.0;        // mean of the two optima
  LpSolution flow;           // primal: min cost flow
  LpSolution lipschitz;      // dual: max pairing over the unit ball
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // flow variable order
  double gap() const { return std::abs(flow.optimum - lipschitz.optimum); }
};

/// Both formulations, each certified to tau_lp, and their optima agreeing
/// to tau_lp (1 + |value|). Throws LpFailure otherwise.
NormCertificate free_norm_certified(const FreeElement& mu);
double free_norm(const FreeElement& mu);

/// Dual optimizer. Throws Error for mu = 0.
LipFunction norming_functional(const FreeElement& mu);

/// Built from the positive arcs of the optimal flow; lambda = w d(p,q).
/// Throws Error for mu = 0.
MoleculeCombination optimal_representation(const FreeElement& mu);

/// D(mu) = {f : lip_norm(f) <= 1, <f,mu> = ||mu||}, with the pairing
/// relaxed by `slack` for LP feasibility.
class DualFace {
 public:
  explicit DualFace(FreeElement mu);

  const FreeElement& element() const { return mu_; }
  const PointedMetricSpace& space() const { return mu_.space(); }
  double norm() const { return norm_; }
  double slack() const { return slack_; }

  /// LP over f(1..n-1) plus `extra` trailing columns: lip_norm(f) <= scale,
  /// <f,mu> >= scale ||mu|| - slack.
  LpProblem base_problem(std::size_t extra = 0, double scale = 1.0) const;

 private:
  FreeElement mu_;
  double norm_;
  double slack_;
};

/// Throws Error for mu = 0.
DualFace dual_face(const FreeElement& mu);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// [min f(p), max f(p)] over the face for every point (the base is [0,0]).
std::vector<Range> face_coordinate_ranges(const DualFace& face);

/// True iff every face coordinate range has width <= tol. Throws Error
/// for mu = 0.
bool is_gateaux(const FreeElement& mu, double tol = 1e-7);

struct Projection {
  LipFunction function;  // nearest point found in scale * D(mu)
  double distance;       // LP optimum of lip_norm(function - h)
  LpSolution solution;
};

/// min lip_norm(phi - h) over phi in scale * D(mu). Throws LpFailure when
/// the LP is not certified.
Projection project_onto_face(const DualFace& face, const LipFunction& h, double scale = 1.0);

/// Lip-distance from f to D(mu).
double distance_to_face(const DualFace& face, const LipFunction& f);

/// Maximizer of sum_p c[p] f(p) over the slab {lip_norm(f) <= 1,
/// <f,mu> >= ||mu|| (1 - eta)}. `objective` has one entry per point.
LipFunction slab_point(const DualFace& face, std::span<const double> objective, double eta);

/// Some f with lip_norm(f) <= 1 and f(x_i) - f(y_i) = d(x_i,y_i) for all
/// pairs, or nullopt when no such f exists.
std::optional<LipFunction> common_norming_function(
    const PointedMetricSpace& space, std::span<const std::pair<std::size_t, std::size_t>> pairs);

}  // namespace freegeo
