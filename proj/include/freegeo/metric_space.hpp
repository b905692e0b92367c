#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace freegeo {

using Rational = boost::rational<std::int64_t>;

/// Dense square matrix of (candidate) distances, row-major.
///
/// Nothing is checked here beyond squareness; `validate` decides whether
/// the entries form a metric.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  /// Throws Error when the rows are ragged or the matrix is not square.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::vector<std::vector<double>> rows() const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A violated entry-level axiom: nonzero diagonal, asymmetry, a nonpositive
/// off-diagonal entry, or a non-finite value.
struct EntryViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string what;
};

/// d(i,j) > d(i,k) + d(k,j) beyond tolerance; `excess` is the overshoot.
struct TripleViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double excess = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<EntryViolation> entries;
  std::vector<TripleViolation> triangles;
};

/// Checks the metric axioms within the relative metric tolerance. Never
/// throws; every violating triple (i < j, any k) is listed.
ValidationReport validate(const DistanceMatrix& dist);

/// Finite metric space with base point 0. Immutable; copies share storage.
class PointedMetricSpace {
 public:
  /// Throws Error when `validate` rejects the matrix or labels are the wrong
  /// length (an empty label list is allowed).
  explicit PointedMetricSpace(DistanceMatrix dist, std::vector<std::string> labels = {});

  /// Exact construction; the floating matrix is the correctly rounded image.
  explicit PointedMetricSpace(const std::vector<std::vector<Rational>>& exact,
                              std::vector<std::string> labels = {});

  std::size_t size() const { return data_->dist.size(); }
  static constexpr std::size_t base() { return 0; }
  double dist(std::size_t i, std::size_t j) const { return data_->dist(i, j); }
  const DistanceMatrix& matrix() const { return data_->dist; }
  const std::vector<std::string>& labels() const { return data_->labels; }
  std::string label(std::size_t i) const;

  bool has_exact() const { return !data_->exact.empty(); }
  /// Precondition: has_exact().
  Rational exact_dist(std::size_t i, std::size_t j) const {
    return data_->exact[i * size() + j];
  }

  /// G_z(x,y) = d(x,z) + d(z,y) - d(x,y), through the exact path when present.
  double gromov(std::size_t z, std::size_t x, std::size_t y) const;

  /// True when both handles refer to the same storage or equal matrices.
  friend bool same_space(const PointedMetricSpace& a, const PointedMetricSpace& b);

 private:
  struct Data {
    DistanceMatrix dist;
    std::vector<Rational> exact;
    std::vector<std::string> labels;
  };
  std::shared_ptr<const Data> data_;
};

/// Off-diagonal distances increased by gamma. Throws Error unless gamma > 0.
PointedMetricSpace gamma_fatten(const PointedMetricSpace& space, double gamma);

/// Result of subtracting gamma from every off-diagonal distance.
struct ThinResult {
  std::optional<PointedMetricSpace> space;
  ValidationReport rejection;  // populated when `space` is empty

  bool accepted() const { return space.has_value(); }
};

/// Throws Error unless gamma > 0; otherwise accepts or rejects with the
/// failing triples.
ThinResult gamma_thin(const PointedMetricSpace& space, double gamma);

/// Restriction to a subset of points, re-rooted at the smallest retained
/// index. `original[k]` is the parent index of point k.
struct Subspace {
  PointedMetricSpace space;
  std::vector<std::size_t> original;
};

/// Throws Error on out-of-range or empty index sets. Duplicates are merged.
Subspace subspace(const PointedMetricSpace& space, std::span<const std::size_t> indices);

/// All z with d(x,z) + d(z,y) = d(x,y) within tolerance, ascending.
/// Throws Error when x == y.
std::vector<std::size_t> metric_segment(const PointedMetricSpace& space, std::size_t x,
                                        std::size_t y);

/// Minimum off-diagonal distance. Throws Error for a single point.
double uniform_discreteness_constant(const PointedMetricSpace& space);

/// max over q in subset of d(0,q). Throws Error on an empty subset.
double radius_beta(const PointedMetricSpace& space, std::span<const std::size_t> subset);

}  // namespace freegeo
