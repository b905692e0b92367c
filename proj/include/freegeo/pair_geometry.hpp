#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "freegeo/gallery.hpp"
#include "freegeo/metric_space.hpp"

namespace freegeo {

/// G_z(x,y) = d(x,z) + d(z,y) - d(x,y). Throws Error when x == y.
double gromov_product(const PointedMetricSpace& space, std::size_t z, std::size_t x,
                      std::size_t y);

struct ConcavityStep {
  double radius;  // a value of min(d(x,z), d(y,z))
  double floor;   // min G_z over z with min(d(x,z), d(y,z)) >= radius
};

struct PairGeometryReport {
  std::size_t x = 0;
  std::size_t y = 0;
  double d_xy = 0.0;
  double eta = 0.0;           // min over z != x,y of G_z(x,y); +inf without such z
  double delta_rotund = 0.0;  // min over z of G_z / min(d(x,z), d(y,z))
  std::optional<Rational> eta_exact;
  std::optional<Rational> delta_exact;
  std::vector<ConcavityStep> concavity_profile;  // radius ascending
  std::size_t eta_witness = 0;  // argmin z (meaningless when eta is infinite)
  bool has_G = false;
  bool is_rotund = false;
  bool is_concave = false;
  bool extreme_molecule = false;
};

/// Enumerates every z. Exact arithmetic is used when the space carries it.
/// Throws Error when x == y or an index is out of range.
PairGeometryReport analyze_pair(const PointedMetricSpace& space, std::size_t x, std::size_t y);

struct SpaceClassification {
  bool luna = false;
  double min_eta = 0.0;
  std::size_t witness_x = 0;
  std::size_t witness_y = 0;
};

/// luna iff min over pairs of eta > tau_metric. Throws Error for a single point.
SpaceClassification classify_space(const PointedMetricSpace& space);

struct TrendRow {
  std::size_t index = 0;
  std::size_t points = 0;
  double eta = 0.0;
  double delta_rotund = 0.0;
  PairGeometryReport report;
};

/// Analyzes the distinguished pair of every requested truncation.
std::vector<TrendRow> family_trend(const MetricFamily& family,
                                   std::span<const std::size_t> indices);

}  // namespace freegeo
