#include "freegeo/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "freegeo/config.hpp"

namespace freegeo {

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error("distance matrix row " + std::to_string(i) + " has " +
                  std::to_string(rows[i].size()) + " entries, expected " +
                  std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> DistanceMatrix::rows() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

ValidationReport validate(const DistanceMatrix& d) {
  const double tau = tolerances().metric;
  ValidationReport report;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d(i, j);
      if (!std::isfinite(v)) {
        report.entries.push_back({i, j, "non-finite distance"});
      } else if (i == j) {
        if (v != 0.0) report.entries.push_back({i, j, "nonzero diagonal"});
      } else if (v <= 0.0) {
        report.entries.push_back({i, j, "nonpositive distance between distinct points"});
      } else if (i < j && std::abs(v - d(j, i)) > tau * std::max(v, std::abs(d(j, i)))) {
        report.entries.push_back({i, j, "asymmetric distance"});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double direct = d(i, j);
        const double detour = d(i, k) + d(k, j);
        const double excess = direct - detour;
        if (excess > tau * std::max(std::abs(direct), std::abs(detour))) {
          report.triangles.push_back({i, j, k, excess});
        }
      }
    }
  }
  report.ok = report.entries.empty() && report.triangles.empty();
  return report;
}

namespace {

std::string describe(const ValidationReport& r) {
  std::string msg = "not a metric:";
  if (!r.entries.empty()) {
    const auto& e = r.entries.front();
    msg += " " + e.what + " at (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
  }
  if (!r.triangles.empty()) {
    const auto& t = r.triangles.front();
    msg += " triangle inequality fails for (" + std::to_string(t.i) + "," + std::to_string(t.j) +
           ") via " + std::to_string(t.k);
  }
  msg += " [" + std::to_string(r.entries.size() + r.triangles.size()) + " violation(s)]";
  return msg;
}

}  // namespace

PointedMetricSpace::PointedMetricSpace(DistanceMatrix dist, std::vector<std::string> labels) {
  if (dist.size() == 0) throw Error("metric space needs at least one point");
  auto report = validate(dist);
  if (!report.ok) throw Error(describe(report));
  if (!labels.empty() && labels.size() != dist.size())
    throw Error("label count does not match point count");
  data_ = std::make_shared<const Data>(Data{std::move(dist), {}, std::move(labels)});
}

PointedMetricSpace::PointedMetricSpace(const std::vector<std::vector<Rational>>& exact,
                                       std::vector<std::string> labels) {
  const std::size_t n = exact.size();
  if (n == 0) throw Error("metric space needs at least one point");
  DistanceMatrix dist(n);
  std::vector<Rational> flat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (exact[i].size() != n) throw Error("exact distance matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      flat[i * n + j] = exact[i][j];
      dist(i, j) = boost::rational_cast<double>(exact[i][j]);
    }
  }
  // Exact axioms first; the rounded matrix then passes trivially.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (flat[i * n + j] > flat[i * n + k] + flat[k * n + j])
          throw Error("exact matrix violates the triangle inequality at (" + std::to_string(i) +
                      "," + std::to_string(j) + ") via " + std::to_string(k));
  auto report = validate(dist);
  if (!report.ok) throw Error(describe(report));
  if (!labels.empty() && labels.size() != n) throw Error("label count does not match point count");
  data_ = std::make_shared<const Data>(Data{std::move(dist), std::move(flat), std::move(labels)});
}

std::string PointedMetricSpace::label(std::size_t i) const {
  if (i < data_->labels.size()) return data_->labels[i];
  return std::to_string(i);
}

double PointedMetricSpace::gromov(std::size_t z, std::size_t x, std::size_t y) const {
  if (has_exact()) {
    return boost::rational_cast<double>(exact_dist(x, z) + exact_dist(z, y) - exact_dist(x, y));
  }
  return dist(x, z) + dist(z, y) - dist(x, y);
}

bool same_space(const PointedMetricSpace& a, const PointedMetricSpace& b) {
  return a.data_ == b.data_ || a.data_->dist == b.data_->dist;
}

namespace {

void require_positive_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error("gamma must be a positive finite number, got " + std::to_string(gamma));
}

DistanceMatrix shifted(const PointedMetricSpace& space, double delta) {
  DistanceMatrix d = space.matrix();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (i != j) d(i, j) += delta;
  return d;
}

}  // namespace

PointedMetricSpace gamma_fatten(const PointedMetricSpace& space, double gamma) {
  require_positive_gamma(gamma);
  return PointedMetricSpace(shifted(space, gamma), space.labels());
}

ThinResult gamma_thin(const PointedMetricSpace& space, double gamma) {
  require_positive_gamma(gamma);
  DistanceMatrix d = shifted(space, -gamma);
  ThinResult result;
  result.rejection = validate(d);
  if (result.rejection.ok) {
    result.space.emplace(std::move(d), space.labels());
    result.rejection = {};
  }
  return result;
}

Subspace subspace(const PointedMetricSpace& space, std::span<const std::size_t> indices) {
  std::vector<std::size_t> keep(indices.begin(), indices.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw Error("subspace needs at least one point");
  if (keep.back() >= space.size()) throw Error("subspace index out of range");

  std::vector<std::string> labels;
  if (!space.labels().empty())
    for (auto k : keep) labels.push_back(space.labels()[k]);

  const std::size_t m = keep.size();
  if (space.has_exact()) {
    std::vector<std::vector<Rational>> exact(m, std::vector<Rational>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) exact[a][b] = space.exact_dist(keep[a], keep[b]);
    return {PointedMetricSpace(exact, std::move(labels)), keep};
  }
  DistanceMatrix d(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) d(a, b) = space.dist(keep[a], keep[b]);
  return {PointedMetricSpace(std::move(d), std::move(labels)), keep};
}

std::vector<std::size_t> metric_segment(const PointedMetricSpace& space, std::size_t x,
                                        std::size_t y) {
  if (x == y) throw Error("metric segment needs two distinct endpoints");
  if (x >= space.size() || y >= space.size()) throw Error("segment endpoint out of range");
  const double tau = tolerances().metric;
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < space.size(); ++z) {
    if (z == x || z == y || space.gromov(z, x, y) <= tau * space.dist(x, y)) out.push_back(z);
  }
  return out;
}

double uniform_discreteness_constant(const PointedMetricSpace& space) {
  if (space.size() < 2) throw Error("uniform discreteness needs at least two points");
  double theta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) theta = std::min(theta, space.dist(i, j));
  return theta;
}

double radius_beta(const PointedMetricSpace& space, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error("radius needs a nonempty subset");
  double beta = 0.0;
  for (auto q : subset) {
    if (q >= space.size()) throw Error("subset index out of range");
    beta = std::max(beta, space.dist(PointedMetricSpace::base(), q));
  }
  return beta;
}

}  // namespace freegeo
