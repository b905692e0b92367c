#include "freegeo/pair_geometry.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "freegeo/config.hpp"

namespace freegeo {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void check_pair(const PointedMetricSpace& space, std::size_t x, std::size_t y) {
  if (x == y) throw Error("pair needs x != y");
  if (x >= space.size() || y >= space.size()) throw Error("pair index out of range");
}

}  // namespace

double gromov_product(const PointedMetricSpace& space, std::size_t z, std::size_t x,
                      std::size_t y) {
  check_pair(space, x, y);
  if (z >= space.size()) throw Error("Gromov product index out of range");
  return space.gromov(z, x, y);
}

PairGeometryReport analyze_pair(const PointedMetricSpace& space, std::size_t x, std::size_t y) {
  check_pair(space, x, y);
  const double tau = tolerances().metric;
  PairGeometryReport r;
  r.x = x;
  r.y = y;
  r.d_xy = space.dist(x, y);
  r.eta = kInfinity;
  r.delta_rotund = kInfinity;

  const bool exact = space.has_exact();
  std::optional<Rational> eta_q, delta_q;
  // radius -> min G_z at that radius; floors are suffix minima.
  std::map<double, double> at_radius;
  for (std::size_t z = 0; z < space.size(); ++z) {
    if (z == x || z == y) continue;
    const double g = space.gromov(z, x, y);
    const double m = std::min(space.dist(x, z), space.dist(y, z));
    if (exact) {
      const Rational gq = space.exact_dist(x, z) + space.exact_dist(z, y) - space.exact_dist(x, y);
      const Rational mq = std::min(space.exact_dist(x, z), space.exact_dist(y, z));
      if (!eta_q || gq < *eta_q) {
        eta_q = gq;
        r.eta_witness = z;
      }
      if (!delta_q || gq / mq < *delta_q) delta_q = gq / mq;
    } else {
      if (g < r.eta) {
        r.eta = g;
        r.eta_witness = z;
      }
      r.delta_rotund = std::min(r.delta_rotund, g / m);
    }
    auto [it, fresh] = at_radius.emplace(m, g);
    if (!fresh) it->second = std::min(it->second, g);
  }
  if (eta_q) {
    r.eta_exact = eta_q;
    r.delta_exact = delta_q;
    r.eta = boost::rational_cast<double>(*eta_q);
    r.delta_rotund = boost::rational_cast<double>(*delta_q);
  }

  double running = kInfinity;
  for (auto it = at_radius.rbegin(); it != at_radius.rend(); ++it) {
    running = std::min(running, it->second);
    r.concavity_profile.push_back({it->first, running});
  }
  std::reverse(r.concavity_profile.begin(), r.concavity_profile.end());

  r.has_G = r.eta > tau;
  r.extreme_molecule = r.eta > tau;
  r.is_rotund = r.delta_rotund > tau;
  r.is_concave = std::all_of(r.concavity_profile.begin(), r.concavity_profile.end(),
                             [tau](const ConcavityStep& s) { return s.floor > tau; });
  return r;
}

SpaceClassification classify_space(const PointedMetricSpace& space) {
  if (space.size() < 2) throw Error("classification needs at least two points");
  SpaceClassification c;
  c.min_eta = kInfinity;
  c.witness_x = 0;
  c.witness_y = 1;
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t y = x + 1; y < space.size(); ++y)
      for (std::size_t z = 0; z < space.size(); ++z) {
        if (z == x || z == y) continue;
        const double g = space.gromov(z, x, y);
        if (g < c.min_eta) {
          c.min_eta = g;
          c.witness_x = x;
          c.witness_y = y;
        }
      }
  c.luna = c.min_eta > tolerances().metric;
  return c;
}

std::vector<TrendRow> family_trend(const MetricFamily& family,
                                   std::span<const std::size_t> indices) {
  std::vector<TrendRow> rows;
  for (std::size_t k : indices) {
    const auto member = family.at(k);
    auto report = analyze_pair(member.space, member.x, member.y);
    rows.push_back({k, member.space.size(), report.eta, report.delta_rotund, std::move(report)});
  }
  return rows;
}

}  // namespace freegeo
