#include "freegeo/lip_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freegeo/config.hpp"

namespace freegeo {

LipFunction::LipFunction(PointedMetricSpace space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size())
    throw Error("function has " + std::to_string(values_.size()) + " values for " +
                std::to_string(space_.size()) + " points");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("function values must be finite");
  const double shift = values_[PointedMetricSpace::base()];
  if (shift != 0.0)
    for (double& v : values_) v -= shift;
  norm_ = freegeo::lip_norm(space_, values_);
}

LipFunction LipFunction::zero(const PointedMetricSpace& space) {
  return LipFunction(space, std::vector<double>(space.size(), 0.0));
}

LipFunction LipFunction::in_space(const PointedMetricSpace& other) const {
  return LipFunction(other, values_);
}

namespace {

void require_same(const LipFunction& a, const LipFunction& b) {
  if (!same_space(a.space(), b.space())) throw Error("functions live on different spaces");
}

}  // namespace

LipFunction operator+(const LipFunction& a, const LipFunction& b) {
  require_same(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a(i) + b(i);
  return LipFunction(a.space(), std::move(v));
}

LipFunction operator-(const LipFunction& a, const LipFunction& b) {
  require_same(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a(i) - b(i);
  return LipFunction(a.space(), std::move(v));
}

LipFunction operator*(double s, const LipFunction& f) {
  std::vector<double> v(f.values());
  for (double& x : v) x *= s;
  return LipFunction(f.space(), std::move(v));
}

double lip_norm(const PointedMetricSpace& space, std::span<const double> values) {
  double best = 0.0;
  for (std::size_t p = 0; p < space.size(); ++p)
    for (std::size_t q = p + 1; q < space.size(); ++q)
      best = std::max(best, std::abs(values[p] - values[q]) / space.dist(p, q));
  return best;
}

double pair_slope(const LipFunction& f, std::size_t p, std::size_t q) {
  if (p == q) throw Error("slope needs two distinct points");
  if (p >= f.size() || q >= f.size()) throw Error("slope index out of range");
  return (f(p) - f(q)) / f.space().dist(p, q);
}

std::pair<std::size_t, std::size_t> steepest_pair(const LipFunction& f) {
  std::pair<std::size_t, std::size_t> arg{0, 0};
  double best = -1.0;
  for (std::size_t p = 0; p < f.size(); ++p)
    for (std::size_t q = 0; q < f.size(); ++q) {
      if (p == q) continue;
      const double s = pair_slope(f, p, q);
      if (s > best) {
        best = s;
        arg = {p, q};
      }
    }
  return arg;
}

LipFunction aux_f_xy(const PointedMetricSpace& space, std::size_t x, std::size_t y) {
  if (x == y) throw Error("aux_f_xy needs x != y");
  if (x >= space.size() || y >= space.size()) throw Error("aux_f_xy index out of range");
  const double half = space.dist(x, y) / 2.0;
  std::vector<double> v(space.size());
  for (std::size_t z = 0; z < space.size(); ++z) {
    const double a = space.dist(z, y);
    const double b = space.dist(z, x);
    v[z] = half * (a - b) / (a + b);
  }
  LipFunction f(space, std::move(v));
  if (f.lip_norm() > 1.0 + tolerances().lp)
    throw Error("aux_f_xy has norm " + std::to_string(f.lip_norm()) + " > 1");
  return f;
}

std::optional<double> peaking_check(const LipFunction& f, std::size_t x, std::size_t y) {
  if (x == y) throw Error("peaking check needs x != y");
  if (x >= f.size() || y >= f.size()) throw Error("peaking index out of range");
  const double tau = tolerances().lp;
  if (std::abs(f.lip_norm() - 1.0) > tau) return std::nullopt;
  if (std::abs(pair_slope(f, x, y) - 1.0) > tau) return std::nullopt;
  double gamma = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p)
    for (std::size_t q = p + 1; q < f.size(); ++q) {
      if ((p == x && q == y) || (p == y && q == x)) continue;
      gamma = std::max(gamma, std::abs(pair_slope(f, p, q)));
    }
  if (gamma >= 1.0 - tau) return std::nullopt;
  return gamma;
}

LipFunction mcshane_extend(const PointedMetricSpace& space, std::span<const std::size_t> subset,
                           std::span<const double> subset_values, double lipschitz,
                           std::optional<Clip> clip) {
  const double tau = tolerances().lp;
  if (subset.size() != subset_values.size())
    throw Error("extension needs one value per subset point");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
    throw Error("extension constant must be finite and nonnegative");
  const std::size_t n = space.size();
  std::vector<double> values(n, 0.0);
  std::vector<bool> in(n, false);
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const std::size_t p = subset[k];
    if (p >= n) throw Error("extension subset index out of range");
    if (in[p] && values[p] != subset_values[k])
      throw Error("conflicting values at point " + std::to_string(p));
    in[p] = true;
    values[p] = subset_values[k];
    if (clip && (subset_values[k] < clip->lo - tau || subset_values[k] > clip->hi + tau))
      throw Error("value at point " + std::to_string(p) + " lies outside the clip range");
  }
  const std::size_t base = PointedMetricSpace::base();
  if (!in[base]) throw Error("extension subset must contain the base point");
  if (std::abs(values[base]) > tau) throw Error("extension data must vanish at the base point");
  values[base] = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const std::size_t p = subset[a], q = subset[b];
      if (p == q) continue;
      if (std::abs(values[p] - values[q]) > (lipschitz + tau) * space.dist(p, q))
        throw Error("extension data is not " + std::to_string(lipschitz) +
                    "-Lipschitz on the pair (" + std::to_string(p) + "," + std::to_string(q) +
                    ")");
    }
  for (std::size_t z = 0; z < n; ++z) {
    if (in[z]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n; ++p)
      if (in[p]) best = std::min(best, values[p] + lipschitz * space.dist(z, p));
    if (clip) best = std::clamp(best, clip->lo, clip->hi);
    values[z] = best;
  }
  return LipFunction(space, std::move(values));
}

CutoffXi::CutoffXi(double beta, double big_t) : beta_(beta), big_t_(big_t) {
  if (!(beta > 0.0) || !(big_t > beta) || !std::isfinite(big_t))
    throw Error("cutoff needs 0 < beta < T");
}

double CutoffXi::operator()(double t) const {
  if (t <= beta_) return 1.0;
  if (t >= big_t_) return 0.0;
  return (big_t_ - t) / (big_t_ - beta_);
}

double cutoff_t0(double beta, double gamma, double big_t) {
  return (gamma / 4.0) * (big_t - beta) / (beta + gamma / 2.0);
}

double big_t_lhs(double beta, double gamma, double big_t) {
  const double t0 = cutoff_t0(beta, gamma, big_t);
  return (2.0 * beta + 1.5 * gamma) / (t0 + gamma) + (beta + gamma / 2.0) / (big_t - beta);
}

CutoffXi select_cutoff(double beta, double gamma) {
  if (!(gamma > 0.0)) throw Error("cutoff selection needs gamma > 0");
  for (int k = 0; k < 1100; ++k) {
    const double t = beta + std::ldexp(1.0, k);
    if (big_t_lhs(beta, gamma, t) < 0.75) return CutoffXi(beta, t);
  }
  throw Error("no admissible cutoff T found");
}

FGamma f_gamma_construct(const PointedMetricSpace& space, double gamma,
                         std::span<const std::pair<std::size_t, std::size_t>> pairs,
                         const LipFunction& f) {
  const double tau = tolerances().lp;
  const std::size_t n = space.size();
  if (!same_space(space, f.space())) throw Error("f must live on the unfattened space");
  if (pairs.empty()) throw Error("f_gamma needs at least one pair");
  if (f.lip_norm() > 1.0 + tau) throw Error("f must have norm at most 1");

  enum class Role { Other, X, Y };
  std::vector<Role> role(n, Role::Other);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [x, y] = pairs[i];
    if (x >= n || y >= n || x == y) throw Error("pair " + std::to_string(i) + " is invalid");
    if (role[x] == Role::Y || role[y] == Role::X)
      throw Error("pair " + std::to_string(i) + " shares an endpoint with the opposite side");
    role[x] = Role::X;
    role[y] = Role::Y;
    if (std::abs(f(x) - f(y) - space.dist(x, y)) > tau * std::max(1.0, space.dist(x, y)))
      throw Error("f does not norm pair " + std::to_string(i));
  }

  std::vector<double> v(n);
  for (std::size_t z = 0; z < n; ++z) {
    switch (role[z]) {
      case Role::X: v[z] = f(z) + gamma; break;
      case Role::Y: v[z] = f(z); break;
      case Role::Other: v[z] = f(z) + gamma / 2.0; break;
    }
  }
  const auto fat = gamma_fatten(space, gamma);
  LipFunction fg(fat, std::move(v));

  // Cases: x_i against y_j, and either endpoint against an outside point.
  std::vector<bool> in_n(n, false);
  in_n[PointedMetricSpace::base()] = true;
  for (auto [x, y] : pairs) in_n[x] = in_n[y] = true;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n; ++p) {
    if (role[p] == Role::Other) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      double allowed;
      if (role[p] == Role::X && role[q] == Role::Y) {
        allowed = space.dist(p, q) + gamma;
      } else if (role[q] == Role::Other && !in_n[q]) {
        allowed = space.dist(p, q) + gamma / 2.0;
      } else {
        continue;
      }
      margin = std::min(margin, allowed - std::abs(fg(p) - fg(q)));
    }
  }
  if (margin < -tau) throw Error("f_gamma case bound fails by " + std::to_string(-margin));
  if (fg.lip_norm() > 1.0 + tau)
    throw Error("f_gamma has norm " + std::to_string(fg.lip_norm()) + " > 1");

  std::vector<std::size_t> subset;
  for (std::size_t p = 0; p < n; ++p)
    if (in_n[p]) subset.push_back(p);
  const double beta = radius_beta(space, subset);
  double off = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    if (!in_n[p]) off = std::max(off, std::abs(fg(p)));
  const double radius_margin = beta + gamma / 2.0 - off;
  if (radius_margin < -tau)
    throw Error("f_gamma exceeds beta + gamma/2 off N; clip f to [-beta, beta] first");
  return {std::move(fg), margin, radius_margin};
}

LipFunction g_gamma_construct(const LipFunction& f_gamma, const CutoffXi& xi,
                              const PointedMetricSpace& original) {
  if (original.size() != f_gamma.size()) throw Error("cutoff space has the wrong size");
  std::vector<double> v(f_gamma.size());
  for (std::size_t z = 0; z < v.size(); ++z)
    v[z] = f_gamma(z) * xi(original.dist(PointedMetricSpace::base(), z));
  return LipFunction(f_gamma.space(), std::move(v));
}

}  // namespace freegeo
