#include "freegeo/free_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freegeo/config.hpp"

namespace freegeo {

FreeElement::FreeElement(PointedMetricSpace space, std::vector<double> masses)
    : space_(std::move(space)), masses_(std::move(masses)) {
  if (masses_.size() != space_.size())
    throw Error("element has " + std::to_string(masses_.size()) + " masses for " +
                std::to_string(space_.size()) + " points");
  double rest = 0.0;
  for (std::size_t p = 1; p < masses_.size(); ++p) {
    if (!std::isfinite(masses_[p])) throw Error("masses must be finite");
    rest += masses_[p];
  }
  masses_[PointedMetricSpace::base()] = -rest;
}

FreeElement FreeElement::zero(const PointedMetricSpace& space) {
  return FreeElement(space, std::vector<double>(space.size(), 0.0));
}

FreeElement FreeElement::delta(const PointedMetricSpace& space, std::size_t p) {
  if (p >= space.size()) throw Error("delta index out of range");
  std::vector<double> m(space.size(), 0.0);
  m[p] = 1.0;
  return FreeElement(space, std::move(m));
}

FreeElement FreeElement::molecule(const PointedMetricSpace& space, std::size_t x, std::size_t y) {
  if (x == y) throw Error("molecule needs x != y");
  if (x >= space.size() || y >= space.size()) throw Error("molecule index out of range");
  std::vector<double> m(space.size(), 0.0);
  const double d = space.dist(x, y);
  m[x] += 1.0 / d;
  m[y] -= 1.0 / d;
  return FreeElement(space, std::move(m));
}

bool FreeElement::is_zero() const {
  return std::all_of(masses_.begin(), masses_.end(), [](double v) { return v == 0.0; });
}

FreeElement FreeElement::in_space(const PointedMetricSpace& other) const {
  return FreeElement(other, masses_);
}

namespace {

void require_same(const PointedMetricSpace& a, const PointedMetricSpace& b) {
  if (!same_space(a, b)) throw Error("operands live on different spaces");
}

}  // namespace

FreeElement operator+(const FreeElement& a, const FreeElement& b) {
  require_same(a.space(), b.space());
  std::vector<double> m(a.size());
  for (std::size_t p = 0; p < m.size(); ++p) m[p] = a[p] + b[p];
  return FreeElement(a.space(), std::move(m));
}

FreeElement operator-(const FreeElement& a, const FreeElement& b) {
  require_same(a.space(), b.space());
  std::vector<double> m(a.size());
  for (std::size_t p = 0; p < m.size(); ++p) m[p] = a[p] - b[p];
  return FreeElement(a.space(), std::move(m));
}

FreeElement operator*(double s, const FreeElement& e) {
  std::vector<double> m(e.masses());
  for (double& v : m) v *= s;
  return FreeElement(e.space(), std::move(m));
}

double MoleculeCombination::total() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.lambda;
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> MoleculeCombination::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& t : terms) out.emplace_back(t.x, t.y);
  return out;
}

FreeElement MoleculeCombination::to_element(const PointedMetricSpace& space) const {
  std::vector<double> m(space.size(), 0.0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (!(t.lambda > 0.0)) throw Error("molecule weight " + std::to_string(i) + " is not positive");
    if (t.x == t.y) throw Error("molecule " + std::to_string(i) + " has x == y");
    if (t.x >= space.size() || t.y >= space.size())
      throw Error("molecule " + std::to_string(i) + " index out of range");
    const double d = space.dist(t.x, t.y);
    m[t.x] += t.lambda / d;
    m[t.y] -= t.lambda / d;
  }
  return FreeElement(space, std::move(m));
}

double pairing(const LipFunction& f, const FreeElement& mu) {
  require_same(f.space(), mu.space());
  double s = 0.0;
  for (std::size_t p = 0; p < mu.size(); ++p) s += mu[p] * f(p);
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> constraint_pairs(const PointedMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      bool implied = false;
      for (std::size_t z = 0; z < n && !implied; ++z) {
        if (z == p || z == q) continue;
        if (space.has_exact()) {
          implied = space.exact_dist(p, z) + space.exact_dist(z, q) <= space.exact_dist(p, q);
        } else {
          implied = space.dist(p, z) + space.dist(z, q) <= space.dist(p, q);
        }
      }
      if (!implied) out.emplace_back(p, q);
    }
  return out;
}

namespace {

constexpr std::size_t kBase = 0;

std::size_t col(std::size_t p) { return p - 1; }

// Adds |f(p) - f(q)| <= scale d(p,q) over the constraint pairs; base pairs
// become column bounds, the others range rows.
void add_lipschitz(LpProblem& lp, const PointedMetricSpace& space,
                   const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double scale) {
  for (std::size_t p = 1; p < space.size(); ++p) lp.set_free(col(p));
  for (auto [p, q] : pairs) {
    const double r = scale * space.dist(p, q);
    if (p == kBase) {
      lp.lower[col(q)] = -r;
      lp.upper[col(q)] = r;
    } else {
      lp.add_range_row({{col(p), 1.0}, {col(q), -1.0}}, -r, r);
    }
  }
}

std::vector<LpProblem::Term> pairing_terms(const FreeElement& mu) {
  std::vector<LpProblem::Term> terms;
  for (std::size_t p = 1; p < mu.size(); ++p)
    if (mu[p] != 0.0) terms.emplace_back(col(p), mu[p]);
  return terms;
}

std::vector<double> function_values(const LpSolution& s, std::size_t n) {
  std::vector<double> v(n, 0.0);
  for (std::size_t p = 1; p < n; ++p) v[p] = s.primal[col(p)];
  return v;
}

void require_certified(const LpSolution& s, const char* what) {
  const double tau = tolerances().lp;
  if (!s.optimal()) throw LpFailure(std::string(what) + ": LP not optimal");
  if (!s.certified(tau))
    throw LpFailure(std::string(what) + ": LP certificate out of tolerance (primal " +
                    std::to_string(s.primal_residual) + ", dual " +
                    std::to_string(s.dual_residual) + ", gap " + std::to_string(s.duality_gap) +
                    ")");
}

void require_nonzero(const FreeElement& mu) {
  if (mu.is_zero()) throw Error("operation needs a nonzero element");
}

}  // namespace

NormCertificate free_norm_certified(const FreeElement& mu) {
  const auto& space = mu.space();
  const std::size_t n = space.size();
  const auto pairs = constraint_pairs(space);
  NormCertificate cert;

  if (n == 1) {
    cert.flow.status = cert.lipschitz.status = LpStatus::Optimal;
    return cert;
  }

  LpProblem dual(n - 1, ObjectiveSense::Maximize);
  add_lipschitz(dual, space, pairs, 1.0);
  for (std::size_t p = 1; p < n; ++p) dual.objective[col(p)] = mu[p];
  cert.lipschitz = solve(dual);
  require_certified(cert.lipschitz, "free norm (Lipschitz side)");

  for (auto [p, q] : pairs) {
    cert.arcs.emplace_back(p, q);
    cert.arcs.emplace_back(q, p);
  }
  LpProblem flow(cert.arcs.size(), ObjectiveSense::Minimize);
  for (std::size_t a = 0; a < cert.arcs.size(); ++a)
    flow.objective[a] = space.dist(cert.arcs[a].first, cert.arcs[a].second);
  for (std::size_t p = 1; p < n; ++p) {
    std::vector<LpProblem::Term> terms;
    for (std::size_t a = 0; a < cert.arcs.size(); ++a) {
      if (cert.arcs[a].first == p) terms.emplace_back(a, 1.0);
      if (cert.arcs[a].second == p) terms.emplace_back(a, -1.0);
    }
    flow.add_row(terms, RowSense::Equal, mu[p]);
  }
  cert.flow = solve(flow);
  require_certified(cert.flow, "free norm (flow side)");

  cert.value = 0.5 * (cert.flow.optimum + cert.lipschitz.optimum);
  if (cert.gap() > tolerances().lp * (1.0 + std::abs(cert.value)))
    throw LpFailure("flow and Lipschitz optima disagree by " + std::to_string(cert.gap()));
  return cert;
}

double free_norm(const FreeElement& mu) { return free_norm_certified(mu).value; }

LipFunction norming_functional(const FreeElement& mu) {
  require_nonzero(mu);
  const auto cert = free_norm_certified(mu);
  return LipFunction(mu.space(), function_values(cert.lipschitz, mu.size()));
}

MoleculeCombination optimal_representation(const FreeElement& mu) {
  require_nonzero(mu);
  const auto cert = free_norm_certified(mu);
  MoleculeCombination out;
  for (std::size_t a = 0; a < cert.arcs.size(); ++a) {
    const double w = cert.flow.primal[a];
    if (w <= 1e-13) continue;
    const auto [p, q] = cert.arcs[a];
    out.terms.push_back({w * mu.space().dist(p, q), p, q});
  }
  return out;
}

DualFace::DualFace(FreeElement mu) : mu_(std::move(mu)) {
  require_nonzero(mu_);
  norm_ = free_norm(mu_);
  slack_ = 0.1 * tolerances().lp * std::max(1.0, norm_);
}

DualFace dual_face(const FreeElement& mu) { return DualFace(mu); }

LpProblem DualFace::base_problem(std::size_t extra, double scale) const {
  const std::size_t n = space().size();
  LpProblem lp(n - 1 + extra);
  add_lipschitz(lp, space(), constraint_pairs(space()), scale);
  lp.add_row(pairing_terms(mu_), RowSense::GreaterEqual, scale * norm_ - slack_);
  return lp;
}

std::vector<Range> face_coordinate_ranges(const DualFace& face) {
  const std::size_t n = face.space().size();
  std::vector<Range> out(n);
  LpProblem lp = face.base_problem();
  for (std::size_t p = 1; p < n; ++p) {
    std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
    lp.objective[col(p)] = 1.0;
    lp.sense = ObjectiveSense::Minimize;
    const auto lo = solve(lp);
    require_certified(lo, "face range");
    lp.sense = ObjectiveSense::Maximize;
    const auto hi = solve(lp);
    require_certified(hi, "face range");
    out[p] = {lo.optimum, hi.optimum};
  }
  return out;
}

bool is_gateaux(const FreeElement& mu, double tol) {
  const auto ranges = face_coordinate_ranges(dual_face(mu));
  return std::all_of(ranges.begin(), ranges.end(),
                     [tol](const Range& r) { return r.width() <= tol; });
}

Projection project_onto_face(const DualFace& face, const LipFunction& h, double scale) {
  const auto& space = face.space();
  require_same(space, h.space());
  const std::size_t n = space.size();
  if (n == 1) return {h, 0.0, {}};
  LpProblem lp = face.base_problem(1, scale);
  const std::size_t t = n - 1;
  lp.objective[t] = 1.0;
  for (auto [p, q] : constraint_pairs(space)) {
    const double d = space.dist(p, q);
    const double target = h(p) - h(q);
    std::vector<LpProblem::Term> minus{{t, -d}}, plus{{t, d}};
    if (p != kBase) {
      minus.emplace_back(col(p), 1.0);
      plus.emplace_back(col(p), 1.0);
    }
    minus.emplace_back(col(q), -1.0);
    plus.emplace_back(col(q), -1.0);
    lp.add_row(minus, RowSense::LessEqual, target);
    lp.add_row(plus, RowSense::GreaterEqual, target);
  }
  auto sol = solve(lp);
  require_certified(sol, "face projection");
  LipFunction phi(space, function_values(sol, n));
  const double dist = (phi - h).lip_norm();
  return {std::move(phi), dist, std::move(sol)};
}

double distance_to_face(const DualFace& face, const LipFunction& f) {
  return project_onto_face(face, f).distance;
}

LipFunction slab_point(const DualFace& face, std::span<const double> objective, double eta) {
  const auto& space = face.space();
  const std::size_t n = space.size();
  if (objective.size() != n) throw Error("slab objective needs one entry per point");
  if (!(eta >= 0.0) || !(eta < 1.0)) throw Error("slab depth must lie in [0, 1)");
  LpProblem lp(n - 1, ObjectiveSense::Maximize);
  add_lipschitz(lp, space, constraint_pairs(space), 1.0);
  lp.add_row(pairing_terms(face.element()), RowSense::GreaterEqual,
             face.norm() * (1.0 - eta) - face.slack());
  for (std::size_t p = 1; p < n; ++p) lp.objective[col(p)] = objective[p];
  const auto sol = solve(lp);
  require_certified(sol, "slab point");
  return LipFunction(space, function_values(sol, n));
}

std::optional<LipFunction> common_norming_function(
    const PointedMetricSpace& space, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  const std::size_t n = space.size();
  for (auto [x, y] : pairs)
    if (x == y || x >= n || y >= n) throw Error("invalid pair for a norming function");
  if (n == 1) return LipFunction::zero(space);
  LpProblem lp(n - 1);
  add_lipschitz(lp, space, constraint_pairs(space), 1.0);
  for (auto [x, y] : pairs) {
    std::vector<LpProblem::Term> terms;
    if (x != kBase) terms.emplace_back(col(x), 1.0);
    if (y != kBase) terms.emplace_back(col(y), -1.0);
    lp.add_row(terms, RowSense::Equal, space.dist(x, y));
  }
  const auto sol = solve(lp);
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  require_certified(sol, "common norming function");
  LipFunction f(space, function_values(sol, n));
  // The LP tolerance can leave the equalities slightly off; recheck them.
  const double tau = tolerances().lp;
  for (auto [x, y] : pairs)
    if (std::abs(pair_slope(f, x, y) - 1.0) > tau) return std::nullopt;
  if (f.lip_norm() > 1.0 + tau) return std::nullopt;
  return f;
}

}  // namespace freegeo
