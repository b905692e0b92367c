#include "freegeo/ssd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "freegeo/config.hpp"

namespace freegeo {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kAttainment = 1e-8;
constexpr std::size_t kBase = PointedMetricSpace::base();
constexpr std::size_t kRhoSamples = 32;
constexpr std::uint64_t kRhoSeed = 1;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void push(std::vector<Check>& checks, std::string name, double value, double bound,
          double tolerance = 0.0) {
  checks.push_back(make_check(std::move(name), value, bound, tolerance));
}

std::string first_failure(std::span<const Check> checks) {
  for (const auto& c : checks)
    if (!c.passed) return "check failed: " + c.name + " (margin " + fmt(c.margin) + ")";
  return {};
}

std::vector<bool> membership(std::size_t n, std::span<const std::size_t> subset) {
  std::vector<bool> in(n, false);
  for (auto p : subset) in[p] = true;
  return in;
}

double abs_slope(const LipFunction& f, std::size_t p, std::size_t q) {
  return std::abs(pair_slope(f, p, q));
}

FreeElement restrict_to(const FreeElement& mu, const Subspace& sub) {
  std::vector<double> m;
  m.reserve(sub.original.size());
  for (auto p : sub.original) m.push_back(mu[p]);
  return FreeElement(sub.space, std::move(m));
}

LipFunction restrict_to(const LipFunction& f, const Subspace& sub) {
  std::vector<double> v;
  v.reserve(sub.original.size());
  for (auto p : sub.original) v.push_back(f(p));
  return LipFunction(sub.space, std::move(v));
}

}  // namespace

Check make_check(std::string name, double value, double bound, double tolerance) {
  Check c{std::move(name), value, bound, bound - value, false};
  c.passed = c.margin >= -tolerance;
  return c;
}

bool all_passed(std::span<const Check> checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<double> probe_objective(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> c(n);
  for (auto& v : c) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2.0 * u - 1.0;
  }
  return c;
}

ModulusCurve exposedness_probe(const FreeElement& mu, std::span<const double> eta_grid,
                               std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error("probe needs at least one sample per depth");
  for (double eta : eta_grid)
    if (!(eta >= 0.0) || !(eta < 1.0)) throw Error("slab depth must lie in [0, 1)");
  const DualFace face(mu);
  const double tau = tolerances().lp;
  std::vector<double> grid(eta_grid.begin(), eta_grid.end());
  std::sort(grid.begin(), grid.end());

  ModulusCurve curve;
  curve.seed = seed;
  curve.norm = face.norm();
  std::mt19937_64 rng(seed);
  double envelope = 0.0;
  for (double eta : grid) {
    ModulusPoint pt{eta, 0.0, 0.0, samples};
    for (std::size_t s = 0; s < samples; ++s) {
      const auto c = probe_objective(rng, mu.size());
      const LipFunction f = slab_point(face, c, eta);
      if (f.lip_norm() > 1.0 + tau || pairing(f, mu) < face.norm() * (1.0 - eta) - tau)
        throw Error("slab point left the slab");
      pt.raw_worst = std::max(pt.raw_worst, distance_to_face(face, f));
    }
    envelope = std::max(envelope, pt.raw_worst);
    pt.worst = envelope;
    curve.points.push_back(pt);
  }
  return curve;
}

LipFunction perturbed_norming(const DualFace& face, double eta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto c = probe_objective(rng, face.space().size());
  LipFunction f = slab_point(face, c, eta);
  if (f.lip_norm() <= 0.0) throw Error("slab point vanished");
  return (1.0 / f.lip_norm()) * f;
}

// ---------------------------------------------------------------------------

double ssd1_gamma_eps(double gamma_peak, double eps) {
  return 0.5 * eps * (1.0 - gamma_peak) / (4.0 - eps);
}

Ssd1Result ssd1_perturb(std::size_t x, std::size_t y, const LipFunction& f_peaking,
                        double gamma_peak, const LipFunction& g, double eps) {
  const double tau = tolerances().lp;
  if (!(eps > 0.0) || !(eps < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (!same_space(f_peaking.space(), g.space()))
    throw PreconditionError("f and g live on different spaces");
  const auto peak = peaking_check(f_peaking, x, y);
  if (!peak) throw PreconditionError("f does not peak at the pair");
  if (*peak > gamma_peak + tau)
    throw PreconditionError("f peaks with constant " + fmt(*peak) + " > " + fmt(gamma_peak));
  if (!(gamma_peak >= 0.0) || !(gamma_peak < 1.0))
    throw PreconditionError("peaking constant must lie in [0, 1)");
  if (std::abs(g.lip_norm() - 1.0) > tau)
    throw PreconditionError("g must have norm one (got " + fmt(g.lip_norm()) + ")");
  const double gamma_eps = ssd1_gamma_eps(gamma_peak, eps);
  const double closeness = pair_slope(g, x, y);
  if (!(closeness > 1.0 - gamma_eps))
    throw PreconditionError("g is not close enough: <g,m_xy> = " + fmt(closeness) +
                            " <= 1 - gamma_eps = " + fmt(1.0 - gamma_eps));

  const LipFunction h = (1.0 - eps / 4.0) * g + (eps / 4.0) * f_peaking;
  const double h_norm = h.lip_norm();
  LipFunction h_hat = (1.0 / h_norm) * h;
  const double distance = (h_hat - g).lip_norm();
  const double bound = 1.0 - (1.0 - eps / 4.0) * (1.0 - gamma_eps) + eps / 4.0;

  Ssd1Result r{std::move(h_hat), gamma_eps, h_norm, distance, bound, {}};
  push(r.checks, "h attains its norm at (x,y)", std::abs(h_norm - pair_slope(h, x, y)), 0.0, tau);
  push(r.checks, "distance from g", distance, bound, tau);
  return r;
}

// ---------------------------------------------------------------------------

const char* to_string(PerturbationStatus s) {
  switch (s) {
    case PerturbationStatus::Certified: return "certified";
    case PerturbationStatus::RhoTooLarge: return "rho_too_large";
    case PerturbationStatus::PreconditionFailed: return "precondition_failed";
  }
  return "unknown";
}

Main1Setup main1_prepare(const PointedMetricSpace& space, double gamma,
                         const MoleculeCombination& combination,
                         const std::optional<LipFunction>& f, double eps) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw PreconditionError("gamma must be positive");
  if (!(eps > 0.0) || !(eps < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  const double tau = tolerances().lp;
  Main1Setup s{.space = space, .fattened = gamma_fatten(space, gamma)};
  s.gamma = gamma;
  s.eps = eps;
  s.combination = combination;
  auto fail = [&s](std::string msg) {
    s.status = PerturbationStatus::PreconditionFailed;
    s.message = std::move(msg);
    return s;
  };
  const std::size_t n = space.size();
  if (combination.terms.empty()) return fail("the combination has no molecules");

  try {
    s.mu = combination.to_element(s.fattened);
  } catch (const Error& e) {
    return fail(e.what());
  }
  const double total = combination.total();
  push(s.checks, "weights sum to one", std::abs(total - 1.0), 0.0, tau);
  if (!s.checks.back().passed) return fail("weights sum to " + fmt(total) + ", not 1");

  std::vector<bool> is_x(n, false), is_y(n, false);
  for (const auto& m : combination.terms) is_x[m.x] = is_y[m.y] = true;
  std::size_t shared = 0;
  std::size_t witness = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (is_x[p] && is_y[p]) {
      if (shared++ == 0) witness = p;
    }
  push(s.checks, "endpoint sets disjoint", static_cast<double>(shared), 0.0);
  if (shared > 0)
    return fail("disjointness: point " + std::to_string(witness) +
                " is both a left and a right endpoint");

  s.subset.push_back(kBase);
  for (std::size_t p = 1; p < n; ++p)
    if (is_x[p] || is_y[p]) s.subset.push_back(p);
  const auto in_n = membership(n, s.subset);
  s.beta = radius_beta(space, s.subset);
  const auto pairs = combination.pairs();

  std::optional<LipFunction> base_f = f;
  if (base_f) {
    if (!same_space(base_f->space(), space)) return fail("f must live on the unfattened space");
  } else {
    base_f = common_norming_function(space, pairs);
    if (!base_f) return fail("no common norming function exists on the unfattened space");
  }
  double worst_pair = 0.0;
  for (auto [x, y] : pairs) worst_pair = std::max(worst_pair, std::abs(pair_slope(*base_f, x, y) - 1.0));
  push(s.checks, "f norms every pair", worst_pair, 0.0, tau);
  push(s.checks, "f is 1-Lipschitz", base_f->lip_norm(), 1.0, tau);
  if (auto msg = first_failure(s.checks); !msg.empty()) return fail(msg);

  try {
    std::vector<double> vals;
    for (auto p : s.subset) vals.push_back((*base_f)(p));
    s.f = mcshane_extend(space, s.subset, vals, 1.0, Clip{-s.beta, s.beta});
    auto fg = f_gamma_construct(space, gamma, pairs, *s.f);
    s.f_gamma = fg.function;
    push(s.checks, "f_gamma has norm one", std::abs(s.f_gamma->lip_norm() - 1.0), 0.0, tau);
    push(s.checks, "f_gamma pairs to one", std::abs(pairing(*s.f_gamma, *s.mu) - 1.0), 0.0, tau);
    push(s.checks, "f_gamma case bounds", -fg.case_margin, 0.0, tau);
    push(s.checks, "f_gamma bounded off N", s.beta + gamma / 2.0 - fg.radius_margin,
         s.beta + gamma / 2.0, tau);

    const CutoffXi xi = select_cutoff(s.beta, gamma);
    s.big_t = xi.big_t();
    s.t0 = cutoff_t0(s.beta, gamma, s.big_t);
    push(s.checks, "cutoff condition", big_t_lhs(s.beta, gamma, s.big_t), 0.75);
    s.g_gamma = g_gamma_construct(*s.f_gamma, xi, space);
  } catch (const Error& e) {
    return fail(e.what());
  }
  push(s.checks, "G_gamma pairs to one", std::abs(pairing(*s.g_gamma, *s.mu) - 1.0), 0.0, tau);
  push(s.checks, "G_gamma has norm at most one", s.g_gamma->lip_norm(), 1.0, tau);

  double inside = 0.0;
  bool any_inside = false;
  s.s_sup = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      if (in_n[p] && in_n[q]) continue;
      const double v = abs_slope(*s.g_gamma, p, q);
      s.s_sup = std::max(s.s_sup, v);
      if (space.dist(kBase, p) <= s.beta && space.dist(kBase, q) <= s.beta) {
        inside = std::max(inside, v);
        any_inside = true;
      }
    }
  if (any_inside)
    push(s.checks, "inside-radius pairs leaving N",
         inside, (2.0 * s.beta + gamma / 2.0) / (2.0 * s.beta + gamma), tau);
  push(s.checks, "off-N supremum below one", s.s_sup, 1.0);
  if (!(s.s_sup < 1.0)) return fail("off-N supremum S = " + fmt(s.s_sup) + " is not below 1");

  s.c = (std::max(s.s_sup, 0.5 + 10.0 * tau) + 1.0) / 2.0;
  s.k = gamma * (s.c - 0.5) / (1.0 - s.c);
  const double target = (s.k + gamma / 2.0) / (s.k + gamma);
  push(s.checks, "off-N supremum below (K+gamma/2)/(K+gamma) by 10 tau", s.s_sup,
       target - 10.0 * tau);

  const double root = std::sqrt(eps);
  const double room = root * gamma / (2.0 * (s.k + gamma));
  const double cost = s.beta * eps / gamma;
  s.rho_parameter = 0.5 * (room - cost) / (1.0 - root);
  s.bound = std::max(eps, cost) + 2.0 * root;
  push(s.checks, "rho positive", cost, room);
  if (!(s.rho_parameter > 0.0)) return fail("ε too large for (β, γ, K)");

  const Subspace sub = subspace(s.fattened, s.subset);
  const FreeElement mu_n = restrict_to(*s.mu, sub);
  s.rho = s.rho_parameter;
  double worst = kInfinity;
  for (int j = 0; j < 60; ++j, s.rho /= 2.0) {
    const double grid[] = {(1.0 - root) * s.rho};
    worst = exposedness_probe(mu_n, grid, kRhoSamples, kRhoSeed).points.front().worst;
    if (worst <= eps / 2.0) break;
  }
  push(s.checks, "face probe on N at depth (1 - sqrt(eps)) rho", worst, eps / 2.0);
  if (auto msg = first_failure(s.checks); !msg.empty()) return fail(msg);
  return s;
}

PerturbationResult main1_pipeline(const Main1Setup& setup, const LipFunction& g) {
  PerturbationResult r{.setup = setup};
  r.checks = setup.checks;
  if (!setup.ready()) {
    r.status = setup.status;
    r.message = setup.message;
    return r;
  }
  auto fail = [&r](std::string msg) {
    r.status = PerturbationStatus::PreconditionFailed;
    r.message = std::move(msg);
    return r;
  };
  const double tau = tolerances().lp;
  const auto& fat = setup.fattened;
  const auto& mu = *setup.mu;
  const std::size_t n = fat.size();
  const double root = std::sqrt(setup.eps);
  if (!same_space(g.space(), fat)) return fail("g must live on the fattened space");
  r.g = g;

  push(r.checks, "g has norm one", std::abs(g.lip_norm() - 1.0), 0.0, tau);
  if (!r.checks.back().passed) return fail("g has norm " + fmt(g.lip_norm()) + ", not 1");
  const double closeness = 1.0 - pairing(g, mu);
  push(r.checks, "g within rho of norming mu", closeness, setup.rho);
  if (!(closeness < setup.rho))
    return fail("<g,mu> = " + fmt(1.0 - closeness) + " <= 1 - rho = " + fmt(1.0 - setup.rho));

  const LipFunction h = (1.0 - root) * g + root * (*setup.g_gamma);
  r.h = h;
  r.h_norm = h.lip_norm();
  const auto in_n = membership(n, setup.subset);
  double off = 0.0, on = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const double v = abs_slope(h, p, q);
      if (in_n[p] && in_n[q]) on = std::max(on, v);
      else off = std::max(off, v);
    }
  push(r.checks, "h pairs with mu above its off-N slopes", off, pairing(h, mu));
  if (!(off < pairing(h, mu))) return fail(first_failure(r.checks));
  push(r.checks, "h attains its norm on N", std::abs(r.h_norm - on), 0.0, tau);

  const Subspace sub = subspace(fat, setup.subset);
  const DualFace face(restrict_to(mu, sub));
  push(r.checks, "mu keeps norm one on N", std::abs(face.norm() - 1.0), 0.0, tau);
  const Projection proj = project_onto_face(face, restrict_to(h, sub), r.h_norm);
  r.projection_distance = proj.distance;
  push(r.checks, "face projection below eps", proj.distance, setup.eps);
  if (!(proj.distance < setup.eps)) {
    r.status = PerturbationStatus::RhoTooLarge;
    r.message = "projection distance " + fmt(proj.distance) + " >= eps; g must be closer than " +
                "1 - rho to norming mu";
    return r;
  }

  std::vector<double> v = h.values();
  for (std::size_t k = 0; k < sub.original.size(); ++k) v[sub.original[k]] = proj.function(k);
  const LipFunction psi(fat, std::move(v));
  r.psi = psi;
  const double attained = pairing(psi, mu);
  double inside = 0.0, outside = 0.0, mixed = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const double s = abs_slope(psi, p, q);
      if (in_n[p] && in_n[q]) inside = std::max(inside, s);
      else if (!in_n[p] && !in_n[q]) outside = std::max(outside, s);
      else mixed = std::max(mixed, s);
    }
  push(r.checks, "psi slopes inside N", inside, attained, tau);
  push(r.checks, "psi slopes outside N", outside, attained, tau);
  push(r.checks, "psi slopes across N", mixed, attained, tau);
  push(r.checks, "psi - h", (psi - h).lip_norm(),
       proj.distance * (setup.beta + setup.gamma) / setup.gamma, tau);
  push(r.checks, "h - g", (h - g).lip_norm(), 2.0 * root, tau);

  r.attainment_gap = std::abs(attained - psi.lip_norm());
  push(r.checks, "psi attains its norm at mu", r.attainment_gap, kAttainment);
  push(r.checks, "norm attainment against the LP norm of mu",
       std::abs(attained - psi.lip_norm() * free_norm(mu)), kAttainment);
  r.distance = (psi - g).lip_norm();
  push(r.checks, "distance from g", r.distance, setup.bound, tau);

  if (auto msg = first_failure(r.checks); !msg.empty()) return fail(msg);
  r.status = PerturbationStatus::Certified;
  return r;
}

PerturbationResult main1_pipeline(const PointedMetricSpace& space, double gamma,
                                  const MoleculeCombination& combination,
                                  const std::optional<LipFunction>& f, const LipFunction& g,
                                  double eps) {
  return main1_pipeline(main1_prepare(space, gamma, combination, f, eps), g);
}

// ---------------------------------------------------------------------------

CorollaryWitness corollary_main_witness(const PointedMetricSpace& space, double gamma,
                                        const MoleculeCombination& combination) {
  if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");
  const double tau = tolerances().lp;
  const auto wide = gamma_fatten(space, 2.0 * gamma);
  const auto fat = gamma_fatten(space, gamma);
  const FreeElement mu = combination.to_element(wide);
  const double norm = free_norm(mu);
  const double total = combination.total();
  if (std::abs(total - norm) > tau * std::max(1.0, norm))
    throw PreconditionError("representation is not optimal: weights sum to " + fmt(total) +
                            " but the norm is " + fmt(norm));
  const auto pairs = combination.pairs();
  const auto f = common_norming_function(wide, pairs);
  if (!f) throw Error("no common norming function for an optimal representation");

  const std::size_t n = space.size();
  std::vector<double> value(n, 0.0);
  std::vector<bool> in(n, false), is_x(n, false);
  for (auto [x, y] : pairs) {
    is_x[x] = true;
    in[x] = in[y] = true;
  }
  for (std::size_t p = 0; p < n; ++p)
    if (in[p]) value[p] = (*f)(p) - (is_x[p] ? gamma : 0.0);

  double pos = kInfinity, neg = kInfinity;
  for (const auto& left : pairs)
    for (const auto& right : pairs) {
      const std::size_t xi = left.first, yj = right.second;
      const double diff = value[xi] - value[yj];
      const double allowed = fat.dist(xi, yj);
      if (diff >= 0.0) pos = std::min(pos, allowed - diff);
      else neg = std::min(neg, allowed + diff);
    }

  std::vector<std::size_t> subset;
  for (std::size_t p = 0; p < n; ++p)
    if (in[p]) subset.push_back(p);
  double lip_on_n = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const auto p = subset[a], q = subset[b];
      lip_on_n = std::max(lip_on_n, std::abs(value[p] - value[q]) / fat.dist(p, q));
    }

  if (!in[kBase]) {
    double best = kInfinity;
    for (auto p : subset) best = std::min(best, value[p] + fat.dist(kBase, p));
    value[kBase] = best;
    subset.insert(subset.begin(), kBase);
  }
  const double shift = value[kBase];
  std::vector<double> vals;
  for (auto p : subset) vals.push_back(value[p] - shift);

  CorollaryWitness w{mcshane_extend(fat, subset, vals, 1.0), *f, pos, neg, {}};
  if (pos < kInfinity) push(w.checks, "case f~(x_i) >= f~(y_j)", -pos, 0.0, tau);
  if (neg < kInfinity) push(w.checks, "case f~(x_i) < f~(y_j)", -neg, 0.0, tau);
  push(w.checks, "f~ is 1-Lipschitz on the endpoints", lip_on_n, 1.0, tau);
  push(w.checks, "f~ is 1-Lipschitz", w.f_tilde.lip_norm(), 1.0, tau);
  double worst = 0.0;
  for (auto [x, y] : pairs) worst = std::max(worst, std::abs(pair_slope(w.f_tilde, x, y) - 1.0));
  push(w.checks, "f~ norms every pair", worst, 0.0, tau);
  return w;
}

// ---------------------------------------------------------------------------

PetrData petr_data(const PointedMetricSpace& space, double eps) {
  const std::size_t n = space.size();
  if (n < 3) throw Error("petr layout needs x, y and at least one z");
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const double tol = tolerances().metric;
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, b); };
  if (!near(space.dist(0, 1), 1.0)) throw Error("petr layout needs d(x,y) = 1");
  PetrData out;
  for (std::size_t i = 2; i < n; ++i) {
    if (!near(space.dist(0, i), 0.5)) throw Error("petr layout needs d(x,z_n) = 1/2");
    for (std::size_t j = i + 1; j < n; ++j)
      if (!near(space.dist(i, j), 1.0)) throw Error("petr layout needs d(z_i,z_j) = 1");
    const double e = space.dist(1, i) - 0.5;
    if (!(e > 0.0)) throw Error("petr layout needs d(y,z_n) > 1/2");
    out.eps_seq.push_back(e);
  }
  for (std::size_t k = 0; k < out.eps_seq.size(); ++k)
    if (out.eps_seq[k] >= eps) out.n0 = k + 1;
  return out;
}

namespace {

Subspace petr_core(const PointedMetricSpace& space, std::size_t n0) {
  std::vector<std::size_t> idx(n0 + 2);
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  return subspace(space, idx);
}

}  // namespace

double petr_gamma_cut(const PointedMetricSpace& space, double eps, std::size_t samples,
                      std::uint64_t seed) {
  const auto data = petr_data(space, eps);
  const auto core = petr_core(space, data.n0);
  const auto m = FreeElement::molecule(core.space, 0, 1);
  double gamma = eps / 2.0;
  for (int j = 0; j < 60; ++j, gamma /= 2.0) {
    const double grid[] = {gamma};
    const auto curve = exposedness_probe(m, grid, samples, seed);
    if (curve.points.front().worst <= eps / 2.0) return gamma;
  }
  throw Error("no admissible gamma found for the petr certificate");
}

PetrCertificate petr_certificate(const PointedMetricSpace& space, double eps, double gamma_cut,
                                 const LipFunction& f) {
  const double tau = tolerances().lp;
  if (!(gamma_cut > 0.0) || !(gamma_cut < eps))
    throw PreconditionError("gamma_cut must lie in (0, eps)");
  if (!same_space(f.space(), space)) throw PreconditionError("f must live on the given space");
  if (f.lip_norm() > 1.0 + tau) throw PreconditionError("f is not in the unit ball");
  const double close = pair_slope(f, 0, 1);
  if (!(close > 1.0 - gamma_cut))
    throw PreconditionError("f is not close enough: <f,m_xy> = " + fmt(close) +
                            " <= 1 - gamma = " + fmt(1.0 - gamma_cut));
  const auto data = petr_data(space, eps);
  const auto core = petr_core(space, data.n0);

  const LipFunction f_core = restrict_to(f, core);
  const LipFunction f_tilde = (1.0 / f_core.lip_norm()) * f_core;
  const DualFace face(FreeElement::molecule(core.space, 0, 1));
  const Projection proj = project_onto_face(face, f_tilde);
  const std::size_t m = core.original.size();
  // Of all 1-Lipschitz extensions of the projection, take f clamped between
  // the lower and upper envelopes.
  const auto& phi = proj.function.values();
  std::vector<double> neg(phi.size());
  std::transform(phi.begin(), phi.end(), neg.begin(), [](double v) { return -v; });
  const LipFunction hi = mcshane_extend(space, core.original, phi, 1.0);
  const LipFunction lo = -1.0 * mcshane_extend(space, core.original, neg, 1.0);
  std::vector<double> hv(space.size());
  for (std::size_t z = 0; z < hv.size(); ++z) hv[z] = std::min(std::max(f(z), lo(z)), hi(z));
  for (std::size_t k = 0; k < core.original.size(); ++k) hv[core.original[k]] = phi[k];
  const LipFunction h(space, std::move(hv));

  PetrCertificate c{h, gamma_cut, data.n0, proj.distance, (h - f).lip_norm(), {}, false};
  const LipFunction diff = h - f;
  const std::size_t n = space.size();
  const auto slope = pair_slope;

  push(c.checks, "projection on M0 below eps", proj.distance, eps);
  push(c.checks, "h norms (x,y)", std::abs(slope(h, 0, 1) - 1.0), 0.0, tau);
  push(c.checks, "h in the unit ball", h.lip_norm(), 1.0, tau);
  push(c.checks, "case 1: pair (x,y)", std::abs(slope(diff, 0, 1)), std::min(gamma_cut, eps), tau);

  double c2 = 0.0, c3 = 0.0, c3_bound_gap = kInfinity, lower = kInfinity;
  for (std::size_t i = 2; i < n; ++i) {
    const double e = data.eps_seq[i - 2];
    const double xz = std::abs(slope(diff, 0, i));
    const double zy = std::abs(slope(diff, i, 1));
    if (i < m) {
      c2 = std::max({c2, xz, zy});
      continue;
    }
    const double b_xz = 2.0 * e + 2.0 * gamma_cut;
    const double b_zy = b_xz / (1.0 + 2.0 * e);
    c3 = std::max({c3, xz, zy});
    c3_bound_gap = std::min({c3_bound_gap, b_xz - xz, b_zy - zy});
    lower = std::min({lower, slope(f, 0, i) - (1.0 - b_xz), slope(f, i, 1) - (1.0 - b_zy),
                      slope(h, 0, i) - (1.0 - 2.0 * e),
                      slope(h, i, 1) - (1.0 - 2.0 * e / (1.0 + 2.0 * e))});
  }
  push(c.checks, "case 2: z_n with n <= n0", c2, 2.0 * eps, tau);
  if (c3_bound_gap < kInfinity) {
    push(c.checks, "case 3: z_n with n > n0", -c3_bound_gap, 0.0, tau);
    push(c.checks, "case 3: below 4 eps", c3, 4.0 * eps, tau);
    push(c.checks, "lower slope bounds for f and h beyond M0", -lower, 0.0, tau);
  }

  double both_in = 0.0, split = 0.0, both_out = 0.0;
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::abs(slope(diff, i, j));
      const bool a = i < m, b = j < m;
      if (a && b) both_in = std::max(both_in, v);
      else if (a || b) split = std::max(split, v);
      else both_out = std::max(both_out, v);
    }
  push(c.checks, "case 4: z_i, z_j both in M0", both_in, 2.0 * eps, tau);
  push(c.checks, "case 4: one of z_i, z_j in M0", split, 3.0 * eps, tau);
  push(c.checks, "case 4: z_i, z_j both outside M0", both_out, 4.0 * eps, tau);
  push(c.checks, "distance from f", c.distance, 4.0 * eps, tau);
  c.certified = all_passed(c.checks);
  return c;
}

double bilipschitz_distortion(const PointedMetricSpace& space, double gamma) {
  if (space.size() < 2) throw Error("distortion needs at least two points");
  if (!(gamma > 0.0)) throw Error("gamma must be positive");
  double worst = 1.0;
  for (std::size_t p = 0; p < space.size(); ++p)
    for (std::size_t q = p + 1; q < space.size(); ++q)
      worst = std::max(worst, 1.0 + gamma / space.dist(p, q));
  return worst;
}

}  // namespace freegeo
