#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freegeo/free_space.hpp"
#include "freegeo/lip_function.hpp"
#include "freegeo/metric_space.hpp"

namespace freegeo {

/// One verified inequality. `margin` = bound - value; passed iff margin >= -tolerance.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool passed = false;
};

Check make_check(std::string name, double value, double bound, double tolerance = 0.0);
bool all_passed(std::span<const Check> checks);

// ---------------------------------------------------------------------------
// Exposedness probe

struct ModulusPoint {
  double eta = 0.0;
  double raw_worst = 0.0;  // max distance over the samples at this eta
  double worst = 0.0;      // running max over the grid sorted by eta
  std::size_t samples = 0;
};

struct ModulusCurve {
  std::vector<ModulusPoint> points;  // eta ascending
  std::uint64_t seed = 0;
  double norm = 0.0;
};

/// Objective vector in [-1,1]^n. The mapping from raw 64-bit draws is fixed
/// here so that curves do not depend on the standard library's
/// distributions.
std::vector<double> probe_objective(std::mt19937_64& rng, std::size_t n);

/// For each eta, maximizes `samples` seeded objectives over the slab
/// {lip_norm <= 1, <f,mu> >= ||mu||(1-eta)} and records the largest
/// Lip-distance to D(mu). A lower bound for the modulus. Throws Error for
/// mu = 0, eta outside [0,1), or samples == 0.
ModulusCurve exposedness_probe(const FreeElement& mu, std::span<const double> eta_grid,
                               std::size_t samples, std::uint64_t seed);

/// A norm-one slab point at depth eta, drawn from the seeded generator.
LipFunction perturbed_norming(const DualFace& face, double eta, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Single molecule perturbation

struct Ssd1Result {
  LipFunction h_hat;
  double gamma_eps = 0.0;   // (1/2) eps (1 - gamma)/(4 - eps)
  double h_norm = 0.0;
  double distance = 0.0;    // lip_norm(h_hat - g)
  double bound = 0.0;       // 1 - (1 - eps/4)(1 - gamma_eps) + eps/4
  std::vector<Check> checks;
};

/// gamma_eps for a peaking constant and eps.
double ssd1_gamma_eps(double gamma_peak, double eps);

/// Throws PreconditionError when f does not peak at (x,y) with a constant
/// <= gamma_peak, g is not norm-one, or <g,m_xy> <= 1 - gamma_eps.
Ssd1Result ssd1_perturb(std::size_t x, std::size_t y, const LipFunction& f_peaking,
                        double gamma_peak, const LipFunction& g, double eps);

// ---------------------------------------------------------------------------
// Finite sums of molecules in the fattened metric

enum class PerturbationStatus { Certified, RhoTooLarge, PreconditionFailed };
const char* to_string(PerturbationStatus s);

/// Everything that does not depend on g.
struct Main1Setup {
  PointedMetricSpace space;    // (M, d)
  PointedMetricSpace fattened; // (M, d_gamma)
  double gamma = 0.0;
  double eps = 0.0;
  MoleculeCombination combination{};
  std::optional<FreeElement> mu{};  // in the fattened metric
  std::vector<std::size_t> subset{};  // N, ascending, contains the base
  std::optional<LipFunction> f{};       // clipped extension on (M,d)
  std::optional<LipFunction> f_gamma{};
  std::optional<LipFunction> g_gamma{};
  double beta = 0.0;
  double big_t = 0.0;
  double t0 = 0.0;
  double s_sup = 0.0;  // sup |<G_gamma, m_pq>| over pairs leaving N
  double c = 0.0;      // (K + gamma/2)/(K + gamma)
  double k = 0.0;
  double rho_parameter = 0.0;  // half-slack solution of the parameter inequality
  double rho = 0.0;            // rho_parameter halved until the face probe on N allows eps
  double bound = 0.0;  // max{eps, beta eps/gamma} + 2 sqrt(eps)
  std::vector<Check> checks{};
  PerturbationStatus status = PerturbationStatus::Certified;
  std::string message{};

  bool ready() const { return status == PerturbationStatus::Certified; }
};

/// Steps up to rho. `f` may be omitted; a common norming function on (M,d)
/// is then searched by LP. rho is halved while a seeded probe of mu on
/// (N, d_gamma) at depth (1 - sqrt(eps)) rho finds a slab point farther than
/// eps/2 from the face. Failures are reported through `status`.
Main1Setup main1_prepare(const PointedMetricSpace& space, double gamma,
                         const MoleculeCombination& combination,
                         const std::optional<LipFunction>& f, double eps);

struct PerturbationResult {
  Main1Setup setup;
  std::optional<LipFunction> g{};
  std::optional<LipFunction> h{};
  std::optional<LipFunction> psi{};
  double h_norm = 0.0;
  double projection_distance = 0.0;  // lip_norm(phi - h|_N) on (N, d_gamma)
  double distance = 0.0;             // lip_norm(psi - g)
  double attainment_gap = 0.0;       // |<psi,mu> - lip_norm(psi)|
  std::vector<Check> checks{};       // setup checks followed by the g-dependent ones
  PerturbationStatus status = PerturbationStatus::PreconditionFailed;
  std::string message{};
};

/// Runs the remaining steps for a given g on (M, d_gamma).
PerturbationResult main1_pipeline(const Main1Setup& setup, const LipFunction& g);

/// Convenience: prepare and run.
PerturbationResult main1_pipeline(const PointedMetricSpace& space, double gamma,
                                  const MoleculeCombination& combination,
                                  const std::optional<LipFunction>& f, const LipFunction& g,
                                  double eps);

struct CorollaryWitness {
  LipFunction f_tilde;      // on (M, d_gamma), norms every pair there
  LipFunction f_norming;    // on (M, d_{2 gamma})
  double positive_case_margin = 0.0;  // f~(x_i) - f~(y_j) >= 0 instances
  double negative_case_margin = 0.0;  // f~(x_i) - f~(y_j) < 0 instances
  std::vector<Check> checks;
};

/// f~ = f - gamma at x_i, f at y_i, extended by McShane on (M, d_gamma) and
/// base-shifted. Throws Error when the representation is not optimal in
/// d_{2 gamma} or no common norming function exists.
CorollaryWitness corollary_main_witness(const PointedMetricSpace& space, double gamma,
                                        const MoleculeCombination& combination);

// ---------------------------------------------------------------------------
// The non-(G) pair with an SSD molecule

struct PetrData {
  std::vector<double> eps_seq;  // eps_n = d(y, z_n) - 1/2, n = 1..k
  std::size_t n0 = 0;           // largest n with eps_n >= eps
};

/// Reads eps_n from the distances of a petr truncation (x = 0, y = 1,
/// z_n = n + 1). Throws Error when the layout does not match.
PetrData petr_data(const PointedMetricSpace& space, double eps);

/// Largest gamma of the form (eps/2) 2^-j whose seeded probe of m_xy on
/// M_0 stays within eps/2.
double petr_gamma_cut(const PointedMetricSpace& space, double eps, std::size_t samples = 32,
                      std::uint64_t seed = 1);

struct PetrCertificate {
  LipFunction h;
  double gamma_cut = 0.0;
  std::size_t n0 = 0;
  double projection_distance = 0.0;  // ||h|_{M0} - f~||
  double distance = 0.0;             // lip_norm(h - f)
  std::vector<Check> checks;
  bool certified = false;
};

/// Throws PreconditionError when <f, m_xy> <= 1 - gamma_cut or f is not in
/// the unit ball.
PetrCertificate petr_certificate(const PointedMetricSpace& space, double eps, double gamma_cut,
                                 const LipFunction& f);

// ---------------------------------------------------------------------------

/// max over pairs of 1 + gamma/d(p,q). Throws Error for a single point or
/// gamma <= 0.
double bilipschitz_distortion(const PointedMetricSpace& space, double gamma);

}  // namespace freegeo
