#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "freegeo/config.hpp"
#include "freegeo/free_space.hpp"
#include "freegeo/gallery.hpp"
#include "freegeo/ssd.hpp"

using namespace freegeo;

namespace {

PointedMetricSpace line(std::size_t n) { return gallery_space("line", {{"n", double(n)}}); }
PointedMetricSpace tree(std::size_t n) { return gallery_space("branching_tree", {{"n", double(n)}}); }
PointedMetricSpace equilateral(std::size_t n) {
  return gallery_space("equilateral", {{"n", double(n)}});
}

// Lip-distance from (a,b) to the face {f(1) - f(2) = 1} of the unit ball of
// Lip0 over the three-point equilateral space, by ternary search on f(1).
double equilateral_face_distance(double a, double b) {
  auto cost = [&](double t) {
    const double u = a - t, v = b - (t - 1.0);
    return std::max({std::abs(u), std::abs(v), std::abs(u - v)});
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (cost(m1) < cost(m2)) hi = m2;
    else lo = m1;
  }
  return cost(0.5 * (lo + hi));
}

// Vertices of {|a| <= 1, |b| <= 1, |a - b| <= 1, a - b >= 1 - eta}.
std::vector<std::pair<double, double>> equilateral_slab_vertices(double eta) {
  struct Line { double p, q, r; };  // p a + q b = r
  const std::vector<Line> lines{{1, 0, 1},  {1, 0, -1}, {0, 1, 1},          {0, 1, -1},
                                {1, -1, 1}, {1, -1, -1}, {1, -1, 1.0 - eta}};
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& u = lines[i];
      const auto& v = lines[j];
      const double det = u.p * v.q - u.q * v.p;
      if (std::abs(det) < 1e-12) continue;
      const double a = (u.r * v.q - u.q * v.r) / det;
      const double b = (u.p * v.r - u.r * v.p) / det;
      const double e = 1e-12;
      if (std::abs(a) <= 1 + e && std::abs(b) <= 1 + e && std::abs(a - b) <= 1 + e &&
          a - b >= 1.0 - eta - e)
        out.emplace_back(a, b);
    }
  return out;
}

bool certified(const PerturbationResult& r) { return r.status == PerturbationStatus::Certified; }

}  // namespace

TEST_CASE("checks") {
  const auto c = make_check("x", 1.0, 2.0);
  CHECK(c.passed);
  CHECK(c.margin == 1.0);
  CHECK_FALSE(make_check("x", 2.0, 1.0, 0.5).passed);
  CHECK(make_check("x", 1.0 + 1e-12, 1.0, 1e-9).passed);
  const std::vector<Check> v{c, make_check("y", 3.0, 1.0)};
  CHECK_FALSE(all_passed(v));
}

TEST_CASE("bi-Lipschitz distortion") {
  CHECK(bilipschitz_distortion(tree(3), 0.5) == 1.5);
  for (const auto& name : {"line", "equilateral", "branching_tree", "cantor", "three_point_aligned"}) {
    const auto s = gallery_space(name);
    const double theta = uniform_discreteness_constant(s);
    CHECK(bilipschitz_distortion(s, 0.3) == 1.0 + 0.3 / theta);
    CHECK(bilipschitz_distortion(s, 0.01 * theta) == doctest::Approx(1.01).epsilon(1e-14));
  }
  CHECK(bilipschitz_distortion(line(4), 1e-12) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bilipschitz_distortion(line(4), 0.0), Error);
}

TEST_CASE("probe objectives are reproducible and in range") {
  std::mt19937_64 a(7), b(7);
  const auto u = probe_objective(a, 50);
  CHECK(u == probe_objective(b, 50));
  for (double v : u) CHECK((v >= -1.0 && v < 1.0));
}

TEST_CASE("probe at depth zero stays on the face") {
  const auto mu = FreeElement::molecule(equilateral(4), 1, 2);
  const double grid[] = {0.0};
  const auto curve = exposedness_probe(mu, grid, 16, 3);
  CHECK(curve.points.front().worst <= 1e-9);
}

TEST_CASE("probe on the equilateral triangle matches vertex enumeration") {
  const auto s = equilateral(3);
  const auto mu = FreeElement::molecule(s, 1, 2);
  const double eta = 0.1;
  double oracle = 0.0;
  for (auto [a, b] : equilateral_slab_vertices(eta))
    oracle = std::max(oracle, equilateral_face_distance(a, b));
  CHECK(oracle > 0.0);
  const double grid[] = {eta};
  const auto curve = exposedness_probe(mu, grid, 64, 11);
  CHECK(curve.points.front().worst > 0.0);
  CHECK(curve.points.front().worst <= oracle + 1e-9);
  CHECK(curve.points.front().worst == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("probe trend and determinism") {
  const auto s = line(4);
  const auto mu = MoleculeCombination{{{0.5, 1, 0}, {0.5, 3, 2}}}.to_element(s);
  const double grid[] = {0.1, 0.001, 0.01};
  const auto a = exposedness_probe(mu, grid, 24, 5);
  const auto b = exposedness_probe(mu, grid, 24, 5);
  REQUIRE(a.points.size() == 3);
  CHECK(a.points[0].eta == 0.001);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.points[k].raw_worst == b.points[k].raw_worst);
    if (k > 0) CHECK(a.points[k].worst >= a.points[k - 1].worst);
  }
  CHECK(a.points[0].raw_worst < a.points[1].raw_worst);
  CHECK(a.points[1].raw_worst < a.points[2].raw_worst);
  CHECK(a.points[0].raw_worst <= 0.01);
  CHECK_THROWS_AS(exposedness_probe(FreeElement::zero(s), grid, 4, 1), Error);
  CHECK_THROWS_AS(exposedness_probe(mu, grid, 0, 1), Error);
  const double bad[] = {1.0};
  CHECK_THROWS_AS(exposedness_probe(mu, bad, 4, 1), Error);
}

TEST_CASE("tree probe reaches the cube corner") {
  // Over the tree the unit ball is a cube; the slab point farthest from the
  // face sits at depth n eta in one coordinate direction, capped at 2.
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto s = tree(n);
    MoleculeCombination c;
    for (std::size_t k = 1; k <= n; ++k) c.terms.push_back({1.0 / double(n), k, 0});
    const double grid[] = {0.05};
    const auto curve = exposedness_probe(c.to_element(s), grid, 64, 2);
    CHECK(curve.points.front().worst == doctest::Approx(std::min(2.0, 0.05 * n)).epsilon(1e-8));
  }
}

TEST_CASE("single molecule perturbation") {
  const auto s = equilateral(3);
  const auto f = aux_f_xy(s, 1, 2);
  const auto peak = peaking_check(f, 1, 2);
  REQUIRE(peak);
  CHECK(*peak == doctest::Approx(0.5));
  const double eps = 0.1;

  const auto same = ssd1_perturb(1, 2, f, *peak, f, eps);
  CHECK(same.distance <= 1e-12);
  CHECK(all_passed(same.checks));

  const double ge = ssd1_gamma_eps(*peak, eps);
  CHECK(ge == doctest::Approx(0.5 * 0.1 * 0.5 / 3.9));
  const auto g = perturbed_norming(DualFace(FreeElement::molecule(s, 1, 2)), ge / 2.0, 9);
  const auto r = ssd1_perturb(1, 2, f, *peak, g, eps);
  CHECK(all_passed(r.checks));
  CHECK(r.h_hat.lip_norm() == doctest::Approx(1.0));
  CHECK(pair_slope(r.h_hat, 1, 2) == doctest::Approx(1.0));
  CHECK(r.distance <= r.bound + 1e-9);

  const LipFunction far(s, {0.0, 1.0, 1.0});
  CHECK_THROWS_AS(ssd1_perturb(1, 2, f, *peak, far, eps), PreconditionError);
  CHECK_THROWS_AS(ssd1_perturb(1, 2, LipFunction(s, {0, 1, 1}), 0.5, f, eps), PreconditionError);
}

TEST_CASE("finite sum perturbation on the line") {
  const auto s = line(4);
  const LipFunction identity(s, {0, 1, 2, 3});
  const MoleculeCombination c{{{1.0, 1, 0}}};
  const auto setup = main1_prepare(s, 1.0, c, identity, 0.04);
  REQUIRE(setup.ready());
  CHECK(setup.beta == 1.0);
  CHECK(setup.bound == doctest::Approx(0.44));
  CHECK(setup.rho > 0.0);
  CHECK(big_t_lhs(setup.beta, 1.0, setup.big_t) < 0.75);
  CHECK(setup.c - setup.s_sup >= 1e-8);
  CHECK(setup.s_sup < (setup.k + 0.5) / (setup.k + 1.0));

  const auto g = norming_functional(*setup.mu);
  const auto r = main1_pipeline(setup, g);
  REQUIRE(certified(r));
  CHECK(r.distance <= setup.bound + 1e-9);
  const double attained = pairing(*r.psi, *setup.mu);
  CHECK(std::abs(attained - r.psi->lip_norm() * free_norm(*setup.mu)) <= 1e-8);

  const auto g2 = perturbed_norming(DualFace(*setup.mu), setup.rho / 2.0, 4);
  const auto r2 = main1_pipeline(setup, g2);
  CHECK(certified(r2));
  CHECK(r2.distance <= setup.bound + 1e-9);

  const auto lazy = main1_pipeline(s, 1.0, c, std::nullopt, g, 0.04);
  CHECK(certified(lazy));
}

TEST_CASE("finite sum perturbation preconditions") {
  const auto s = line(4);
  const LipFunction identity(s, {0, 1, 2, 3});
  const MoleculeCombination overlap{{{0.5, 1, 2}, {0.5, 2, 3}}};
  const auto bad = main1_prepare(s, 1.0, overlap, std::nullopt, 0.04);
  CHECK(bad.status == PerturbationStatus::PreconditionFailed);
  CHECK(bad.message.find("disjoint") != std::string::npos);

  const MoleculeCombination heavy{{{2.0, 1, 0}}};
  CHECK(main1_prepare(s, 1.0, heavy, identity, 0.04).status ==
        PerturbationStatus::PreconditionFailed);

  const MoleculeCombination c{{{1.0, 1, 0}}};
  const auto big = main1_prepare(s, 1.0, c, identity, 0.9);
  CHECK(big.status == PerturbationStatus::PreconditionFailed);

  const auto setup = main1_prepare(s, 1.0, c, identity, 0.04);
  const auto fat = gamma_fatten(s, 1.0);
  const LipFunction wrong(fat, {0, -2, -4, -6});
  const auto r = main1_pipeline(setup, (1.0 / wrong.lip_norm()) * wrong);
  CHECK(r.status == PerturbationStatus::PreconditionFailed);
  CHECK_THROWS_AS(main1_prepare(s, 0.0, c, identity, 0.04), PreconditionError);
}

TEST_CASE("two molecules on the equilateral space") {
  const auto s = equilateral(5);
  const MoleculeCombination c{{{0.5, 1, 2}, {0.5, 3, 4}}};
  const auto setup = main1_prepare(s, 1.0, c, std::nullopt, 0.01);
  REQUIRE(setup.ready());
  const auto r = main1_pipeline(setup, perturbed_norming(DualFace(*setup.mu), setup.rho / 2.0, 1));
  CHECK(certified(r));
  CHECK(r.attainment_gap <= 1e-8);
}

TEST_CASE("tilde-f witness") {
  const auto t = tree(3);
  const double gamma = 0.5;
  const auto wide = gamma_fatten(t, 2.0 * gamma);
  const auto e = FreeElement::delta(wide, 1) - FreeElement::delta(wide, 2);
  const auto mu = (1.0 / free_norm(e)) * e;
  const auto rep = optimal_representation(mu);
  const auto w = corollary_main_witness(t, gamma, rep);
  CHECK(all_passed(w.checks));
  CHECK(w.f_tilde.lip_norm() <= 1.0 + 1e-9);
  for (const auto& m : rep.terms) CHECK(pair_slope(w.f_tilde, m.x, m.y) == doctest::Approx(1.0));

  const auto single = corollary_main_witness(line(4), 0.25, MoleculeCombination{{{1.0, 3, 1}}});
  CHECK(all_passed(single.checks));
  CHECK(single.positive_case_margin >= 0.0);

  const MoleculeCombination loose{{{0.5, 1, 0}, {0.5, 0, 2}}};
  CHECK_THROWS_AS(corollary_main_witness(equilateral(3), 0.25, loose), PreconditionError);
}

TEST_CASE("petr data") {
  const auto s = gallery_family("petr").at(12).space;
  const auto d = petr_data(s, 0.1);
  REQUIRE(d.eps_seq.size() == 12);
  CHECK(d.eps_seq[0] == 0.5);
  CHECK(d.eps_seq[3] == 0.0625);
  CHECK(d.n0 == 3);
  CHECK_THROWS_AS(petr_data(line(4), 0.1), Error);
}

TEST_CASE("petr certificate") {
  const auto s = gallery_family("petr").at(12).space;
  const double eps = 0.1;
  const double gc = petr_gamma_cut(s, eps);
  CHECK(gc > 0.0);
  CHECK(gc <= eps / 2.0);
  const DualFace face(FreeElement::molecule(s, 0, 1));
  const auto f = perturbed_norming(face, gc / 2.0, 17);
  const auto c = petr_certificate(s, eps, gc, f);
  CHECK(c.certified);
  CHECK(pair_slope(c.h, 0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.distance <= 4.0 * eps + 1e-8);
  for (const auto& ch : c.checks) CHECK(ch.margin >= -1e-9);

  // Case 3 at n = 10 directly.
  const auto diff = c.h - f;
  const double e10 = 1.0 / 1024.0;
  CHECK(std::abs(pair_slope(diff, 0, 11)) <= 2 * e10 + 2 * gc + 1e-9);

  const auto exact = norming_functional(FreeElement::molecule(s, 0, 1));
  const auto c0 = petr_certificate(s, eps, gc, exact);
  CHECK(c0.certified);
  CHECK(c0.distance <= eps);

  const LipFunction zero = LipFunction::zero(s);
  CHECK_THROWS_AS(petr_certificate(s, eps, gc, zero), PreconditionError);
}
