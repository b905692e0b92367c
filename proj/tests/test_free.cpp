#include <doctest.h>

#include <cmath>
#include <random>

#include "freegeo/config.hpp"
#include "freegeo/free_space.hpp"
#include "freegeo/gallery.hpp"
#include "support/random_space.hpp"

using namespace freegeo;

namespace {

PointedMetricSpace line(std::size_t n) { return gallery_space("line", {{"n", double(n)}}); }
PointedMetricSpace tree(std::size_t n) { return gallery_space("branching_tree", {{"n", double(n)}}); }

MoleculeCombination combo(std::initializer_list<Molecule> t) { return {t}; }

}  // namespace

TEST_CASE("elements normalise the base mass") {
  const FreeElement e(line(4), {7, 1, 0, -3});
  CHECK(e[0] == 2.0);
  CHECK(FreeElement::delta(line(4), 3).masses() == std::vector<double>{-1, 0, 0, 1});
  CHECK(FreeElement::molecule(line(4), 3, 1).masses() == std::vector<double>{0, -0.5, 0, 0.5});
  CHECK_THROWS_AS(FreeElement::molecule(line(4), 1, 1), Error);
  CHECK_THROWS_AS(FreeElement(line(4), {0, 1}), Error);
  CHECK_THROWS_AS((combo({{-1.0, 1, 0}}).to_element(line(4))), Error);
}

TEST_CASE("pairings") {
  const auto s = line(4);
  CHECK(pairing(LipFunction(s, {0, 1, 2, 3}), FreeElement::molecule(s, 1, 0)) == 1.0);
  const auto mu = combo({{0.5, 1, 0}, {0.5, 3, 2}}).to_element(s);
  CHECK(pairing(LipFunction(s, {0, 1, 0, 1}), mu) == 1.0);
  CHECK(pairing(LipFunction(s, {0, 1, 0, 1}), FreeElement::zero(s)) == 0.0);
  CHECK_THROWS_AS(pairing(LipFunction::zero(tree(3)), mu), Error);
}

TEST_CASE("norm examples") {
  const auto eq = gallery_space("equilateral", {{"n", 5}});
  CHECK(free_norm(FreeElement::molecule(eq, 2, 4)) == doctest::Approx(1.0).epsilon(1e-12));
  const auto t = tree(3);
  CHECK(free_norm(FreeElement::delta(t, 1) - FreeElement::delta(t, 2)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const auto s = line(4);
  CHECK(free_norm(combo({{0.5, 1, 0}, {0.5, 3, 2}}).to_element(s)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(free_norm(FreeElement::zero(s)) == 0.0);
}

TEST_CASE("redundant pairs are dropped only on segments") {
  const auto cp = constraint_pairs(line(4));
  CHECK(cp == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(constraint_pairs(gallery_space("equilateral", {{"n", 4}})).size() == 6);
  CHECK(constraint_pairs(tree(3)).size() == 3);
}

TEST_CASE("norming functionals and ranges") {
  const auto s = line(4);
  const auto mu = combo({{0.5, 1, 0}, {0.5, 3, 2}}).to_element(s);
  const auto f = norming_functional(mu);
  CHECK(f.lip_norm() <= 1.0 + 1e-9);
  CHECK(pairing(f, mu) == doctest::Approx(1.0).epsilon(1e-9));

  const auto r = face_coordinate_ranges(dual_face(mu));
  CHECK(r[2].lo == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r[2].hi == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r[1].width() <= 1e-9);
  CHECK_FALSE(is_gateaux(mu));

  const auto chain = combo({{1.0 / 3, 1, 0}, {1.0 / 3, 2, 1}, {1.0 / 3, 3, 2}}).to_element(s);
  CHECK(is_gateaux(chain));
  for (const auto& rg : face_coordinate_ranges(dual_face(chain))) CHECK(rg.width() <= 1e-9);

  const auto eq = gallery_space("equilateral");
  const auto mol = FreeElement::molecule(eq, 1, 2);
  CHECK_FALSE(is_gateaux(mol));
  // With base 0, f(1) - f(2) = 1 pins the pair but not the offset.
  const auto er = face_coordinate_ranges(dual_face(mol));
  CHECK(er[1].width() > 0.5);
  CHECK_THROWS_AS(is_gateaux(FreeElement::zero(eq)), Error);
  CHECK_THROWS_AS(norming_functional(FreeElement::zero(eq)), Error);
}

TEST_CASE("molecule face pins the molecule slope") {
  const auto eq = gallery_space("equilateral");
  const auto face = dual_face(FreeElement::molecule(eq, 1, 0));
  const auto r = face_coordinate_ranges(face);
  CHECK(r[1].width() <= 1e-9);
  CHECK(r[1].lo == doctest::Approx(1.0));
}

TEST_CASE("optimal representations") {
  const auto eq = gallery_space("equilateral");
  const auto rep = optimal_representation(FreeElement::molecule(eq, 1, 2));
  REQUIRE(rep.terms.size() == 1);
  CHECK(rep.terms[0].lambda == doctest::Approx(1.0));
  CHECK(rep.terms[0].x == 1);
  CHECK(rep.terms[0].y == 2);

  const auto s = line(4);
  const auto r3 = optimal_representation(FreeElement::delta(s, 3));
  CHECK(r3.total() == doctest::Approx(3.0).epsilon(1e-12));
  const auto back = r3.to_element(s);
  for (std::size_t p = 0; p < 4; ++p) CHECK(std::abs(back[p] - FreeElement::delta(s, 3)[p]) <= 1e-9);

  const auto t = tree(3);
  CHECK(optimal_representation(FreeElement::delta(t, 1) - FreeElement::delta(t, 2)).total() ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(optimal_representation(FreeElement::zero(t)), Error);
}

TEST_CASE("norm properties on random elements") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = testing_support::random_space(rng, 4 + trial % 5);
    const FreeElement a(s, testing_support::random_zero_sum(rng, s.size()));
    const FreeElement b(s, testing_support::random_zero_sum(rng, s.size()));
    const double na = free_norm(a), nb = free_norm(b);
    CHECK(free_norm(a + b) <= na + nb + 1e-9);
    CHECK(free_norm(-2.5 * a) == doctest::Approx(2.5 * na).epsilon(1e-9));
    const auto cert = free_norm_certified(a);
    CHECK(cert.gap() <= 1e-9 * (1 + na));
    std::vector<double> v(s.size());
    for (auto& x : v) x = testing_support::uniform(rng, -1, 1);
    const LipFunction f(s, v);
    CHECK(pairing(f, a) <= f.lip_norm() * na + 1e-9);
    const auto rep = optimal_representation(a);
    CHECK(rep.total() == doctest::Approx(na).epsilon(1e-9));
    const auto back = rep.to_element(s);
    for (std::size_t p = 0; p < s.size(); ++p) CHECK(std::abs(back[p] - a[p]) <= 1e-9);
  }
}

TEST_CASE("line and tree isometries") {
  std::mt19937_64 rng(23);
  const auto s = line(9);
  std::vector<double> c(8);
  MoleculeCombination signed_combo;
  std::vector<double> m(9, 0.0);
  double l1 = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    c[i] = testing_support::uniform(rng, -1, 1);
    m[i + 1] += c[i];
    m[i] -= c[i];
    l1 += std::abs(c[i]);
  }
  CHECK(free_norm(FreeElement(s, m)) == doctest::Approx(l1).epsilon(1e-9));

  const auto t = tree(20);
  std::vector<double> a(21, 0.0);
  double sum = 0.0;
  for (std::size_t k = 1; k <= 20; ++k) {
    a[k] = testing_support::uniform(rng, -1, 1);
    sum += std::abs(a[k]);
  }
  CHECK(free_norm(FreeElement(t, a)) == doctest::Approx(sum).epsilon(1e-9));
}

TEST_CASE("projection and slab points") {
  const auto s = line(4);
  const auto mu = combo({{0.5, 1, 0}, {0.5, 3, 2}}).to_element(s);
  const auto face = dual_face(mu);
  const LipFunction g(s, {0, 1, 0, 1});
  CHECK(distance_to_face(face, g) <= 1e-9);
  const LipFunction z = LipFunction::zero(s);
  const auto pr = project_onto_face(face, z);
  CHECK(pr.distance == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pairing(pr.function, mu) == doctest::Approx(1.0).epsilon(1e-9));
  const auto scaled = project_onto_face(face, z, 2.0);
  CHECK(pairing(scaled.function, mu) == doctest::Approx(2.0).epsilon(1e-9));

  const std::vector<double> obj{0, 0, 1, 0};
  const auto top = slab_point(face, obj, 0.1);
  CHECK(top(2) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(pairing(top, mu) >= 0.9 - 1e-9);
  CHECK_THROWS_AS(slab_point(face, obj, 1.0), Error);
}

TEST_CASE("common norming functions") {
  const auto s = line(4);
  const std::vector<std::pair<std::size_t, std::size_t>> ok{{1, 0}, {3, 2}};
  const auto f = common_norming_function(s, ok);
  REQUIRE(f);
  CHECK(pair_slope(*f, 1, 0) == doctest::Approx(1.0));
  CHECK(pair_slope(*f, 3, 2) == doctest::Approx(1.0));
  const std::vector<std::pair<std::size_t, std::size_t>> clash{{1, 0}, {0, 1}};
  CHECK_FALSE(common_norming_function(s, clash));
}
