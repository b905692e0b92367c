#include <doctest.h>

#include <cmath>
#include <random>

#include "freegeo/config.hpp"
#include "freegeo/gallery.hpp"
#include "freegeo/lip_function.hpp"
#include "support/random_space.hpp"

using namespace freegeo;

namespace {

PointedMetricSpace line4() { return gallery_space("line", {{"n", 4}}); }

}  // namespace

TEST_CASE("norms on the line") {
  const auto s = line4();
  CHECK(LipFunction(s, {0, 1, 2, 3}).lip_norm() == 1.0);
  CHECK(LipFunction(s, {0, 1, 0, 1}).lip_norm() == 1.0);
  CHECK(LipFunction::zero(s).lip_norm() == 0.0);
  const LipFunction f(s, {0, 1, 0, 1});
  CHECK(pair_slope(f, 1, 2) == 1.0);
  CHECK(pair_slope(f, 2, 1) == -1.0);
  CHECK_THROWS_AS(pair_slope(f, 1, 1), Error);
  CHECK_THROWS_AS(LipFunction(s, {0, 1}), Error);
}

TEST_CASE("construction shifts to the base") {
  const LipFunction f(line4(), {5, 6, 7, 8});
  CHECK(f.values() == std::vector<double>{0, 1, 2, 3});
}

TEST_CASE("slopes are antisymmetric on random functions") {
  std::mt19937_64 rng(5);
  const auto s = testing_support::random_space(rng, 7);
  std::vector<double> v(7);
  for (auto& x : v) x = testing_support::uniform(rng, -1, 1);
  const LipFunction f(s, v);
  for (std::size_t p = 0; p < 7; ++p)
    for (std::size_t q = 0; q < 7; ++q)
      if (p != q) CHECK(pair_slope(f, p, q) == -pair_slope(f, q, p));
}

TEST_CASE("aux_f_xy values") {
  const auto s = gallery_space("equilateral");
  const auto f = aux_f_xy(s, 1, 2);
  CHECK(f(0) == 0.0);
  CHECK(f(1) == doctest::Approx(0.5));
  CHECK(f(2) == doctest::Approx(-0.5));
  CHECK(pair_slope(f, 1, 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(aux_f_xy(s, 1, 1), Error);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto r = testing_support::random_space(rng, 6);
    const auto g = aux_f_xy(r, 2, 4);
    CHECK(pair_slope(g, 2, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.lip_norm() <= 1.0 + 1e-9);
    for (std::size_t z : {0, 1, 3, 5}) {
      const double expected = r.dist(2, 4) / (r.dist(z, 4) + r.dist(z, 2));
      CHECK(std::abs(pair_slope(g, 2, z)) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("peaking constants") {
  const auto eq = gallery_space("equilateral");
  const auto g = peaking_check(aux_f_xy(eq, 1, 2), 1, 2);
  REQUIRE(g);
  CHECK(*g == doctest::Approx(0.5));
  CHECK(peaking_check(aux_f_xy(eq, 1, 2), 2, 1) == std::nullopt);  // slope -1

  CHECK_FALSE(peaking_check(LipFunction(line4(), {0, 1, 2, 3}), 1, 0));

  const auto petr = gallery_space("petr", {{"index", 3}});
  const auto p = peaking_check(aux_f_xy(petr, 0, 1), 1, 0);
  CHECK_FALSE(p);  // slope at (y,x) is -1
  const auto q = peaking_check(aux_f_xy(petr, 1, 0), 1, 0);
  REQUIRE(q);
  CHECK(*q == doctest::Approx(8.0 / 9.0).epsilon(1e-12));

  const auto two = gallery_space("line", {{"n", 2}});
  CHECK(peaking_check(LipFunction(two, {0, 1}), 1, 0) == 0.0);
  CHECK_THROWS_AS(peaking_check(LipFunction(two, {0, 1}), 1, 1), Error);
}

TEST_CASE("McShane extension") {
  const auto s = line4();
  const std::vector<std::size_t> all{0, 1, 2, 3};
  const std::vector<double> id{0, 1, 2, 3};
  CHECK(mcshane_extend(s, all, id, 1.0).values() == id);

  const std::vector<std::size_t> n01{0, 1};
  const std::vector<double> v01{0, 1};
  CHECK(mcshane_extend(s, n01, v01, 1.0).values() == id);
  CHECK(mcshane_extend(s, n01, v01, 1.0, Clip{-1, 1}).values() == std::vector<double>{0, 1, 1, 1});

  const auto eq = gallery_space("equilateral");
  CHECK(mcshane_extend(eq, n01, v01, 1.0)(2) == 1.0);

  const std::vector<std::size_t> n1{1};
  const std::vector<double> v1{1};
  CHECK_THROWS_AS(mcshane_extend(s, n1, v1, 1.0), Error);
  const std::vector<double> steep{0, 2};
  CHECK_THROWS_AS(mcshane_extend(s, n01, steep, 1.0), Error);
  const std::vector<double> wrong_base{1, 2};
  CHECK_THROWS_AS(mcshane_extend(s, n01, wrong_base, 1.0), Error);
}

TEST_CASE("McShane extension keeps data and norm on random spaces") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto s = testing_support::random_space(rng, 8);
    const std::vector<std::size_t> sub{0, 2, 5};
    const double L = 1.5;
    const std::size_t a = rng() % 8;
    const double c = testing_support::uniform(rng, -1, 1);
    std::vector<double> vals;
    for (auto p : sub) vals.push_back(c * L * (s.dist(p, a) - s.dist(0, a)));
    const auto f = mcshane_extend(s, sub, vals, L);
    for (std::size_t k = 0; k < sub.size(); ++k) CHECK(f(sub[k]) == vals[k]);
    CHECK(f.lip_norm() <= L + 1e-9);
  }
}

TEST_CASE("cutoff and T selection") {
  const CutoffXi xi(1.0, 5.0);
  CHECK(xi(1.0) == 1.0);
  CHECK(xi(0.3) == 1.0);
  CHECK(xi(5.0) == 0.0);
  CHECK(xi(3.0) == 0.5);
  CHECK(xi(9.0) == 0.0);
  CHECK_THROWS_AS(CutoffXi(1.0, 1.0), Error);

  const auto c = select_cutoff(1.0, 1.0);
  CHECK(big_t_lhs(1.0, 1.0, c.big_t()) < 0.75);
  CHECK(big_t_lhs(1.0, 1.0, 1.0 + (c.big_t() - 1.0) / 2) >= 0.75);
  CHECK(c.big_t() == 33.0);
}

TEST_CASE("f_gamma on the line") {
  const auto s = line4();
  const std::vector<std::size_t> n{0, 1};
  const std::vector<double> v{0, 1};
  const auto f = mcshane_extend(s, n, v, 1.0, Clip{-1, 1});
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 0}};
  const auto fg = f_gamma_construct(s, 1.0, pairs, f);
  CHECK(fg.function.values() == std::vector<double>{0, 2, 1.5, 1.5});
  CHECK(fg.function.lip_norm() == doctest::Approx(1.0));
  CHECK(pair_slope(fg.function, 1, 0) == doctest::Approx(1.0));
  CHECK(fg.case_margin >= 0.0);
  CHECK(fg.radius_margin >= 0.0);

  const auto G = g_gamma_construct(fg.function, select_cutoff(1.0, 1.0), s);
  CHECK(G(1) == 2.0);
  CHECK(G(0) == 0.0);

  const std::vector<std::pair<std::size_t, std::size_t>> overlap{{1, 0}, {2, 1}};
  CHECK_THROWS_AS(f_gamma_construct(s, 1.0, overlap, LipFunction(s, {0, 1, 2, 3})), Error);
  const std::vector<std::pair<std::size_t, std::size_t>> unnormed{{2, 0}};
  CHECK_THROWS_AS(f_gamma_construct(s, 1.0, unnormed, f), Error);
}

TEST_CASE("f_gamma shifts when the base is interior") {
  const auto s = gallery_space("branching_tree", {{"n", 3}});
  // f(1) - f(2) = 2 = d(1,2).
  const LipFunction f(s, {0, 1, -1, 0});
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 2}};
  const auto fg = f_gamma_construct(s, 0.5, pairs, f);
  CHECK(fg.function(0) == 0.0);
  CHECK(fg.function(1) == doctest::Approx(1.25));
  CHECK(fg.function(2) == doctest::Approx(-1.25));
  CHECK(fg.function(3) == doctest::Approx(0.0));
  CHECK(fg.function.lip_norm() == doctest::Approx(1.0));
}
