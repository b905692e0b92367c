#include <doctest.h>

#include <cmath>
#include <random>

#include "freegeo/config.hpp"
#include "freegeo/lp.hpp"

using namespace freegeo;

TEST_CASE("single variable maximum") {
  LpProblem p(1, ObjectiveSense::Maximize);
  p.objective = {1.0};
  p.add_row({{0, 1.0}}, RowSense::LessEqual, 3.0);
  const auto s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.optimum == doctest::Approx(3.0));
  CHECK(s.certified(1e-9));
  CHECK(s.dual[0] == doctest::Approx(1.0));
}

TEST_CASE("single route transport") {
  // Ship one unit from a to b along the arc a->b (cost 2) or b->a (cost 2).
  LpProblem p(2);
  p.objective = {2.0, 2.0};
  p.add_row({{0, 1.0}, {1, -1.0}}, RowSense::Equal, 1.0);
  const auto s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.optimum == doctest::Approx(2.0));
  CHECK(s.primal[0] == doctest::Approx(1.0));
  CHECK(s.certified(1e-9));
}

TEST_CASE("infeasible and unbounded") {
  LpProblem p(1);
  p.lower[0] = -kInf;
  p.add_row({{0, 1.0}}, RowSense::LessEqual, 1.0);
  p.add_row({{0, 1.0}}, RowSense::GreaterEqual, 2.0);
  CHECK(solve(p).status == LpStatus::Infeasible);

  LpProblem q(2, ObjectiveSense::Maximize);
  q.objective = {1.0, 1.0};
  q.add_row({{0, 1.0}, {1, -1.0}}, RowSense::LessEqual, 1.0);
  CHECK(solve(q).status == LpStatus::Unbounded);
}

TEST_CASE("free and upper-bounded columns") {
  // min x - y  with  x free in [-inf, inf], y <= 2, x + y >= -3, x >= -5.
  LpProblem p(2);
  p.objective = {1.0, -1.0};
  p.set_free(0);
  p.lower[1] = -kInf;
  p.upper[1] = 2.0;
  p.add_row({{0, 1.0}, {1, 1.0}}, RowSense::GreaterEqual, -3.0);
  p.add_range_row({{0, 1.0}}, -5.0, 10.0);
  const auto s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.optimum == doctest::Approx(-7.0));
  CHECK(s.primal[0] == doctest::Approx(-5.0));
  CHECK(s.primal[1] == doctest::Approx(2.0));
  CHECK(s.certified(1e-9));
}

TEST_CASE("malformed input throws") {
  LpProblem p(2);
  p.objective[1] = std::nan("");
  CHECK_THROWS_AS(solve(p), LpFailure);
  LpProblem q(2);
  q.matrix.push_back(1.0);
  q.row_lower.push_back(0.0);
  q.row_upper.push_back(1.0);
  CHECK_THROWS_AS(solve(q), LpFailure);
  LpProblem r(1);
  r.lower[0] = 2.0;
  r.upper[0] = 1.0;
  CHECK_THROWS_AS(solve(r), LpFailure);
  LpProblem t(1);
  CHECK_THROWS_AS(t.add_row({{3, 1.0}}, RowSense::LessEqual, 0.0), LpFailure);
}

TEST_CASE("degenerate assignment terminates with certificate") {
  // 6x6 assignment with all costs equal: massively degenerate.
  const std::size_t k = 6;
  LpProblem p(k * k);
  for (auto& c : p.objective) c = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<LpProblem::Term> row, col;
    for (std::size_t j = 0; j < k; ++j) {
      row.emplace_back(i * k + j, 1.0);
      col.emplace_back(j * k + i, 1.0);
    }
    p.add_row(row, RowSense::Equal, 1.0);
    p.add_row(col, RowSense::Equal, 1.0);
  }
  const auto s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.optimum == doctest::Approx(6.0));
  CHECK(s.certified(1e-9));
}

TEST_CASE("random feasible programs certify") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 5, m = 2 + trial % 7;
    LpProblem p(n, trial % 2 ? ObjectiveSense::Maximize : ObjectiveSense::Minimize);
    for (auto& c : p.objective) c = u(rng);
    for (std::size_t j = 0; j < n; ++j) {
      p.lower[j] = -1.0 - std::abs(u(rng));
      p.upper[j] = 1.0 + std::abs(u(rng));
    }
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<LpProblem::Term> terms;
      for (std::size_t j = 0; j < n; ++j) terms.emplace_back(j, u(rng));
      p.add_range_row(terms, -1.0, 1.0);  // x = 0 is always feasible
    }
    const auto s = solve(p);
    REQUIRE(s.optimal());
    CHECK(s.certified(1e-9));
  }
}
