#include "freegeo/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "freegeo/config.hpp"

namespace freegeo {

MetricFamily::MetricFamily(std::string name, Params params, std::size_t min_index,
                           Generator generator)
    : name_(std::move(name)),
      params_(std::move(params)),
      min_index_(min_index),
      generator_(std::move(generator)) {}

FamilyMember MetricFamily::at(std::size_t index) const {
  if (index < min_index_)
    throw Error("family '" + name_ + "' starts at index " + std::to_string(min_index_));
  FamilyMember m = generator_(index);
  if (m.x == m.y || m.x >= m.space.size() || m.y >= m.space.size())
    throw Error("family '" + name_ + "' produced an invalid distinguished pair");
  return m;
}

namespace {

using ExactRows = std::vector<std::vector<Rational>>;

double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

std::size_t int_param(const Params& p, const std::string& key, std::size_t fallback,
                      std::size_t lo, std::size_t hi) {
  const double v = param(p, key, static_cast<double>(fallback));
  if (!std::isfinite(v) || v != std::floor(v) || v < static_cast<double>(lo) ||
      v > static_cast<double>(hi)) {
    throw Error("parameter '" + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
  }
  return static_cast<std::size_t>(v);
}

double positive_param(const Params& p, const std::string& key, double fallback) {
  const double v = param(p, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw Error("parameter '" + key + "' must be positive");
  return v;
}

void reject_unknown(const Params& p, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : p) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw Error("unknown parameter '" + key + "'");
  }
}

ExactRows zeros(std::size_t n) { return ExactRows(n, std::vector<Rational>(n, Rational(0))); }

void set_sym(ExactRows& d, std::size_t i, std::size_t j, Rational v) {
  d[i][j] = v;
  d[j][i] = v;
}

bool is_small_integer(double v) { return v == std::floor(v) && std::abs(v) < 1e6; }

PointedMetricSpace make_line(const Params& p) {
  reject_unknown(p, {"n", "spacing"});
  const std::size_t n = int_param(p, "n", 4, 1, 4096);
  const double s = positive_param(p, "spacing", 1.0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  if (is_small_integer(s)) {
    ExactRows d = zeros(n);
    const auto step = static_cast<std::int64_t>(s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = Rational(step * std::abs(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j)));
    return PointedMetricSpace(d, std::move(labels));
  }
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d(i, j) = static_cast<double>(i > j ? i - j : j - i) * s;
  return PointedMetricSpace(std::move(d), std::move(labels));
}

PointedMetricSpace make_equilateral(const Params& p) {
  reject_unknown(p, {"n", "side"});
  const std::size_t n = int_param(p, "n", 3, 1, 4096);
  const double side = positive_param(p, "side", 1.0);
  if (is_small_integer(side)) {
    ExactRows d = zeros(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) d[i][j] = Rational(static_cast<std::int64_t>(side));
    return PointedMetricSpace(d);
  }
  DistanceMatrix d(n, side);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 0.0;
  return PointedMetricSpace(std::move(d));
}

FamilyMember make_tree(std::size_t n) {
  ExactRows d = zeros(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    set_sym(d, 0, i, Rational(1));
    for (std::size_t j = i + 1; j <= n; ++j) set_sym(d, i, j, Rational(2));
  }
  return {PointedMetricSpace(d), 1, n >= 2 ? 2u : 0u};
}

PointedMetricSpace make_three_point_aligned(const Params& p) {
  reject_unknown(p, {});
  ExactRows d = zeros(3);
  set_sym(d, 0, 1, Rational(1));
  set_sym(d, 0, 2, Rational(1));
  set_sym(d, 1, 2, Rational(2));
  return PointedMetricSpace(d, {"0", "-1", "1"});
}

PointedMetricSpace make_cantor(const Params& p) {
  reject_unknown(p, {"level"});
  const std::size_t level = int_param(p, "level", 2, 0, 6);
  std::vector<std::pair<Rational, Rational>> intervals{{Rational(0), Rational(1)}};
  for (std::size_t l = 0; l < level; ++l) {
    std::vector<std::pair<Rational, Rational>> next;
    for (const auto& [a, b] : intervals) {
      const Rational third = (b - a) / 3;
      next.emplace_back(a, a + third);
      next.emplace_back(b - third, b);
    }
    intervals = std::move(next);
  }
  std::vector<Rational> pts;
  for (const auto& [a, b] : intervals) {
    pts.push_back(a);
    pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  ExactRows d = zeros(n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(pts[i].numerator()) +
                     (pts[i].denominator() == 1 ? "" : "/" + std::to_string(pts[i].denominator())));
    for (std::size_t j = 0; j < n; ++j) d[i][j] = pts[i] > pts[j] ? pts[i] - pts[j] : pts[j] - pts[i];
  }
  return PointedMetricSpace(d, std::move(labels));
}

std::vector<std::string> xyz_labels(std::size_t k) {
  std::vector<std::string> labels{"x", "y"};
  for (std::size_t i = 1; i <= k; ++i) labels.push_back("z" + std::to_string(i));
  return labels;
}

// d(x,y) = d(z_i,z_j) = 1, d(x,z_i) = 1/2, d(y,z_i) = 1/2 + ratio^i.
FamilyMember make_petr(std::size_t k, double ratio) {
  const std::size_t n = k + 2;
  if (ratio == 0.5 && k <= 40) {
    ExactRows d = zeros(n);
    set_sym(d, 0, 1, Rational(1));
    for (std::size_t i = 1; i <= k; ++i) {
      set_sym(d, 0, i + 1, Rational(1, 2));
      set_sym(d, 1, i + 1, Rational(1, 2) + Rational(1, std::int64_t{1} << i));
      for (std::size_t j = i + 1; j <= k; ++j) set_sym(d, i + 1, j + 1, Rational(1));
    }
    return {PointedMetricSpace(d, xyz_labels(k)), 0, 1};
  }
  DistanceMatrix d(n);
  auto sym = [&](std::size_t i, std::size_t j, double v) { d(i, j) = d(j, i) = v; };
  sym(0, 1, 1.0);
  for (std::size_t i = 1; i <= k; ++i) {
    sym(0, i + 1, 0.5);
    sym(1, i + 1, 0.5 + std::pow(ratio, static_cast<double>(i)));
    for (std::size_t j = i + 1; j <= k; ++j) sym(i + 1, j + 1, 1.0);
  }
  return {PointedMetricSpace(std::move(d), xyz_labels(k)), 0, 1};
}

// d(x,y) = 1, d(x,z_n) = 1/(2n), d(y,z_n) = 1 - 1/(4n), d(z_n,z_m) = 1/(2n) + 1/(2m).
FamilyMember make_rotund_not_g(std::size_t k) {
  const std::size_t n = k + 2;
  ExactRows d = zeros(n);
  set_sym(d, 0, 1, Rational(1));
  for (std::size_t i = 1; i <= k; ++i) {
    const auto ii = static_cast<std::int64_t>(i);
    set_sym(d, 0, i + 1, Rational(1, 2 * ii));
    set_sym(d, 1, i + 1, Rational(1) - Rational(1, 4 * ii));
    for (std::size_t j = i + 1; j <= k; ++j) {
      const auto jj = static_cast<std::int64_t>(j);
      set_sym(d, i + 1, j + 1, Rational(1, 2 * ii) + Rational(1, 2 * jj));
    }
  }
  return {PointedMetricSpace(d, xyz_labels(k)), 0, 1};
}

// Points 0 and p_n = e_1 + (1/n) e_n in c_0 for n = 2..k+1, sup-norm distances.
FamilyMember make_c0_luna(std::size_t k) {
  const std::size_t n = k + 1;
  ExactRows d = zeros(n);
  std::vector<std::string> labels{"0"};
  for (std::size_t a = 1; a <= k; ++a) {
    const auto na = static_cast<std::int64_t>(a + 1);
    labels.push_back("p" + std::to_string(na));
    set_sym(d, 0, a, Rational(1));
    for (std::size_t b = a + 1; b <= k; ++b) set_sym(d, a, b, Rational(1, na));
  }
  return {PointedMetricSpace(d, std::move(labels)), 1, k >= 2 ? 2u : 0u};
}

double petr_ratio(const Params& p) {
  const double r = positive_param(p, "ratio", 0.5);
  if (r > 1.0) throw Error("parameter 'ratio' must lie in (0, 1]");
  return r;
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"line", "equilateral", "branching_tree", "three_point_aligned",
          "cantor", "petr", "rotund_not_G", "c0_luna"};
}

bool gallery_is_family(std::string_view name) {
  return name == "petr" || name == "rotund_not_G" || name == "branching_tree" ||
         name == "c0_luna";
}

MetricFamily gallery_family(std::string_view name, const Params& params) {
  if (name == "petr") {
    reject_unknown(params, {"ratio", "index"});
    const double ratio = petr_ratio(params);
    return MetricFamily("petr", {{"ratio", ratio}}, 1,
                        [ratio](std::size_t k) { return make_petr(k, ratio); });
  }
  if (name == "rotund_not_G") {
    reject_unknown(params, {"index"});
    return MetricFamily("rotund_not_G", {}, 1, make_rotund_not_g);
  }
  if (name == "branching_tree") {
    reject_unknown(params, {"index", "n"});
    return MetricFamily("branching_tree", {}, 2, make_tree);
  }
  if (name == "c0_luna") {
    reject_unknown(params, {"index"});
    return MetricFamily("c0_luna", {}, 2, make_c0_luna);
  }
  throw Error("'" + std::string(name) + "' is not a metric family");
}

PointedMetricSpace gallery_space(std::string_view name, const Params& params) {
  if (name == "line") return make_line(params);
  if (name == "equilateral") return make_equilateral(params);
  if (name == "three_point_aligned") return make_three_point_aligned(params);
  if (name == "cantor") return make_cantor(params);
  if (name == "branching_tree") {
    reject_unknown(params, {"n", "index"});
    const std::size_t key = params.count("n") ? int_param(params, "n", 3, 1, 4096)
                                              : int_param(params, "index", 3, 1, 4096);
    return make_tree(key).space;
  }
  if (name == "petr") {
    reject_unknown(params, {"index", "ratio"});
    return make_petr(int_param(params, "index", 5, 1, 4096), petr_ratio(params)).space;
  }
  if (name == "rotund_not_G") {
    reject_unknown(params, {"index"});
    return make_rotund_not_g(int_param(params, "index", 10, 1, 4096)).space;
  }
  if (name == "c0_luna") {
    reject_unknown(params, {"index"});
    return make_c0_luna(int_param(params, "index", 5, 1, 4096)).space;
  }
  throw Error("unknown gallery item '" + std::string(name) + "'");
}

}  // namespace freegeo
