#include "freegeo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "freegeo/config.hpp"

namespace freegeo::io {

namespace {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw Error("exact entries must be integers or \"p/q\" strings");
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error("cannot read exact entry \"" + s + "\"");
  }
}

std::string format_rational(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::vector<std::string> labels_from_json(const Json& j) {
  if (!j.contains("labels")) return {};
  return j.at("labels").get<std::vector<std::string>>();
}

void check_n(const Json& j, std::size_t n) {
  if (j.contains("n") && j.at("n").get<std::size_t>() != n)
    throw Error("\"n\" does not match the distance matrix");
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v == 0.0 ? 0.0 : v;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("malformed JSON in " + path + ": " + e.what());
  }
}

DistanceMatrix matrix_from_json(const Json& j) {
  return guarded("space", [&] {
    if (j.contains("dist")) {
      const auto d = DistanceMatrix::from_rows(j.at("dist").get<std::vector<std::vector<double>>>());
      check_n(j, d.size());
      return d;
    }
    if (!j.contains("exact")) throw Error("space needs \"dist\" or \"exact\"");
    const auto& rows = j.at("exact");
    std::vector<std::vector<double>> d;
    for (const auto& row : rows) {
      d.emplace_back();
      for (const auto& e : row) d.back().push_back(boost::rational_cast<double>(parse_rational(e)));
    }
    auto m = DistanceMatrix::from_rows(d);
    check_n(j, m.size());
    return m;
  });
}

PointedMetricSpace space_from_json(const Json& j) {
  return guarded("space", [&] {
    if (j.contains("exact")) {
      std::vector<std::vector<Rational>> exact;
      for (const auto& row : j.at("exact")) {
        exact.emplace_back();
        for (const auto& e : row) exact.back().push_back(parse_rational(e));
      }
      check_n(j, exact.size());
      return PointedMetricSpace(exact, labels_from_json(j));
    }
    return PointedMetricSpace(matrix_from_json(j), labels_from_json(j));
  });
}

Json to_json(const PointedMetricSpace& space) {
  Json j;
  j["n"] = space.size();
  if (!space.labels().empty()) j["labels"] = space.labels();
  j["dist"] = space.matrix().rows();
  if (space.has_exact()) {
    Json rows = Json::array();
    for (std::size_t a = 0; a < space.size(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < space.size(); ++b)
        row.push_back(format_rational(space.exact_dist(a, b)));
      rows.push_back(std::move(row));
    }
    j["exact"] = std::move(rows);
  }
  return j;
}

LipFunction function_from_json(const Json& j, const PointedMetricSpace& space) {
  return guarded("function", [&] {
    return LipFunction(space, j.at("values").get<std::vector<double>>());
  });
}

Json to_json(const LipFunction& f) {
  return Json{{"values", numbers(f.values())}, {"lip_norm", number(f.lip_norm())}};
}

bool has_molecules(const Json& j) { return j.contains("molecules"); }

MoleculeCombination combination_from_json(const Json& j) {
  return guarded("element", [&] {
    MoleculeCombination c;
    for (const auto& m : j.at("molecules"))
      c.terms.push_back({m.at("lambda").get<double>(), m.at("x").get<std::size_t>(),
                         m.at("y").get<std::size_t>()});
    return c;
  });
}

FreeElement element_from_json(const Json& j, const PointedMetricSpace& space) {
  if (has_molecules(j)) return combination_from_json(j).to_element(space);
  return guarded("element", [&] {
    return FreeElement(space, j.at("masses").get<std::vector<double>>());
  });
}

Json to_json(const FreeElement& mu) { return Json{{"masses", numbers(mu.masses())}}; }

Json to_json(const MoleculeCombination& c) {
  Json terms = Json::array();
  for (const auto& m : c.terms)
    terms.push_back(Json{{"lambda", number(m.lambda)}, {"x", m.x}, {"y", m.y}});
  return Json{{"molecules", std::move(terms)}, {"total", number(c.total())}};
}

Json to_json(const ValidationReport& r) {
  Json entries = Json::array(), triangles = Json::array();
  for (const auto& e : r.entries) entries.push_back(Json{{"i", e.i}, {"j", e.j}, {"what", e.what}});
  for (const auto& t : r.triangles)
    triangles.push_back(Json{{"i", t.i}, {"j", t.j}, {"k", t.k}, {"excess", number(t.excess)}});
  return Json{{"ok", r.ok}, {"entry_violations", std::move(entries)},
              {"triangle_violations", std::move(triangles)}};
}

Json to_json(const LpSolution& s) {
  const char* status = s.status == LpStatus::Optimal      ? "optimal"
                       : s.status == LpStatus::Infeasible ? "infeasible"
                                                          : "unbounded";
  return Json{{"status", status},
              {"optimum", number(s.optimum)},
              {"dual_objective", number(s.dual_objective)},
              {"primal_residual", number(s.primal_residual)},
              {"dual_residual", number(s.dual_residual)},
              {"duality_gap", number(s.duality_gap)},
              {"pivots", s.pivots}};
}

Json to_json(const NormCertificate& c) {
  Json arcs = Json::array();
  for (std::size_t a = 0; a < c.arcs.size(); ++a) {
    const double w = c.flow.primal[a];
    if (w > 1e-13) arcs.push_back(Json{{"from", c.arcs[a].first}, {"to", c.arcs[a].second},
                                       {"flow", number(w)}});
  }
  return Json{{"value", number(c.value)},
              {"primal_flow", to_json(c.flow)},
              {"dual_lipschitz", to_json(c.lipschitz)},
              {"gap", number(c.gap())},
              {"flow_arcs", std::move(arcs)}};
}

Json to_json(const PairGeometryReport& r) {
  Json profile = Json::array();
  for (const auto& s : r.concavity_profile)
    profile.push_back(Json{{"radius", number(s.radius)}, {"floor", number(s.floor)}});
  Json j{{"x", r.x},
         {"y", r.y},
         {"d_xy", number(r.d_xy)},
         {"eta", number(r.eta)},
         {"delta_rotund", number(r.delta_rotund)}};
  if (r.eta_exact) j["eta_exact"] = format_rational(*r.eta_exact);
  if (r.delta_exact) j["delta_exact"] = format_rational(*r.delta_exact);
  if (std::isfinite(r.eta)) j["eta_witness"] = r.eta_witness;
  j["has_G"] = r.has_G;
  j["is_rotund"] = r.is_rotund;
  j["is_concave"] = r.is_concave;
  j["extreme_molecule"] = r.extreme_molecule;
  j["concavity_profile"] = std::move(profile);
  return j;
}

Json to_json(const SpaceClassification& c) {
  return Json{{"luna", c.luna},
              {"min_eta", number(c.min_eta)},
              {"witness", Json::array({c.witness_x, c.witness_y})}};
}

Json to_json(const Check& c) {
  return Json{{"name", c.name},
              {"value", number(c.value)},
              {"bound", number(c.bound)},
              {"margin", number(c.margin)},
              {"passed", c.passed}};
}

Json to_json(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back(to_json(c));
  return a;
}

Json to_json(const ModulusCurve& c) {
  Json pts = Json::array();
  for (const auto& p : c.points)
    pts.push_back(Json{{"eta", number(p.eta)},
                       {"worst_dist", number(p.worst)},
                       {"raw_worst_dist", number(p.raw_worst)},
                       {"samples", p.samples}});
  return Json{{"seed", c.seed}, {"norm", number(c.norm)}, {"points", std::move(pts)}};
}

Json to_json(const Ssd1Result& r) {
  return Json{{"gamma_eps", number(r.gamma_eps)},
              {"h_norm", number(r.h_norm)},
              {"distance", number(r.distance)},
              {"bound", number(r.bound)},
              {"h_hat", to_json(r.h_hat)},
              {"checks", to_json(r.checks)}};
}

Json to_json(const Main1Setup& s) {
  Json j{{"gamma", number(s.gamma)},
         {"eps", number(s.eps)},
         {"subset", s.subset},
         {"beta", number(s.beta)},
         {"T", number(s.big_t)},
         {"T0", number(s.t0)},
         {"S", number(s.s_sup)},
         {"c", number(s.c)},
         {"K", number(s.k)},
         {"rho_parameter", number(s.rho_parameter)},
         {"rho", number(s.rho)},
         {"bound", number(s.bound)}};
  if (s.mu) j["mu"] = to_json(*s.mu);
  if (s.f) j["f"] = to_json(*s.f);
  if (s.f_gamma) j["f_gamma"] = to_json(*s.f_gamma);
  if (s.g_gamma) j["G_gamma"] = to_json(*s.g_gamma);
  return j;
}

Json to_json(const PerturbationResult& r) {
  Json j{{"status", to_string(r.status)}};
  if (!r.message.empty()) j["message"] = r.message;
  j["constants"] = to_json(r.setup);
  j["h_norm"] = number(r.h_norm);
  j["projection_distance"] = number(r.projection_distance);
  j["distance"] = number(r.distance);
  j["attainment_gap"] = number(r.attainment_gap);
  if (r.g) j["g"] = to_json(*r.g);
  if (r.h) j["h"] = to_json(*r.h);
  if (r.psi) j["psi"] = to_json(*r.psi);
  j["checks"] = to_json(r.checks);
  return j;
}

Json to_json(const CorollaryWitness& w) {
  return Json{{"f_tilde", to_json(w.f_tilde)},
              {"f_norming", to_json(w.f_norming)},
              {"positive_case_margin", number(w.positive_case_margin)},
              {"negative_case_margin", number(w.negative_case_margin)},
              {"checks", to_json(w.checks)}};
}

Json to_json(const PetrCertificate& c) {
  return Json{{"certified", c.certified},
              {"gamma_cut", number(c.gamma_cut)},
              {"n0", c.n0},
              {"projection_distance", number(c.projection_distance)},
              {"distance", number(c.distance)},
              {"h", to_json(c.h)},
              {"checks", to_json(c.checks)}};
}

std::string curve_csv(const ModulusCurve& c) {
  std::ostringstream os;
  os << "eta,worst_dist,raw_worst_dist,samples\n";
  for (const auto& p : c.points)
    os << shortest(p.eta) << ',' << shortest(p.worst) << ',' << shortest(p.raw_worst) << ','
       << p.samples << '\n';
  return os.str();
}

std::string trend_csv(const std::vector<TrendRow>& rows) {
  std::ostringstream os;
  os << "index,points,eta,delta_rotund,has_G,is_rotund\n";
  for (const auto& r : rows)
    os << r.index << ',' << r.points << ',' << shortest(r.eta) << ',' << shortest(r.delta_rotund)
       << ',' << (r.report.has_G ? 1 : 0) << ',' << (r.report.is_rotund ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace freegeo::io
