#include "freegeo/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "freegeo/config.hpp"
#include "freegeo/free_space.hpp"
#include "freegeo/io.hpp"
#include "freegeo/pair_geometry.hpp"
#include "freegeo/ssd.hpp"

namespace freegeo {

namespace {

using io::Json;
using io::number;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr std::size_t kDefaultSamples = 32;

/// A report and the exit code it implies.
struct Outcome {
  Json report;
  int code = 0;
  std::string csv{};  // used instead of the report when non-empty
};

struct Loaded {
  PointedMetricSpace space;
  std::optional<std::pair<std::size_t, std::size_t>> pair;  // family default
  Json echo;
};

std::size_t default_index(const std::string& name) {
  static const std::map<std::string, std::size_t> defaults{
      {"petr", 5}, {"rotund_not_G", 10}, {"branching_tree", 3}, {"c0_luna", 5}};
  return defaults.at(name);
}

Json params_json(const Params& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = number(v);
  return j;
}

Loaded load_space(const RunConfig& c) {
  if (!c.space_path.empty() && !c.gallery.empty())
    throw Error("give either --space or --gallery, not both");
  if (!c.space_path.empty()) {
    const auto space = io::space_from_json(io::read_json(c.space_path));
    return {space, std::nullopt, Json{{"space", c.space_path}}};
  }
  if (c.gallery.empty()) throw Error("this command needs --space FILE or --gallery NAME");
  const auto space = gallery_space(c.gallery, c.params);
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  if (gallery_is_family(c.gallery)) {
    std::size_t index = default_index(c.gallery);
    if (c.params.count("index")) index = static_cast<std::size_t>(c.params.at("index"));
    else if (c.params.count("n")) index = static_cast<std::size_t>(c.params.at("n"));
    const auto member = gallery_family(c.gallery, c.params).at(index);
    pair = std::make_pair(member.x, member.y);
  }
  return {space, pair, Json{{"gallery", c.gallery}, {"params", params_json(c.params)}}};
}

std::pair<std::size_t, std::size_t> require_pair(const RunConfig& c, const Loaded& l) {
  if (c.pair) return *c.pair;
  if (l.pair) return *l.pair;
  throw Error("this command needs --pair X,Y");
}

double require_value(const std::optional<double>& v, const char* flag) {
  if (!v) throw Error(std::string("this command needs ") + flag);
  return *v;
}

Json header(const RunConfig& c, const std::string& statement) {
  const auto& tol = tolerances();
  return Json{{"tool", "freegeo"},
              {"version", kVersion},
              {"tolerances", Json{{"metric", number(tol.metric)}, {"lp", number(tol.lp)}}},
              {"command", c.command},
              {"statement", statement}};
}

Outcome cmd_validate(const RunConfig& c) {
  Json r = header(c, "metric axioms on a finite distance matrix");
  DistanceMatrix d;
  if (!c.space_path.empty()) {
    d = io::matrix_from_json(io::read_json(c.space_path));
    r["inputs"] = Json{{"space", c.space_path}};
  } else {
    const auto l = load_space(c);
    d = l.space.matrix();
    r["inputs"] = l.echo;
  }
  const auto report = validate(d);
  r["n"] = d.size();
  r["result"] = io::to_json(report);
  return {r, report.ok ? 0 : 2};
}

Outcome cmd_gallery(const RunConfig& c) {
  if (c.gallery.empty()) {
    Json r = header(c, "catalogue of named spaces");
    r["names"] = gallery_names();
    Json fam = Json::array();
    for (const auto& n : gallery_names())
      if (gallery_is_family(n)) fam.push_back(n);
    r["families"] = std::move(fam);
    return {r};
  }
  const auto l = load_space(c);
  Json r = header(c, "named example space");
  r["inputs"] = l.echo;
  r["space"] = io::to_json(l.space);
  if (l.pair) r["pair"] = Json::array({l.pair->first, l.pair->second});
  r["uniform_discreteness"] = number(uniform_discreteness_constant(l.space));
  return {r};
}

FreeElement load_element(const RunConfig& c, const Loaded& l) {
  if (c.element_path.empty()) {
    if (c.pair) return FreeElement::molecule(l.space, c.pair->first, c.pair->second);
    throw Error("this command needs --element FILE or --pair X,Y");
  }
  return io::element_from_json(io::read_json(c.element_path), l.space);
}

Json element_echo(const RunConfig& c, Json echo) {
  if (!c.element_path.empty()) echo["element"] = c.element_path;
  else if (c.pair) echo["pair"] = Json::array({c.pair->first, c.pair->second});
  return echo;
}

Outcome cmd_norm(const RunConfig& c) {
  const auto l = load_space(c);
  const auto mu = load_element(c, l);
  Json r = header(c, "free-space norm as a min-cost flow and as a Lipschitz maximum");
  r["inputs"] = element_echo(c, l.echo);
  r["element"] = io::to_json(mu);
  const auto cert = free_norm_certified(mu);
  r["norm"] = io::to_json(cert);
  if (!mu.is_zero()) r["norming_functional"] = io::to_json(norming_functional(mu));
  return {r};
}

Outcome cmd_represent(const RunConfig& c) {
  const auto l = load_space(c);
  const auto mu = load_element(c, l);
  Json r = header(c, "optimal molecule representation from the optimal flow");
  r["inputs"] = element_echo(c, l.echo);
  const auto rep = optimal_representation(mu);
  const double norm = free_norm(mu);
  r["norm"] = number(norm);
  r["representation"] = io::to_json(rep);
  r["weight_excess"] = number(rep.total() - norm);
  return {r};
}

Outcome cmd_classify_pair(const RunConfig& c) {
  const auto l = load_space(c);
  const auto [x, y] = require_pair(c, l);
  const auto report = analyze_pair(l.space, x, y);
  Json r = header(c, "Gromov products of a pair, property (G), rotundity and concavity");
  Json echo = l.echo;
  echo["pair"] = Json::array({x, y});
  r["inputs"] = echo;
  r["result"] = io::to_json(report);
  const auto f = aux_f_xy(l.space, x, y);
  const auto peak = peaking_check(f, x, y);
  r["aux_function"] = io::to_json(f);
  r["peaking_constant"] = peak ? number(*peak) : Json(nullptr);
  return {r};
}

Outcome cmd_classify_space(const RunConfig& c) {
  const auto l = load_space(c);
  Json r = header(c, "uniform non-alignment of every pair");
  r["inputs"] = l.echo;
  r["result"] = io::to_json(classify_space(l.space));
  return {r};
}

Outcome cmd_family_trend(const RunConfig& c) {
  if (c.gallery.empty() || !gallery_is_family(c.gallery))
    throw Error("family-trend needs --gallery with a family name");
  Params fp = c.params;
  fp.erase("index");
  const auto family = gallery_family(c.gallery, fp);
  std::vector<std::size_t> idx = c.indices;
  if (idx.empty())
    for (std::size_t k = family.min_index(); k < family.min_index() + 10; ++k) idx.push_back(k);
  const auto rows = family_trend(family, idx);
  if (c.format == "csv") return {Json(), 0, io::trend_csv(rows)};
  Json r = header(c, "pair invariants along finite truncations of an infinite example");
  r["inputs"] = Json{{"gallery", c.gallery}, {"params", params_json(fp)}, {"indices", idx}};
  Json out = Json::array();
  for (const auto& row : rows)
    out.push_back(Json{{"index", row.index}, {"points", row.points}, {"report", io::to_json(row.report)}});
  r["rows"] = std::move(out);
  return {r};
}

Outcome cmd_modulus(const RunConfig& c) {
  if (!c.seed) throw Error("modulus needs --seed");
  if (c.eta_grid.empty()) throw Error("modulus needs --eta-grid");
  const auto l = load_space(c);
  const auto mu = load_element(c, l);
  const std::size_t samples = c.samples.value_or(kDefaultSamples);
  const auto curve = exposedness_probe(mu, c.eta_grid, samples, *c.seed);
  if (c.format == "csv") return {Json(), 0, io::curve_csv(curve)};
  Json r = header(c, "sampled exposedness modulus of the dual face (a lower bound)");
  Json echo = element_echo(c, l.echo);
  echo["eta_grid"] = c.eta_grid;
  echo["samples"] = samples;
  echo["seed"] = *c.seed;
  r["inputs"] = echo;
  r["curve"] = io::to_json(curve);
  return {r};
}

int status_code(PerturbationStatus s) { return s == PerturbationStatus::Certified ? 0 : 2; }

Outcome cmd_perturb(const RunConfig& c) {
  const auto l = load_space(c);
  const double gamma = require_value(c.gamma, "--gamma");
  const double eps = require_value(c.epsilon, "--epsilon");
  if (c.element_path.empty()) throw Error("perturb needs --element FILE with molecules");
  const auto ej = io::read_json(c.element_path);
  if (!io::has_molecules(ej)) throw Error("perturb needs the element as \"molecules\"");
  const auto comb = io::combination_from_json(ej);
  std::optional<LipFunction> f;
  if (!c.norming_path.empty()) f = io::function_from_json(io::read_json(c.norming_path), l.space);
  const std::uint64_t seed = c.seed.value_or(kDefaultSeed);

  Json r = header(c, "finite sums of molecules are SSD points after fattening the metric by gamma");
  Json echo = element_echo(c, l.echo);
  echo["gamma"] = number(gamma);
  echo["epsilon"] = number(eps);
  if (!c.norming_path.empty()) echo["norming"] = c.norming_path;
  const auto setup = main1_prepare(l.space, gamma, comb, f, eps);
  std::optional<LipFunction> g;
  if (!c.function_path.empty()) {
    g = io::function_from_json(io::read_json(c.function_path), setup.fattened);
    echo["function"] = c.function_path;
  } else if (setup.ready()) {
    g = perturbed_norming(DualFace(*setup.mu), setup.rho / 2.0, seed);
    echo["seed"] = seed;
    echo["g_depth"] = number(setup.rho / 2.0);
  }
  r["inputs"] = echo;
  const auto res = g ? main1_pipeline(setup, *g) : main1_pipeline(setup, LipFunction::zero(setup.fattened));
  r["result"] = io::to_json(res);
  return {r, status_code(res.status)};
}

Outcome cmd_ssd1(const RunConfig& c) {
  const auto l = load_space(c);
  const auto [x, y] = require_pair(c, l);
  const double eps = require_value(c.epsilon, "--epsilon");
  const LipFunction f = c.norming_path.empty()
                            ? aux_f_xy(l.space, x, y)
                            : io::function_from_json(io::read_json(c.norming_path), l.space);
  const auto peak = peaking_check(f, x, y);
  if (!peak) throw PreconditionError("f does not peak at the pair");
  const double gamma_eps = ssd1_gamma_eps(*peak, eps);
  const std::uint64_t seed = c.seed.value_or(kDefaultSeed);
  Json echo = l.echo;
  echo["pair"] = Json::array({x, y});
  echo["epsilon"] = number(eps);
  LipFunction g = LipFunction::zero(l.space);
  if (!c.function_path.empty()) {
    g = io::function_from_json(io::read_json(c.function_path), l.space);
    echo["function"] = c.function_path;
  } else {
    g = perturbed_norming(DualFace(FreeElement::molecule(l.space, x, y)), gamma_eps / 2.0, seed);
    echo["seed"] = seed;
    echo["g_depth"] = number(gamma_eps / 2.0);
  }
  if (!c.norming_path.empty()) echo["norming"] = c.norming_path;
  Json r = header(c, "a molecule at a peaking pair is an SSD point");
  r["inputs"] = echo;
  r["peaking_constant"] = number(*peak);
  const auto res = ssd1_perturb(x, y, f, *peak, g, eps);
  r["result"] = io::to_json(res);
  return {r, all_passed(res.checks) ? 0 : 2};
}

Outcome cmd_certify_petr(const RunConfig& c) {
  const auto l = load_space(c);
  const double eps = require_value(c.epsilon, "--epsilon");
  const std::size_t samples = c.samples.value_or(kDefaultSamples);
  const std::uint64_t seed = c.seed.value_or(kDefaultSeed);
  const double gamma_cut = petr_gamma_cut(l.space, eps, samples, seed);
  Json echo = l.echo;
  echo["epsilon"] = number(eps);
  echo["samples"] = samples;
  echo["seed"] = seed;
  LipFunction f = LipFunction::zero(l.space);
  if (!c.function_path.empty()) {
    f = io::function_from_json(io::read_json(c.function_path), l.space);
    echo["function"] = c.function_path;
  } else {
    f = perturbed_norming(DualFace(FreeElement::molecule(l.space, 0, 1)), gamma_cut / 2.0, seed);
    echo["f_depth"] = number(gamma_cut / 2.0);
  }
  Json r = header(c, "the molecule of a pair without property (G) is still an SSD point");
  r["inputs"] = echo;
  const auto data = petr_data(l.space, eps);
  r["eps_sequence"] = data.eps_seq;
  const auto cert = petr_certificate(l.space, eps, gamma_cut, f);
  r["result"] = io::to_json(cert);
  return {r, cert.certified ? 0 : 2};
}

Outcome cmd_distort(const RunConfig& c) {
  const auto l = load_space(c);
  const double theta = uniform_discreteness_constant(l.space);
  Json echo = l.echo;
  double gamma;
  if (c.gamma) {
    gamma = *c.gamma;
  } else {
    gamma = require_value(c.epsilon, "--gamma or --epsilon") * theta;
    echo["epsilon"] = number(*c.epsilon);
  }
  echo["gamma"] = number(gamma);
  Json r = header(c, "the identity onto the gamma-fattened metric is bi-Lipschitz");
  r["inputs"] = echo;
  r["theta"] = number(theta);
  r["distortion"] = number(bilipschitz_distortion(l.space, gamma));
  r["formula"] = number(1.0 + gamma / theta);
  r["inverse_lipschitz"] = number(1.0);
  return {r};
}

using Handler = std::function<Outcome(const RunConfig&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"validate", cmd_validate},
      {"gallery", cmd_gallery},
      {"norm", cmd_norm},
      {"represent", cmd_represent},
      {"classify-pair", cmd_classify_pair},
      {"classify-space", cmd_classify_space},
      {"family-trend", cmd_family_trend},
      {"modulus", cmd_modulus},
      {"perturb", cmd_perturb},
      {"ssd1", cmd_ssd1},
      {"certify-petr", cmd_certify_petr},
      {"distort", cmd_distort}};
  return h;
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> names;
  for (const auto& [n, h] : handlers()) names.push_back(n);
  return names;
}

void apply_environment() {
  const char* v = std::getenv("FREEGEO_TOL");
  if (!v || !*v) return;
  char* end = nullptr;
  const double tol = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(tol > 0.0) || !std::isfinite(tol))
    throw Error(std::string("FREEGEO_TOL must be a positive number, got '") + v + "'");
  Tolerances t = tolerances();
  t.lp = tol;
  set_tolerances(t);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto& h = handlers();
  const auto it = std::find_if(h.begin(), h.end(),
                               [&](const auto& e) { return e.first == config.command; });
  if (it == h.end()) {
    err << "error: unknown command '" << config.command << "'\n";
    return 1;
  }
  if (config.format != "json" && config.format != "csv") {
    err << "error: --format must be json or csv\n";
    return 1;
  }
  Outcome o;
  try {
    o = it->second(config);
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (config.format == "csv" && o.csv.empty()) {
    err << "error: command '" << config.command << "' has no CSV form\n";
    return 1;
  }
  const std::string text = o.csv.empty() ? o.report.dump(2) + "\n" : o.csv;
  if (config.out.empty()) {
    out << text;
  } else {
    std::ofstream f(config.out, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write " << config.out << '\n';
      return 1;
    }
  }
  if (o.code == 2) err << "checks did not pass; see the report\n";
  return o.code;
}

}  // namespace freegeo
