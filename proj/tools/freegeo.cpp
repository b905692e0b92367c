#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "freegeo/cli.hpp"
#include "freegeo/config.hpp"

namespace {

// "k=v,k=v" into gallery parameters.
freegeo::Params parse_params(const std::string& text) {
  freegeo::Params p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--params", "expected K=V, got " + item);
    try {
      p[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--params", "not a number in " + item);
    }
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Lipschitz-free spaces: norms, faces and SSD certificates"};
  app.set_version_flag("--version", std::string(freegeo::kVersion));
  app.require_subcommand(1);

  freegeo::RunConfig cfg;
  std::string params, pair;
  std::optional<double> gamma, epsilon;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;

  const std::map<std::string, std::string> about{
      {"validate", "check the metric axioms of a distance matrix"},
      {"gallery", "list named spaces or print one"},
      {"norm", "free-space norm with primal and dual certificates"},
      {"represent", "optimal molecule representation"},
      {"classify-pair", "Gromov products, property (G), rotundity of a pair"},
      {"classify-space", "check every pair for property (G)"},
      {"family-trend", "pair invariants along a family"},
      {"modulus", "sampled exposedness modulus"},
      {"perturb", "certify a finite sum of molecules after fattening"},
      {"ssd1", "certify a molecule at a peaking pair"},
      {"certify-petr", "certify the molecule of the pair without (G)"},
      {"distort", "distortion of the identity onto the fattened metric"}};
  for (const auto& name : freegeo::command_names()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    sub->add_option("--space", cfg.space_path, "space JSON file")->check(CLI::ExistingFile);
    sub->add_option("--gallery", cfg.gallery, "named gallery space or family");
    sub->add_option("--params", params, "gallery parameters K=V,K=V");
    sub->add_option("--element", cfg.element_path, "element JSON file")->check(CLI::ExistingFile);
    sub->add_option("--function", cfg.function_path, "function JSON file (g, or f for certify-petr)")
        ->check(CLI::ExistingFile);
    sub->add_option("--norming", cfg.norming_path, "norming or peaking function JSON file")
        ->check(CLI::ExistingFile);
    sub->add_option("--gamma", gamma, "fattening gamma")->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", epsilon, "target epsilon")->check(CLI::PositiveNumber);
    sub->add_option("--eta-grid", cfg.eta_grid, "slab depths")->delimiter(',')->check(CLI::Range(0.0, 1.0));
    sub->add_option("--samples", samples, "objectives per depth")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "generator seed");
    sub->add_option("--pair", pair, "X,Y");
    sub->add_option("--indices", cfg.indices, "family indices")->delimiter(',');
    sub->add_option("--out", cfg.out, "report path (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    app.parse(argc, argv);
    cfg.params = parse_params(params);
    if (!pair.empty()) {
      const auto comma = pair.find(',');
      if (comma == std::string::npos) throw CLI::ValidationError("--pair", "expected X,Y");
      cfg.pair = std::make_pair(std::stoul(pair.substr(0, comma)), std::stoul(pair.substr(comma + 1)));
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: bad --pair: " << e.what() << '\n';
    return 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.gamma = gamma;
  cfg.epsilon = epsilon;
  cfg.samples = samples;
  cfg.seed = seed;

  try {
    freegeo::apply_environment();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return freegeo::run(cfg, std::cout, std::cerr);
}
