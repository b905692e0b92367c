#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "freegeo/gallery.hpp"

namespace freegeo {

struct RunConfig {
  std::string command;
  std::string space_path;       // --space
  std::string gallery;          // --gallery
  Params params;                // --params k=v,...
  std::string element_path;     // --element
  std::string function_path;    // --function: g (perturb, ssd1) or f (certify-petr)
  std::string norming_path;     // --norming: f for perturb, peaking f for ssd1
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::vector<double> eta_grid;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::vector<std::size_t> indices;  // family-trend
  std::string out;                   // empty: stdout
  std::string format = "json";
};

std::vector<std::string> command_names();

/// Executes one command and writes its report to config.out (or `out`).
/// Returns 0 on ok/certified, 2 on precondition failures, 1 on I/O,
/// parse or solver errors; messages go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Applies FREEGEO_TOL (an override of the LP tolerance) when set.
/// Throws Error on a malformed value.
void apply_environment();

}  // namespace freegeo
