#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riceband/core.hpp"

#include "json.hpp"

namespace riceband::cli {

enum class Command { ExpectedArea, McVerify, CoareaCheck, KacAsymptotic, FavardMeasure, Identities };

enum class OutputFormat { Csv, Json };

// Schema violation; carries the offending field path in what().
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Command command = Command::ExpectedArea;
  nlohmann::json ensemble;              // descriptor, empty when not needed
  std::optional<DomainBox> domain;      // empty = whole line (d = 1 only)
  double truncation = 50.0;             // R for the oscillatory formula
  std::vector<int> grid;                // MC sampling grid, per axis
  int replicates = 500;
  int sphere_resolution = 360;
  int lines_per_direction = 96;
  int samples_per_line = 512;
  int quad_nodes = 64;                  // spatial quadrature nodes per axis
  std::uint64_t seed = 0;
  std::string shape;                    // favard-measure / coarea-check
  std::vector<int> n_values;            // kac-asymptotic sweep
  int dim = 2;                          // identities suite
  int n_measures = 20;                  // identities suite
};

Command command_from_name(const std::string& name);
std::string command_name(Command c);

// Validated config from JSON text; unknown keys rejected, errors name the field.
ExperimentConfig parse_config(const std::string& json_text);

struct RunResult {
  int exit_code = 0;     // 0 all rows pass, 1 numeric failure, 2 invalid config
  std::string output;    // rendered table
};

RunResult run(const ExperimentConfig& config, OutputFormat format);

}  // namespace riceband::cli
