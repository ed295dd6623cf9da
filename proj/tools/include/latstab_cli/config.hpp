#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latstab/actions.hpp"

namespace latstab::cli {

enum class OutputFormat { Json, Csv };

// Every field has a default; a config file overrides defaults and explicit
// flags override the file.
struct RunConfig {
  std::string subcommand;
  ModelParams model;
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  int nodes = 0;  // quadrature nodes per axis, 0 = routine default
  std::string output;
  std::optional<OutputFormat> format;  // unset: json, except csv for the limit sweeps

  // subcommand-specific
  std::string theorem = "all";        // verify-bounds: 1, 2, 3, lemma, norms, all
  std::string variant = "all";        // z-bond: z, z1, z_check, all
  std::string action = "wilson";      // cue-gue: wilson, quadratic
  std::string gauge = "random";       // bose-exact: identity, random
  std::string task = "z-bond";        // sweep: z-bond, verify-bounds
  bool gauge_fixed = false;           // wilson-mc
  int n_configs = 100;                // verify-bounds theorem 1
  std::vector<double> beta_grid{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> a_grid{1e-1, 1e-2, 1e-3};
  std::vector<double> g2_grid;
  std::vector<int> L_grid;
  std::vector<int> N_grid;

  OutputFormat effective_format() const;
};

// Flat "key = value" lines, optional [section] headers, '#' or ';' comments.
// Keys are the long flag names without dashes; sections only group them.
// Throws InvalidArgument on unknown keys or malformed lines.
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);
void apply_setting(const std::string& key, const std::string& value, RunConfig& cfg);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace latstab::cli
