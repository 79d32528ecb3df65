#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqed/circuit_model.hpp"
#include "cqed/scenarios.hpp"

namespace cqed {

// INI document with sections [circuit], [scenario], [output]; see docs in README.
struct CliConfig {
  std::optional<SquidParams> squid;
  std::optional<CavityParams> cavity;
  int n_modes = 3;
  std::optional<double> e_bar;  // bypasses the SQUID for mode solving
  std::string scenario;
  std::map<std::string, std::string> scenario_keys;
  std::filesystem::path output_dir;
  std::vector<double> snapshot_times;
  std::filesystem::path base_dir;

  std::optional<Circuit> circuit() const;
};

CliConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
CliConfig load_config(const std::filesystem::path& path);

// Overrides one [scenario] key (used by sweeps); validates the key name.
void set_scenario_key(CliConfig& config, const std::string& key, const std::string& value);

Spdc3Config spdc3_config(const CliConfig& config);
Spdc22Config spdc22_config(const CliConfig& config);
HybridConfig hybrid_config(const CliConfig& config);
DceConfig dce_config(const CliConfig& config);

ScenarioResult run_scenario(const std::string& name, const CliConfig& config, std::optional<std::uint64_t> seed);

const std::vector<std::string>& scenario_names();

}  // namespace cqed
