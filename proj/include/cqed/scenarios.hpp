#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqed/circuit_model.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/rwa.hpp"
#include "cqed/witnesses.hpp"

namespace cqed {

struct Spdc3Config {
  double g0 = 1.0;  // ignored when a circuit is given
  std::optional<Circuit> circuit;
  int cutoff = 8;
  double gt_max = 0.2;
  std::size_t points = 101;
  KerrMode kerr = KerrMode::drop;
  bool full_hamiltonian = false;
  unsigned families = kFree | kM3 | kN4;
  bool optimize_s = true;
  VlfSearch search;
  StepControl control;
};

struct Spdc22Config {
  double g = 1.0;
  double pump_phase = 1.5707963267948966;
  std::optional<std::array<double, 3>> frequencies;
  std::optional<std::array<double, 2>> pumps;
  int cutoff = 8;
  double gt_max = 0.2;
  std::size_t points = 101;
  bool optimize_s = true;
  VlfSearch search;
  StepControl control;
};

struct HybridConfig {
  double g0 = 1.0;
  std::array<double, 3> lambda{10.0, 10.0, 10.0};
  std::array<double, 3> detuning{0.0, 0.0, 0.0};  // Omega_i - w_i
  int cutoff = 6;
  double gt_max = 0.2;
  std::size_t points = 51;
  MomentOrder order = MomentOrder::normal;
  Aggregate aggregate = Aggregate::max;
  StepControl control;
};

struct DceConfig {
  double omega = 1.0;
  double qubit_omega = 0.6;
  Envelope envelope = Envelope::two_tone(0.008, 1.7, 0.008, 0.3);
  int cutoff = 8;
  double t_max = 660.0;
  std::size_t points = 2001;
  double window = 62.83185307179586;  // averaging window for <a+a>
  StepControl control;
};

struct ScenarioResult {
  std::string name;
  std::vector<double> times;
  std::vector<std::string> columns;
  std::map<std::string, std::vector<double>> series;
  std::vector<QuantumState> states;
  nlohmann::json summary;
  bool converged = true;

  void add(const std::string& column, double value);
  const std::vector<double>& at(const std::string& column) const { return series.at(column); }
};

// Population threshold on the top Fock level above which a run is flagged as not converged.
inline constexpr double kTopLevelThreshold = 1e-6;

ScenarioResult run_3spdc(const Spdc3Config& config);
ScenarioResult run_22spdc(const Spdc22Config& config);
ScenarioResult run_hybrid_swap(const HybridConfig& config);
ScenarioResult run_dce(const DceConfig& config);

// The RWA Hamiltonians used by the scenarios.
std::vector<LadderMonomial> spdc3_terms(double g0);
std::vector<LadderMonomial> spdc22_terms(double g, double phase);
std::vector<LadderMonomial> hybrid_terms(const HybridConfig& config);
HamiltonianSpec dce_hamiltonian(const DceConfig& config);

// Windowed averages of a series sampled on `times`, over consecutive full windows starting at times[0].
std::vector<double> windowed_average(const std::vector<double>& times, const std::vector<double>& values,
                                     double window);

}  // namespace cqed
