#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

struct VlfParams {
  std::array<double, 3> g{};
  std::array<double, 3> h{};
};

struct WitnessReport {
  std::string name;
  double value = 0.0;
  bool detects = false;
  std::map<std::string, double> components;
  std::optional<VlfParams> params;
  std::string argmax;
};

using ModeTriple = std::array<std::size_t, 3>;
inline constexpr ModeTriple kFirstThree{0, 1, 2};

// S from an (x_1..x_3, p_1..p_3) covariance matrix.
double vlf_value(const Eigen::MatrixXd& cov, const VlfParams& params);
WitnessReport vlf_S(const QuantumState& state, const VlfParams& params, ModeTriple modes = kFirstThree);

struct VlfSearch {
  int restarts = 100;
  std::uint64_t seed = 1;
  int iterations = 300;
  double tolerance = 1e-10;
  double box = 2.0;
};

WitnessReport optimize_vlf(const Eigen::MatrixXd& cov, const VlfSearch& search = {});
WitnessReport optimize_vlf(const QuantumState& state, const VlfSearch& search = {}, ModeTriple modes = kFirstThree);

WitnessReport hz_inseparability(const QuantumState& state, std::size_t alpha, ModeTriple modes = kFirstThree);
WitnessReport genuine_g1(const QuantumState& state, ModeTriple modes = kFirstThree);
WitnessReport genuine_g2(const QuantumState& state, ModeTriple modes = kFirstThree);

enum class MomentOrder { normal, antinormal };
enum class Aggregate { sum, max };

WitnessReport dv_genuine(const QuantumState& state, MomentOrder order = MomentOrder::normal,
                         Aggregate aggregate = Aggregate::max, ModeTriple qubits = kFirstThree);

// (||rho^{T_A}||_1 - 1) / 2 with A the listed subsystems.
double ppt_negativity(const QuantumState& state, const std::vector<std::size_t>& part_a);
// Same quantity for a pure state from its Schmidt coefficients.
double pure_state_negativity(const QuantumState& state, const std::vector<std::size_t>& part_a);

nlohmann::json report_to_json(const WitnessReport& r);

}  // namespace cqed
