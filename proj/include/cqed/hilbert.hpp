#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "cqed/ladder.hpp"

namespace cqed {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class SubsystemKind { boson, qubit };

struct Subsystem {
  SubsystemKind kind = SubsystemKind::boson;
  std::size_t dim = 2;

  bool operator==(const Subsystem&) const = default;
};

// Subsystem 0 is the slowest-varying index of the basis (big-endian Kronecker order).
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Subsystem> subsystems);

  static RegisterLayout bosons(std::size_t count, std::size_t cutoff);
  static RegisterLayout qubits(std::size_t count);

  RegisterLayout& add_boson(std::size_t cutoff);
  RegisterLayout& add_qubit();

  std::size_t size() const { return subsystems_.size(); }
  const Subsystem& operator[](std::size_t i) const { return subsystems_.at(i); }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t dim(std::size_t i) const { return subsystems_.at(i).dim; }
  std::size_t total_dim() const;
  std::size_t stride(std::size_t i) const;
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index(const std::vector<std::size_t>& digits) const;
  RegisterLayout select(const std::vector<std::size_t>& keep) const;

  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Subsystem> subsystems_;
};

struct OperatorMatrix {
  RegisterLayout layout;
  SpMat matrix;
};

class QuantumState {
 public:
  static QuantumState pure(RegisterLayout layout, Vec amplitudes);
  // Skips the normalization check; for perturbative constructions such as |000> + eps|111>.
  static QuantumState unnormalized(RegisterLayout layout, Vec amplitudes);
  // validate = false skips the trace/positivity checks (used for reductions of drifting trajectories).
  static QuantumState density(RegisterLayout layout, Mat rho, bool validate = true);

  const RegisterLayout& layout() const { return layout_; }
  bool is_pure() const { return pure_; }
  const Vec& vector() const;
  const Mat& matrix() const;
  Mat density_matrix() const;
  double norm() const;

 private:
  QuantumState() = default;
  RegisterLayout layout_;
  bool pure_ = true;
  Vec psi_;
  Mat rho_;
};

Eigen::SparseMatrix<cplx> local_matrix(Kind kind, std::size_t dim);

OperatorMatrix build_operator(const LadderMonomial& term, const RegisterLayout& layout);
OperatorMatrix build_sum(const std::vector<LadderMonomial>& terms, const RegisterLayout& layout);
OperatorMatrix identity_operator(const RegisterLayout& layout);

cplx expectation(const QuantumState& state, const OperatorMatrix& op);
cplx expectation(const QuantumState& state, const LadderMonomial& term);

QuantumState partial_trace(const QuantumState& state, const std::vector<std::size_t>& keep);

// Ordered (x_1..x_m, p_1..p_m) with x = (a + a+)/sqrt2, p = i(a+ - a)/sqrt2.
Eigen::MatrixXd covariance_matrix(const QuantumState& state, const std::vector<std::size_t>& modes);
Eigen::MatrixXd symplectic_form(std::size_t m);

QuantumState fock_state(const RegisterLayout& layout, const std::vector<std::size_t>& occupations);
QuantumState ghz(const RegisterLayout& layout);
QuantumState w_state(const RegisterLayout& layout);

// Probability of the top Fock level of boson subsystem i.
double top_level_population(const QuantumState& state, std::size_t i, std::size_t levels = 1);

// Applies exp(i theta_k N_k) on each listed boson.
QuantumState apply_local_phases(const QuantumState& state, const std::vector<std::pair<std::size_t, double>>& phases);

double von_neumann_entropy(const QuantumState& state);

nlohmann::json state_to_json(const QuantumState& state);
QuantumState state_from_json(const nlohmann::json& j);

}  // namespace cqed
