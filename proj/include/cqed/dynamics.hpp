#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

struct Envelope {
  enum class Type { constant, cosine, two_tone, motional, phasor };
  Type type = Type::constant;
  double amplitude = 1.0;
  double frequency = 0.0;
  double phase = 0.0;
  // two_tone second component
  double amplitude2 = 0.0;
  double frequency2 = 0.0;
  double phase2 = 0.0;
  // motional: amplitude * cos(k (x0 + v t))
  double velocity = 0.0;
  double wavenumber = 0.0;
  double x0 = 0.0;
  // phasor: exp(i sign frequency t) / 2
  int sign = 0;

  static Envelope constant(double a);
  static Envelope cosine(double a, double w, double phase = 0.0);
  static Envelope two_tone(double a1, double w1, double a2, double w2, double phase1 = 0.0, double phase2 = 0.0);
  static Envelope motional(double a, double v, double k, double x0);
  static Envelope phasor(int sign, double w);

  cplx operator()(double t) const;
  bool operator==(const Envelope&) const = default;
};

struct DrivenTerm {
  LadderMonomial term;
  Envelope envelope;
};

struct HamiltonianSpec {
  std::vector<LadderMonomial> static_terms;
  std::vector<DrivenTerm> driven_terms;

  // drive_sign != 0 monomials become phasor-driven terms at the given drive frequency.
  static HamiltonianSpec from_terms(const std::vector<LadderMonomial>& terms, double drive);
};

struct StepControl {
  double atol = 1e-10;
  double rtol = 1e-9;
  double initial_step = 0.0;  // 0 picks from the Hamiltonian scale
  double min_step = 1e-14;    // relative to max(1, |t|)
  long max_steps = 50'000'000;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::map<std::string, std::vector<cplx>> observables;
  long steps = 0;
  long rejected = 0;
};

using NamedOperator = std::pair<std::string, OperatorMatrix>;

// Assembled sparse form of a HamiltonianSpec on a layout.
class CompiledHamiltonian {
 public:
  CompiledHamiltonian(const HamiltonianSpec& h, const RegisterLayout& layout);

  const RegisterLayout& layout() const { return layout_; }
  bool is_static() const { return driven_.empty(); }
  const SpMat& static_part() const { return static_; }
  SpMat at(double t) const;
  void apply(double t, const Vec& psi, Vec& out) const;
  double scale() const;

 private:
  RegisterLayout layout_;
  SpMat static_;
  std::vector<std::pair<Envelope, SpMat>> driven_;
};

Trajectory evolve(const HamiltonianSpec& h, const QuantumState& psi0, const std::vector<double>& t_grid,
                  const StepControl& control = {}, const std::vector<NamedOperator>& observables = {});
Trajectory evolve(const CompiledHamiltonian& h, const QuantumState& psi0, const std::vector<double>& t_grid,
                  const StepControl& control = {}, const std::vector<NamedOperator>& observables = {});

// Dense eigendecomposition propagator for static Hamiltonians (oracle path).
class StaticPropagator {
 public:
  static constexpr std::size_t kMaxDim = 4096;
  StaticPropagator(const std::vector<LadderMonomial>& static_terms, const RegisterLayout& layout);
  QuantumState operator()(const QuantumState& psi0, double t) const;

 private:
  RegisterLayout layout_;
  Eigen::VectorXd energies_;
  Mat vectors_;
};

QuantumState evolve_static_expm(const std::vector<LadderMonomial>& h_static, const QuantumState& psi0, double t);

struct ConvergenceReport {
  std::vector<int> cutoffs;
  // observable -> max |change| between successive cutoffs (size cutoffs - 1)
  std::map<std::string, std::vector<double>> changes;
  double tolerance = 1e-6;
  bool monotone = true;
  bool converged = true;
  double max_final_change = 0.0;
};

using CutoffRun = std::function<std::map<std::string, std::vector<double>>(int cutoff)>;

ConvergenceReport cutoff_sweep(const CutoffRun& run, const std::vector<int>& cutoffs, double tolerance = 1e-6);

std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace cqed
