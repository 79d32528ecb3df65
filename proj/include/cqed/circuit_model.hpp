#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cqed/ladder.hpp"

namespace cqed {

// Units: hbar = phi0 = 1, energies in rad/s.
struct SquidParams {
  double ej1 = 0.0;
  double ej2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double flux_bias = 0.0;
  double pump_amplitude = 0.0;
  double pump_frequency = 0.0;
};

struct EffectiveJunction {
  double e_bar = 0.0;
  double delta_e = 0.0;
  double delta_alpha = 0.0;
  double c_total = 0.0;
};

struct CavityParams {
  double length = 0.0;
  double cap_per_len = 0.0;
  double ind_per_len = 0.0;
};

struct ModeSpectrum {
  std::vector<double> wavenumbers;
  std::vector<double> mode_caps;
  std::vector<double> mode_inds;
  std::vector<double> frequencies;
  std::vector<double> edge_amplitudes;
  std::vector<double> zero_point;

  std::size_t size() const { return wavenumbers.size(); }
};

// Dense fully-symmetric tensor over n modes.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t n, int rank);

  std::size_t modes() const { return n_; }
  int rank() const { return rank_; }
  double& at(const std::vector<std::size_t>& idx);
  double at(const std::vector<std::size_t>& idx) const;
  template <class... I>
  double operator()(I... i) const { return at({static_cast<std::size_t>(i)...}); }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t offset(const std::vector<std::size_t>& idx) const;
  std::size_t n_ = 0;
  int rank_ = 0;
  std::vector<double> data_;
};

struct CouplingTable {
  std::vector<double> m1;
  Tensor m2, m3, n4, m4;
  std::vector<double> m1_tilde;
  Tensor m2_tilde, m3_tilde, n4_tilde, m4_tilde;
};

double asymmetry(const SquidParams& squid);
void validate(const SquidParams& squid);
void validate(const CavityParams& cavity);

EffectiveJunction effective_junction(const SquidParams& squid);

// sqrt(E1^2 + E2^2 + 2 E1 E2 cos(phase)): the unexpanded two-junction energy.
double exact_two_junction_energy(double ej1, double ej2, double phase);

double wavenumber_rhs(const CavityParams& cavity, double e_bar);
std::vector<double> solve_wavenumbers(const CavityParams& cavity, double e_bar, int n_modes);
ModeSpectrum mode_spectrum(const CavityParams& cavity, double e_bar, int n_modes);
CouplingTable coupling_table(const ModeSpectrum& spectrum, const EffectiveJunction& eff);
double g0_3spdc(const CouplingTable& table, double pump_amplitude);

enum Family : unsigned {
  kFree = 1u << 0,
  kM1 = 1u << 1,
  kM2 = 1u << 2,
  kM3 = 1u << 3,
  kN4 = 1u << 4,
  kM4 = 1u << 5,
  kAllFamilies = 0x3f
};

// Expands the quantized circuit Hamiltonian into ladder monomials on subsystems 0..n-1.
// Driven families are emitted as drive_sign = +1/-1 pairs carrying the full cos(w_d t) coefficient.
std::vector<LadderMonomial> circuit_terms(const ModeSpectrum& spectrum, const CouplingTable& table,
                                          double pump_amplitude, unsigned families = kAllFamilies);

struct Circuit {
  SquidParams squid;
  CavityParams cavity;
  int n_modes = 3;
};

struct CircuitModel {
  EffectiveJunction junction;
  ModeSpectrum spectrum;
  CouplingTable table;
  double g0 = 0.0;
  double pump_frequency = 0.0;
};

// Full derivation chain; pump_frequency == 0 in the input selects w1 + w2 + w3.
CircuitModel derive(const Circuit& circuit);

}  // namespace cqed
