#include "cqed/circuit_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr double kPi = std::numbers::pi;

// Every index tuple of the given rank over n modes, first index slowest.
std::vector<std::vector<std::size_t>> index_tuples(std::size_t n, int rank) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(rank, 0);
  while (true) {
    out.push_back(idx);
    int p = rank - 1;
    while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
    if (p < 0) break;
  }
  return out;
}

Tensor product_tensor(const std::vector<double>& v, int rank, double scale) {
  Tensor t(v.size(), rank);
  for (const auto& idx : index_tuples(v.size(), rank)) {
    double p = scale;
    for (auto i : idx) p *= v[i];
    t.at(idx) = p;
  }
  return t;
}

}  // namespace

Tensor::Tensor(std::size_t n, int rank) : n_(n), rank_(rank) {
  std::size_t size = 1;
  for (int r = 0; r < rank; ++r) size *= n;
  data_.assign(size, 0.0);
}

std::size_t Tensor::offset(const std::vector<std::size_t>& idx) const {
  if (static_cast<int>(idx.size()) != rank_) throw std::invalid_argument("tensor rank mismatch");
  std::size_t off = 0;
  for (auto i : idx) {
    if (i >= n_) throw std::out_of_range("tensor index out of range");
    off = off * n_ + i;
  }
  return off;
}

double& Tensor::at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
double Tensor::at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

double asymmetry(const SquidParams& s) { return (s.ej2 - s.ej1) / (s.ej1 + s.ej2); }

void validate(const SquidParams& s) {
  if (!(s.ej1 > 0.0) || !(s.ej2 > 0.0)) throw std::invalid_argument("Josephson energies must be positive");
  if (!(std::abs(asymmetry(s)) < 0.2))
    throw std::invalid_argument("SQUID asymmetry |ej2-ej1|/(ej1+ej2) must be below 0.2");
  if (!(s.c1 >= 0.0) || !(s.c2 >= 0.0)) throw std::invalid_argument("junction capacitances must be non-negative");
  if (!(std::abs(s.pump_amplitude) < 0.1)) throw std::invalid_argument("pump amplitude must be below 0.1 flux quanta");
  if (!std::isfinite(s.flux_bias) || !(s.pump_frequency >= 0.0))
    throw std::invalid_argument("flux bias must be finite and pump frequency non-negative");
}

void validate(const CavityParams& c) {
  if (!(c.length > 0.0) || !(c.cap_per_len > 0.0) || !(c.ind_per_len > 0.0))
    throw std::invalid_argument("cavity length, capacitance and inductance per length must be positive");
}

EffectiveJunction effective_junction(const SquidParams& squid) {
  validate(squid);
  const double phi = squid.flux_bias;
  const double d = asymmetry(squid);
  if (std::abs(std::cos(phi)) < 1e-12 || std::abs(std::cos(phi / 2)) < 1e-12)
    throw SingularBiasError("flux bias " + std::to_string(phi) + " sits on a singularity of dE or dalpha");
  EffectiveJunction eff;
  eff.e_bar = 2.0 * squid.ej1 * std::sqrt(1.0 + 2.0 * d) * std::abs(std::cos(phi));
  eff.delta_e = eff.e_bar * std::tan(phi);
  const double half_tan = std::tan(phi / 2);
  const double sec2 = 1.0 / (std::cos(phi / 2) * std::cos(phi / 2));
  eff.delta_alpha = sec2 * d / (1.0 + half_tan * half_tan * d * d);
  eff.c_total = squid.c1 + squid.c2;
  return eff;
}

double exact_two_junction_energy(double ej1, double ej2, double phase) {
  return std::sqrt(std::max(0.0, ej1 * ej1 + ej2 * ej2 + 2.0 * ej1 * ej2 * std::cos(phase)));
}

double wavenumber_rhs(const CavityParams& cavity, double e_bar) {
  return cavity.ind_per_len * cavity.length * e_bar / 2.0;
}

std::vector<double> solve_wavenumbers(const CavityParams& cavity, double e_bar, int n_modes) {
  validate(cavity);
  if (n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
  if (!(e_bar >= 0.0)) throw std::invalid_argument("effective Josephson energy must be non-negative");
  const double r = wavenumber_rhs(cavity, e_bar);
  const double d = cavity.length;
  std::vector<double> k;
  k.reserve(n_modes);
  if (r == 0.0) {
    for (int n = 1; n <= n_modes; ++n) k.push_back(n * kPi / d);
    return k;
  }
  // x tan x = R rewritten without the pole.
  auto g = [r](double x) { return x * std::sin(x) - r * std::cos(x); };
  auto dg = [r](double x) { return (1.0 + r) * std::sin(x) + x * std::cos(x); };
  const double eps = 1e-9 * kPi;
  for (int n = 0; n < n_modes; ++n) {
    double lo = n * kPi;
    double hi = n * kPi + kPi / 2 - eps;
    double glo = g(lo);
    if (glo * g(hi) > 0.0) {
      k.push_back(hi / d);
      continue;
    }
    while (hi - lo > 1e-13 * hi) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if ((gm < 0.0) == (glo < 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    double x = 0.5 * (lo + hi);
    const double step = g(x) / dg(x);
    if (std::isfinite(step) && std::abs(step) < hi - lo + 1e-15 * x) x -= step;
    k.push_back(x / d);
  }
  return k;
}

ModeSpectrum mode_spectrum(const CavityParams& cavity, double e_bar, int n_modes) {
  ModeSpectrum s;
  s.wavenumbers = solve_wavenumbers(cavity, e_bar, n_modes);
  const double d = cavity.length, c = cavity.cap_per_len, l = cavity.ind_per_len;
  for (double k : s.wavenumbers) {
    const double x = k * d;
    const double sinc = std::sin(2 * x) / (2 * x);
    const double cn = c * d / 2 * (1 + sinc);
    const double ln = 1.0 / (x * x / (2 * l * d) * (1 - sinc));
    s.mode_caps.push_back(cn);
    s.mode_inds.push_back(ln);
    s.frequencies.push_back(1.0 / std::sqrt(ln * cn));
    s.edge_amplitudes.push_back(std::cos(x));
    s.zero_point.push_back(std::sqrt(0.5 * std::sqrt(ln / cn)));
  }
  return s;
}

CouplingTable coupling_table(const ModeSpectrum& s, const EffectiveJunction& eff) {
  const double e = eff.e_bar, da = eff.delta_alpha, de = eff.delta_e;
  std::vector<double> tilde_edge(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) tilde_edge[i] = s.edge_amplitudes[i] * s.zero_point[i];
  CouplingTable t;
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.m1.push_back(e * da * s.edge_amplitudes[i]);
    t.m1_tilde.push_back(e * da * tilde_edge[i]);
  }
  t.m2 = product_tensor(s.edge_amplitudes, 2, e / 2);
  t.m3 = product_tensor(s.edge_amplitudes, 3, e * da / 6);
  t.n4 = product_tensor(s.edge_amplitudes, 4, e / 24);
  t.m4 = product_tensor(s.edge_amplitudes, 4, de / 24);
  t.m2_tilde = product_tensor(tilde_edge, 2, e / 2);
  t.m3_tilde = product_tensor(tilde_edge, 3, e * da / 6);
  t.n4_tilde = product_tensor(tilde_edge, 4, e / 24);
  t.m4_tilde = product_tensor(tilde_edge, 4, de / 24);
  return t;
}

double g0_3spdc(const CouplingTable& table, double pump_amplitude) {
  if (table.m3_tilde.modes() < 3) throw std::invalid_argument("3SPDC needs at least three modes");
  return std::abs(3.0 * pump_amplitude * table.m3_tilde(0, 1, 2));
}

std::vector<LadderMonomial> circuit_terms(const ModeSpectrum& spectrum, const CouplingTable& table,
                                          double lambda, unsigned families) {
  std::vector<LadderMonomial> out;
  const std::size_t n = spectrum.size();
  if (families & kFree)
    for (std::size_t i = 0; i < n; ++i) out.push_back({{{i, Kind::number}}, spectrum.frequencies[i], 0});

  auto expand = [&](int rank, auto coeff_of, double prefactor, bool driven) {
    for (const auto& idx : index_tuples(n, rank)) {
      const double c = prefactor * coeff_of(idx);
      if (c == 0.0) continue;
      for (unsigned mask = 0; mask < (1u << rank); ++mask) {
        LadderMonomial m;
        for (int r = 0; r < rank; ++r)
          m.factors.push_back({idx[r], (mask >> (rank - 1 - r)) & 1u ? Kind::create : Kind::annihilate});
        m.coeff = c;
        if (driven) {
          m.drive_sign = 1;
          out.push_back(m);
          m.drive_sign = -1;
        }
        out.push_back(std::move(m));
      }
    }
  };
  if (families & kM1)
    expand(1, [&](const auto& i) { return table.m1_tilde[i[0]]; }, lambda, true);
  if (families & kM2)
    expand(2, [&](const auto& i) { return table.m2_tilde.at(i); }, lambda, true);
  if (families & kM3)
    expand(3, [&](const auto& i) { return table.m3_tilde.at(i); }, -lambda, true);
  if (families & kN4)
    expand(4, [&](const auto& i) { return table.n4_tilde.at(i); }, -1.0, false);
  if (families & kM4)
    expand(4, [&](const auto& i) { return table.m4_tilde.at(i); }, lambda, true);
  return out;
}

CircuitModel derive(const Circuit& circuit) {
  CircuitModel m;
  m.junction = effective_junction(circuit.squid);
  m.spectrum = mode_spectrum(circuit.cavity, m.junction.e_bar, circuit.n_modes);
  m.table = coupling_table(m.spectrum, m.junction);
  m.g0 = circuit.n_modes >= 3 ? g0_3spdc(m.table, circuit.squid.pump_amplitude) : 0.0;
  m.pump_frequency = circuit.squid.pump_frequency;
  if (m.pump_frequency == 0.0)
    for (std::size_t i = 0; i < std::min<std::size_t>(3, m.spectrum.size()); ++i)
      m.pump_frequency += m.spectrum.frequencies[i];
  return m;
}

}  // namespace cqed
