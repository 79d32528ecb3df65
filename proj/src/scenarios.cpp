#include "cqed/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cqed/errors.hpp"

namespace cqed {

void ScenarioResult::add(const std::string& column, double value) {
  auto [it, fresh] = series.try_emplace(column);
  if (fresh) columns.push_back(column);
  it->second.push_back(value);
}

namespace {

LadderMonomial mono(std::vector<Factor> f, cplx c) { return {std::move(f), c, 0}; }

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double max_top_population(const QuantumState& s) {
  double p = 0.0;
  for (std::size_t i = 0; i < s.layout().size(); ++i)
    if (s.layout()[i].kind == SubsystemKind::boson) p = std::max(p, top_level_population(s, i));
  return p;
}

// Window [first, last] of grid times where the series is positive.
nlohmann::json detection_window(const std::vector<double>& t, const std::vector<double>& v) {
  std::optional<double> first, last;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0.0) {
      if (!first) first = t[i];
      last = t[i];
    }
  if (!first) return nullptr;
  return {*first, *last};
}

struct EnergyTracker {
  SpMat h;
  double e0 = 0.0, scale = 1.0;
  bool active = false;

  void start(const SpMat& ham, const Vec& psi0) {
    h = ham;
    active = true;
    const Vec hp = h * psi0;
    e0 = psi0.dot(hp).real();
    scale = std::max({std::abs(e0), hp.norm(), 1e-300});
  }
  double drift(const Vec& psi) const {
    return active ? std::abs(psi.dot(h * psi).real() - e0) / scale : 0.0;
  }
};

void record_hygiene(ScenarioResult& r, const QuantumState& s, const EnergyTracker& energy) {
  r.add("norm_drift", std::abs(s.vector().norm() - 1.0));
  if (energy.active) r.add("energy_drift", energy.drift(s.vector()));
  const double top = max_top_population(s);
  r.add("top_population", top);
  if (top > kTopLevelThreshold) r.converged = false;
}

void record_three_mode(ScenarioResult& r, const QuantumState& s, bool optimize, const VlfSearch& search) {
  const auto g1 = genuine_g1(s), g2 = genuine_g2(s);
  for (int i = 0; i < 3; ++i) r.add("N" + std::to_string(i + 1), g2.components.at("<N" + std::to_string(i + 1) + ">"));
  r.add("a123_abs", g2.components.at("|<a1a2a3>|"));
  for (std::size_t a = 0; a < 3; ++a) r.add("I" + std::to_string(a + 1), hz_inseparability(s, a).value);
  r.add("G1", g1.value);
  r.add("G2", g2.value);
  const auto cov = covariance_matrix(s, {0, 1, 2});
  double xx = 0.0, pp = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        xx = std::max(xx, std::abs(cov(i, j)));
        pp = std::max(pp, std::abs(cov(3 + i, 3 + j)));
      }
  r.add("cov_xx_offdiag", xx);
  r.add("cov_pp_offdiag", pp);
  r.add("S_opt", optimize ? optimize_vlf(cov, search).value : std::nan(""));
  double neg = 0.0;
  for (std::size_t a = 0; a < 3; ++a) neg = std::max(neg, pure_state_negativity(s, {a}));
  r.add("negativity_max", neg);
}

void summarize_three_mode(ScenarioResult& r) {
  const auto& t = r.times;
  r.summary["g1_peak"] = max_of(r.at("G1"));
  r.summary["g2_peak"] = max_of(r.at("G2"));
  r.summary["i1_peak"] = max_of(r.at("I1"));
  r.summary["s_peak"] = max_of(r.at("S_opt"));
  r.summary["g2_window"] = detection_window(t, r.at("G2"));
  r.summary["s_window"] = detection_window(t, r.at("S_opt"));
  r.summary["max_cov_offdiag"] = std::max(max_of(r.at("cov_xx_offdiag")), max_of(r.at("cov_pp_offdiag")));
}

void summarize_hygiene(ScenarioResult& r) {
  r.summary["max_norm_drift"] = max_of(r.at("norm_drift"));
  r.summary["max_energy_drift"] = r.series.count("energy_drift") ? nlohmann::json(max_of(r.at("energy_drift"))) : nlohmann::json(nullptr);
  r.summary["max_top_population"] = max_of(r.at("top_population"));
  r.summary["converged"] = r.converged;
  r.summary["points"] = r.times.size();
}

QuantumState vacuum(const RegisterLayout& layout) {
  return fock_state(layout, std::vector<std::size_t>(layout.size(), 0));
}

}  // namespace

std::vector<LadderMonomial> spdc3_terms(double g0) {
  return {mono({{0, Kind::create}, {1, Kind::create}, {2, Kind::create}}, -g0),
          mono({{0, Kind::annihilate}, {1, Kind::annihilate}, {2, Kind::annihilate}}, -g0)};
}

std::vector<LadderMonomial> spdc22_terms(double g, double phase) {
  const cplx c = std::polar(g, phase);
  return {mono({{0, Kind::create}, {1, Kind::create}}, c), mono({{0, Kind::annihilate}, {1, Kind::annihilate}}, std::conj(c)),
          mono({{1, Kind::create}, {2, Kind::create}}, c), mono({{1, Kind::annihilate}, {2, Kind::annihilate}}, std::conj(c))};
}

std::vector<LadderMonomial> hybrid_terms(const HybridConfig& c) {
  std::vector<LadderMonomial> t = {
      mono({{0, Kind::create}, {1, Kind::create}, {2, Kind::create}}, c.g0),
      mono({{0, Kind::annihilate}, {1, Kind::annihilate}, {2, Kind::annihilate}}, c.g0)};
  for (std::size_t i = 0; i < 3; ++i) {
    if (c.lambda[i] != 0.0) {
      t.push_back(mono({{3 + i, Kind::sigma_plus}, {i, Kind::annihilate}}, c.lambda[i]));
      t.push_back(mono({{3 + i, Kind::sigma_minus}, {i, Kind::create}}, c.lambda[i]));
    }
    if (c.detuning[i] != 0.0) t.push_back(mono({{3 + i, Kind::sigma_plus}, {3 + i, Kind::sigma_minus}}, c.detuning[i]));
  }
  return t;
}

HamiltonianSpec dce_hamiltonian(const DceConfig& c) {
  HamiltonianSpec h;
  h.static_terms = {mono({{0, Kind::number}}, c.omega), mono({{1, Kind::sigma_z}}, 0.5 * c.qubit_omega)};
  for (Kind q : {Kind::sigma_plus, Kind::sigma_minus})
    for (Kind b : {Kind::create, Kind::annihilate}) h.driven_terms.push_back({mono({{1, q}, {0, b}}, 1.0), c.envelope});
  return h;
}

ScenarioResult run_3spdc(const Spdc3Config& c) {
  if (c.cutoff < 1 || c.points < 2 || !(c.gt_max > 0.0)) throw std::invalid_argument("invalid 3spdc grid or cutoff");
  ScenarioResult r;
  r.name = "3spdc";
  const auto layout = RegisterLayout::bosons(3, static_cast<std::size_t>(c.cutoff));
  HamiltonianSpec spec;
  double g0 = c.g0;
  if (c.circuit) {
    if (c.circuit->n_modes != 3) throw std::invalid_argument("3spdc scenario uses exactly three cavity modes");
    const auto model = derive(*c.circuit);
    const auto& w = model.spectrum.frequencies;
    check_nondegenerate(w);
    const double tol = default_tolerance(w);
    const double sum = w[0] + w[1] + w[2];
    if (std::abs(model.pump_frequency - sum) > tol)
      throw PumpMismatchError("pump frequency " + std::to_string(model.pump_frequency) +
                              " does not match w1 + w2 + w3 = " + std::to_string(sum));
    g0 = model.g0;
    const double lambda = c.circuit->squid.pump_amplitude;
    if (c.full_hamiltonian) {
      spec = HamiltonianSpec::from_terms(circuit_terms(model.spectrum, model.table, lambda, c.families), sum);
    } else {
      const auto all = circuit_terms(model.spectrum, model.table, lambda, kAllFamilies & ~kFree);
      spec.static_terms = rwa_reduce(all, w, sum, tol, c.kerr);
    }
    r.summary["frequencies"] = w;
    r.summary["pump_frequency"] = sum;
    r.summary["kerr"] = kerr_mode_name(c.kerr);
    r.summary["hamiltonian"] = c.full_hamiltonian ? "full" : "rwa";
  } else {
    spec.static_terms = spdc3_terms(g0);
    r.summary["hamiltonian"] = "rwa";
  }
  r.summary["g0"] = g0;
  const double time_unit = g0 != 0.0 ? 1.0 / std::abs(g0) : 1.0;
  r.times = linspace(0.0, c.gt_max, c.points);
  std::vector<double> t(r.times.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = r.times[i] * time_unit;

  const CompiledHamiltonian h(spec, layout);
  const auto psi0 = vacuum(layout);
  EnergyTracker energy;
  if (h.is_static()) energy.start(h.static_part(), psi0.vector());
  auto traj = evolve(h, psi0, t, c.control);
  for (const auto& s : traj.states) {
    record_three_mode(r, s, c.optimize_s, c.search);
    record_hygiene(r, s, energy);
  }
  r.states = std::move(traj.states);
  summarize_three_mode(r);
  summarize_hygiene(r);
  return r;
}

ScenarioResult run_22spdc(const Spdc22Config& c) {
  if (c.cutoff < 1 || c.points < 2 || !(c.gt_max > 0.0)) throw std::invalid_argument("invalid 22spdc grid or cutoff");
  if (c.frequencies && c.pumps) {
    const auto& w = *c.frequencies;
    const double tol = default_tolerance(w);
    if (std::abs((*c.pumps)[0] - w[0] - w[1]) > tol || std::abs((*c.pumps)[1] - w[1] - w[2]) > tol)
      throw PumpMismatchError("2-2SPDC pumps must match w1 + w2 and w2 + w3");
  } else if (c.pumps && !c.frequencies) {
    throw std::invalid_argument("pump tones given without mode frequencies");
  }
  ScenarioResult r;
  r.name = "22spdc";
  const auto layout = RegisterLayout::bosons(3, static_cast<std::size_t>(c.cutoff));
  HamiltonianSpec spec;
  spec.static_terms = spdc22_terms(c.g, c.pump_phase);
  const double time_unit = c.g != 0.0 ? 1.0 / std::abs(c.g) : 1.0;
  r.times = linspace(0.0, c.gt_max, c.points);
  std::vector<double> t(r.times.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = r.times[i] * time_unit;
  const CompiledHamiltonian h(spec, layout);
  const auto psi0 = vacuum(layout);
  EnergyTracker energy;
  energy.start(h.static_part(), psi0.vector());
  auto traj = evolve(h, psi0, t, c.control);
  for (const auto& s : traj.states) {
    record_three_mode(r, s, c.optimize_s, c.search);
    record_hygiene(r, s, energy);
  }
  r.states = std::move(traj.states);
  r.summary["g"] = c.g;
  r.summary["pump_phase"] = c.pump_phase;
  summarize_three_mode(r);
  summarize_hygiene(r);
  return r;
}

ScenarioResult run_hybrid_swap(const HybridConfig& c) {
  if (c.cutoff < 1 || c.points < 2 || !(c.gt_max > 0.0)) throw std::invalid_argument("invalid hybrid grid or cutoff");
  for (double l : c.lambda)
    if (!(l >= 0.0)) throw std::invalid_argument("Jaynes-Cummings couplings must be non-negative");
  ScenarioResult r;
  r.name = "hybrid-swap";
  RegisterLayout layout = RegisterLayout::bosons(3, static_cast<std::size_t>(c.cutoff));
  for (int i = 0; i < 3; ++i) layout.add_qubit();
  HamiltonianSpec spec;
  spec.static_terms = hybrid_terms(c);
  const double time_unit = c.g0 != 0.0 ? 1.0 / std::abs(c.g0) : 1.0;
  r.times = linspace(0.0, c.gt_max, c.points);
  std::vector<double> t(r.times.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = r.times[i] * time_unit;
  const CompiledHamiltonian h(spec, layout);
  const auto psi0 = vacuum(layout);
  EnergyTracker energy;
  energy.start(h.static_part(), psi0.vector());
  auto traj = evolve(h, psi0, t, c.control);
  for (const auto& s : traj.states) {
    const auto q = partial_trace(s, {3, 4, 5});
    const auto dv = dv_genuine(q, c.order, c.aggregate);
    r.add("dv", dv.value);
    r.add("dv_numerator", dv.components.at("|<s-s-s->|"));
    r.add("dv_sum", dv_genuine(q, c.order, Aggregate::sum).value);
    for (std::size_t k = 0; k < 3; ++k) r.add("neg_q" + std::to_string(k + 1), ppt_negativity(q, {k}));
    for (std::size_t k = 0; k < 3; ++k)
      r.add("pe_q" + std::to_string(k + 1), expectation(q, LadderMonomial{{{k, Kind::sigma_plus}, {k, Kind::sigma_minus}}, 1.0, 0}).real());
    const Mat& rho = q.matrix();
    Eigen::Matrix2cd block;
    block << rho(0, 0), rho(0, 7), rho(7, 0), rho(7, 7);
    r.add("swap_fidelity", Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(block, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
    r.add("G2_field", genuine_g2(s).value);
    record_hygiene(r, s, energy);
  }
  r.states = std::move(traj.states);
  std::size_t joint = 0;
  std::optional<double> first;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const bool all_neg = r.at("neg_q1")[i] > 0.0 && r.at("neg_q2")[i] > 0.0 && r.at("neg_q3")[i] > 0.0;
    if (r.at("dv")[i] > 0.0 && all_neg) {
      ++joint;
      if (!first) first = r.times[i];
    }
  }
  r.summary["dv_peak"] = max_of(r.at("dv"));
  r.summary["dv_window"] = detection_window(r.times, r.at("dv"));
  r.summary["points_dv_and_all_negativities"] = joint;
  r.summary["first_joint_detection"] = first ? nlohmann::json(*first) : nlohmann::json(nullptr);
  r.summary["swap_fidelity_peak"] = max_of(r.at("swap_fidelity"));
  r.summary["g2_field_peak"] = max_of(r.at("G2_field"));
  summarize_hygiene(r);
  return r;
}

std::vector<double> windowed_average(const std::vector<double>& times, const std::vector<double>& values,
                                     double window) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
  std::vector<double> out;
  if (times.empty()) return out;
  const double t0 = times.front();
  const auto full = static_cast<std::size_t>(std::floor((times.back() - t0) / window + 1e-12));
  std::vector<double> sum(full, 0.0);
  std::vector<std::size_t> count(full, 0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto k = static_cast<std::size_t>(std::floor((times[i] - t0) / window));
    if (k < full) {
      sum[k] += values[i];
      ++count[k];
    }
  }
  for (std::size_t k = 0; k < full; ++k)
    if (count[k] > 0) out.push_back(sum[k] / static_cast<double>(count[k]));
  return out;
}

ScenarioResult run_dce(const DceConfig& c) {
  if (c.cutoff < 1 || c.points < 2 || !(c.t_max > 0.0)) throw std::invalid_argument("invalid dce grid or cutoff");
  const auto& e = c.envelope;
  if (e.type == Envelope::Type::phasor) throw std::invalid_argument("dce envelope must be constant, cosine, two-tone or motional");
  if (!std::isfinite(e.amplitude) || !std::isfinite(e.frequency) || !std::isfinite(e.amplitude2) ||
      !std::isfinite(e.frequency2) || !std::isfinite(e.velocity) || !std::isfinite(e.wavenumber))
    throw std::invalid_argument("dce envelope parameters must be finite");
  ScenarioResult r;
  r.name = "dce-rabi";
  RegisterLayout layout;
  layout.add_boson(static_cast<std::size_t>(c.cutoff)).add_qubit();
  const CompiledHamiltonian h(dce_hamiltonian(c), layout);
  const auto psi0 = vacuum(layout);
  r.times = linspace(0.0, c.t_max, c.points);
  auto traj = evolve(h, psi0, r.times, c.control);
  EnergyTracker none;
  const LadderMonomial pair{{{0, Kind::annihilate}, {0, Kind::annihilate}}, 1.0, 0};
  for (const auto& s : traj.states) {
    r.add("N", expectation(s, LadderMonomial{{{0, Kind::number}}, 1.0, 0}).real());
    r.add("pair_abs", std::abs(expectation(s, pair)));
    const auto q = partial_trace(s, {1});
    r.add("qubit_excitation", q.matrix()(1, 1).real());
    r.add("qubit_entropy", von_neumann_entropy(q));
    record_hygiene(r, s, none);
  }
  r.states = std::move(traj.states);
  const auto avg = windowed_average(r.times, r.at("N"), c.window);
  bool monotone = avg.size() >= 2;
  for (std::size_t k = 1; k < avg.size(); ++k) monotone = monotone && avg[k] > avg[k - 1];
  r.summary["window"] = c.window;
  r.summary["windowed_N"] = avg;
  r.summary["full_windows"] = avg.size();
  r.summary["windowed_N_monotone"] = monotone;
  r.summary["max_qubit_excitation"] = max_of(r.at("qubit_excitation"));
  r.summary["max_qubit_entropy"] = max_of(r.at("qubit_entropy"));
  r.summary["final_N"] = r.at("N").back();
  summarize_hygiene(r);
  return r;
}

}  // namespace cqed
