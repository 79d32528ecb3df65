#include "cqed/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace cqed {

namespace {

void require_kind(const RegisterLayout& layout, ModeTriple idx, SubsystemKind kind, const char* what) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (idx[i] >= layout.size()) throw std::out_of_range(std::string(what) + " index out of range");
    if (layout[idx[i]].kind != kind)
      throw std::invalid_argument(std::string(what) + " " + std::to_string(idx[i]) + " has the wrong subsystem kind");
    for (std::size_t j = 0; j < i; ++j)
      if (idx[i] == idx[j]) throw std::invalid_argument(std::string(what) + " indices must be distinct");
  }
}

// Diagonal basis weights |psi_i|^2 or rho_ii (unnormalized states keep their weight).
Eigen::VectorXd basis_weights(const QuantumState& s) {
  if (s.is_pure()) return s.vector().cwiseAbs2();
  return s.matrix().diagonal().real();
}

struct NumberMoments {
  std::array<double, 3> n{};      // <N_i>
  std::array<double, 3> pair{};   // <N_j N_k> with {j,k} the complement of i
};

NumberMoments number_moments(const QuantumState& s, ModeTriple idx) {
  const auto& layout = s.layout();
  const Eigen::VectorXd w = basis_weights(s);
  NumberMoments m;
  std::array<std::size_t, 3> stride{}, dim{};
  for (int i = 0; i < 3; ++i) {
    stride[i] = layout.stride(idx[i]);
    dim[i] = layout.dim(idx[i]);
  }
  for (Eigen::Index b = 0; b < w.size(); ++b) {
    if (w(b) == 0.0) continue;
    std::array<double, 3> occ{};
    for (int i = 0; i < 3; ++i) occ[i] = static_cast<double>((static_cast<std::size_t>(b) / stride[i]) % dim[i]);
    for (int i = 0; i < 3; ++i) {
      m.n[i] += w(b) * occ[i];
      m.pair[i] += w(b) * occ[(i + 1) % 3] * occ[(i + 2) % 3];
    }
  }
  return m;
}

double triple_moment(const QuantumState& s, ModeTriple idx, Kind lower) {
  LadderMonomial t{{{idx[0], lower}, {idx[1], lower}, {idx[2], lower}}, 1.0, 0};
  return std::abs(expectation(s, t));
}

WitnessReport make(std::string name, double value) {
  WitnessReport r;
  r.name = std::move(name);
  r.value = value;
  r.detects = value > 0.0;
  return r;
}

const char* kLabels[3] = {"1|23", "2|13", "3|12"};

}  // namespace

double vlf_value(const Eigen::MatrixXd& cov, const VlfParams& p) {
  if (cov.rows() != 6 || cov.cols() != 6) throw std::invalid_argument("VLF witness needs a 6x6 covariance matrix");
  const auto& g = p.g;
  const auto& h = p.h;
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    bound = std::min(bound, std::abs(h[i] * g[i]) + std::abs(h[j] * g[j] + h[k] * g[k]));
  }
  double xx = 0.0, pp = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      xx += g[i] * g[j] * cov(i, j);
      pp += h[i] * h[j] * cov(3 + i, 3 + j);
    }
  return bound - xx - pp;
}

WitnessReport vlf_S(const QuantumState& state, const VlfParams& params, ModeTriple modes) {
  require_kind(state.layout(), modes, SubsystemKind::boson, "mode");
  const auto cov = covariance_matrix(state, {modes[0], modes[1], modes[2]});
  auto r = make("S", vlf_value(cov, params));
  r.params = params;
  for (int i = 0; i < 3; ++i) {
    r.components["var_x" + std::to_string(i + 1)] = cov(i, i);
    r.components["var_p" + std::to_string(i + 1)] = cov(3 + i, 3 + i);
  }
  return r;
}

namespace {

struct Objective {
  const Eigen::MatrixXd* cov;
  double box;
};

VlfParams clamp_params(const gsl_vector* x, double box) {
  VlfParams p;
  for (int i = 0; i < 3; ++i) {
    p.g[i] = std::clamp(gsl_vector_get(x, i), -box, box);
    p.h[i] = std::clamp(gsl_vector_get(x, 3 + i), -box, box);
  }
  return p;
}

double negative_s(const gsl_vector* x, void* data) {
  const auto* o = static_cast<const Objective*>(data);
  return -vlf_value(*o->cov, clamp_params(x, o->box));
}

std::pair<double, std::array<double, 6>> simplex_run(const Objective& obj, const std::array<double, 6>& start,
                                                     const VlfSearch& search) {
  gsl_multimin_function f{&negative_s, 6, const_cast<Objective*>(&obj)};
  gsl_vector* x = gsl_vector_alloc(6);
  gsl_vector* step = gsl_vector_alloc(6);
  for (int i = 0; i < 6; ++i) gsl_vector_set(x, i, start[i]);
  gsl_vector_set_all(step, 0.25 * search.box);
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 6);
  gsl_multimin_fminimizer_set(m, &f, x, step);
  for (int it = 0; it < search.iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), search.tolerance) == GSL_SUCCESS) break;
  }
  std::array<double, 6> best{};
  const VlfParams p = clamp_params(m->x, search.box);
  for (int i = 0; i < 3; ++i) {
    best[i] = p.g[i];
    best[3 + i] = p.h[i];
  }
  const double value = -m->fval;
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return {value, best};
}

}  // namespace

WitnessReport optimize_vlf(const Eigen::MatrixXd& cov, const VlfSearch& search) {
  if (search.restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  gsl_set_error_handler_off();
  Objective obj{&cov, search.box};
  double best = -std::numeric_limits<double>::infinity();
  std::array<double, 6> arg{};
  for (int r = 0; r < search.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(search.seed), static_cast<std::uint32_t>(search.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-search.box, search.box);
    std::array<double, 6> start{};
    for (auto& v : start) v = u(rng);
    auto [val, x] = simplex_run(obj, start, search);
    if (val > best) {
      best = val;
      arg = x;
    }
  }
  auto [val, x] = simplex_run(obj, arg, search);
  if (val > best) {
    best = val;
    arg = x;
  }
  VlfParams p;
  for (int i = 0; i < 3; ++i) {
    p.g[i] = arg[i];
    p.h[i] = arg[3 + i];
  }
  auto rep = make("S_opt", vlf_value(cov, p));
  rep.params = p;
  rep.components["restarts"] = search.restarts;
  return rep;
}

WitnessReport optimize_vlf(const QuantumState& state, const VlfSearch& search, ModeTriple modes) {
  require_kind(state.layout(), modes, SubsystemKind::boson, "mode");
  return optimize_vlf(covariance_matrix(state, {modes[0], modes[1], modes[2]}), search);
}

WitnessReport hz_inseparability(const QuantumState& state, std::size_t alpha, ModeTriple modes) {
  require_kind(state.layout(), modes, SubsystemKind::boson, "mode");
  if (alpha >= 3) throw std::out_of_range("singled-out mode must be 0, 1 or 2");
  const double a123 = triple_moment(state, modes, Kind::annihilate);
  const auto m = number_moments(state, modes);
  auto r = make("I" + std::to_string(alpha + 1), a123 - std::sqrt(std::max(0.0, m.n[alpha] * m.pair[alpha])));
  r.components["|<a1a2a3>|"] = a123;
  r.components["<N_alpha>"] = m.n[alpha];
  r.components["<N_beta N_gamma>"] = m.pair[alpha];
  r.argmax = kLabels[alpha];
  return r;
}

WitnessReport genuine_g1(const QuantumState& state, ModeTriple modes) {
  require_kind(state.layout(), modes, SubsystemKind::boson, "mode");
  const double a123 = triple_moment(state, modes, Kind::annihilate);
  const auto m = number_moments(state, modes);
  const double norm = state.is_pure() ? state.vector().squaredNorm() : state.matrix().trace().real();
  double sum = 0.0, top = -1.0;
  std::string arg;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    // <a a+> = <N> + 1 and <a_j a_j+ a_k a_k+> = <(N_j + 1)(N_k + 1)>
    const double single = m.n[i] + norm;
    const double pair = m.pair[i] + m.n[j] + m.n[k] + norm;
    const double term = std::sqrt(std::max(0.0, single * pair));
    sum += term;
    if (term > top) {
      top = term;
      arg = kLabels[i];
    }
  }
  auto r = make("G1", a123 - sum);
  r.components["|<a1a2a3>|"] = a123;
  r.components["bipartition_sum"] = sum;
  r.argmax = arg;
  return r;
}

WitnessReport genuine_g2(const QuantumState& state, ModeTriple modes) {
  require_kind(state.layout(), modes, SubsystemKind::boson, "mode");
  const double a123 = triple_moment(state, modes, Kind::annihilate);
  const auto m = number_moments(state, modes);
  double top = 0.0;
  std::string arg = kLabels[0];
  for (int i = 0; i < 3; ++i) {
    const double term = std::sqrt(std::max(0.0, m.n[i] * m.pair[i]));
    if (term > top) {
      top = term;
      arg = kLabels[i];
    }
  }
  auto r = make("G2", a123 - top);
  r.components["|<a1a2a3>|"] = a123;
  r.components["bipartition_max"] = top;
  for (int i = 0; i < 3; ++i) r.components["<N" + std::to_string(i + 1) + ">"] = m.n[i];
  r.argmax = arg;
  return r;
}

WitnessReport dv_genuine(const QuantumState& state, MomentOrder order, Aggregate aggregate, ModeTriple qubits) {
  require_kind(state.layout(), qubits, SubsystemKind::qubit, "qubit");
  const double num = triple_moment(state, qubits, Kind::sigma_minus);
  const auto m = number_moments(state, qubits);  // excitation moments
  const double norm = state.is_pure() ? state.vector().squaredNorm() : state.matrix().trace().real();
  double sum = 0.0, top = 0.0;
  std::string arg = kLabels[0];
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    double single = m.n[i], pair = m.pair[i];
    if (order == MomentOrder::antinormal) {
      // s- s+ projects on the ground state: 1 - n
      single = norm - m.n[i];
      pair = norm - m.n[j] - m.n[k] + m.pair[i];
    }
    const double term = std::sqrt(std::max(0.0, single * pair));
    sum += term;
    if (term > top) {
      top = term;
      arg = kLabels[i];
    }
  }
  auto r = make("DV", num - (aggregate == Aggregate::sum ? sum : top));
  r.components["|<s-s-s->|"] = num;
  r.components["bipartition_term"] = aggregate == Aggregate::sum ? sum : top;
  r.argmax = arg;
  return r;
}

namespace {

std::vector<std::size_t> complement(const std::vector<std::size_t>& a, std::size_t n) {
  std::vector<std::size_t> b;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(a.begin(), a.end(), i) == a.end()) b.push_back(i);
  return b;
}

void check_bipartition(const std::vector<std::size_t>& a, std::size_t n) {
  if (a.empty() || a.size() >= n) throw std::invalid_argument("bipartition must be proper and nonempty");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= n) throw std::out_of_range("bipartition index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (a[i] == a[j]) throw std::invalid_argument("bipartition indices must be distinct");
  }
}

}  // namespace

double ppt_negativity(const QuantumState& state, const std::vector<std::size_t>& part_a) {
  const auto& layout = state.layout();
  check_bipartition(part_a, layout.size());
  const Mat rho = state.density_matrix();
  const std::size_t d = layout.total_dim();
  std::vector<std::size_t> pa(d, 0);
  for (std::size_t idx = 0; idx < d; ++idx)
    for (auto s : part_a) pa[idx] += ((idx / layout.stride(s)) % layout.dim(s)) * layout.stride(s);
  Mat pt(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) pt(r, c) = rho(r - pa[r] + pa[c], c - pa[c] + pa[r]);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) neg -= es.eigenvalues()(i);
  return neg;
}

double pure_state_negativity(const QuantumState& state, const std::vector<std::size_t>& part_a) {
  const auto& layout = state.layout();
  check_bipartition(part_a, layout.size());
  const auto part_b = complement(part_a, layout.size());
  const RegisterLayout la = layout.select(part_a), lb = layout.select(part_b);
  const std::size_t da = la.total_dim(), db = lb.total_dim();
  Mat m(da, db);
  const Vec& psi = state.vector();
  for (std::size_t idx = 0; idx < layout.total_dim(); ++idx) {
    std::size_t ia = 0, ib = 0;
    for (auto s : part_a) ia = ia * layout.dim(s) + (idx / layout.stride(s)) % layout.dim(s);
    for (auto s : part_b) ib = ib * layout.dim(s) + (idx / layout.stride(s)) % layout.dim(s);
    m(ia, ib) = psi(idx);
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Mat>(m).singularValues();
  const double l1 = sv.sum();
  return 0.5 * (l1 * l1 - sv.squaredNorm());
}

nlohmann::json report_to_json(const WitnessReport& r) {
  nlohmann::json j = {{"name", r.name}, {"value", r.value}, {"detects", r.detects}, {"components", r.components}};
  if (!r.argmax.empty()) j["argmax"] = r.argmax;
  if (r.params) j["params"] = {{"g", r.params->g}, {"h", r.params->h}};
  return j;
}

}  // namespace cqed
