#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cqed/errors.hpp"

namespace cqed {

Envelope Envelope::constant(double a) {
  Envelope e;
  e.type = Type::constant;
  e.amplitude = a;
  return e;
}

Envelope Envelope::cosine(double a, double w, double phase) {
  Envelope e;
  e.type = Type::cosine;
  e.amplitude = a;
  e.frequency = w;
  e.phase = phase;
  return e;
}

Envelope Envelope::two_tone(double a1, double w1, double a2, double w2, double phase1, double phase2) {
  Envelope e;
  e.type = Type::two_tone;
  e.amplitude = a1;
  e.frequency = w1;
  e.phase = phase1;
  e.amplitude2 = a2;
  e.frequency2 = w2;
  e.phase2 = phase2;
  return e;
}

Envelope Envelope::motional(double a, double v, double k, double x0) {
  Envelope e;
  e.type = Type::motional;
  e.amplitude = a;
  e.velocity = v;
  e.wavenumber = k;
  e.x0 = x0;
  return e;
}

Envelope Envelope::phasor(int sign, double w) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("phasor sign must be +1 or -1");
  Envelope e;
  e.type = Type::phasor;
  e.sign = sign;
  e.frequency = w;
  return e;
}

cplx Envelope::operator()(double t) const {
  switch (type) {
    case Type::constant: return amplitude;
    case Type::cosine: return amplitude * std::cos(frequency * t + phase);
    case Type::two_tone:
      return amplitude * std::cos(frequency * t + phase) + amplitude2 * std::cos(frequency2 * t + phase2);
    case Type::motional: return amplitude * std::cos(wavenumber * (x0 + velocity * t));
    case Type::phasor: return 0.5 * std::polar(1.0, sign * frequency * t);
  }
  return 0.0;
}

HamiltonianSpec HamiltonianSpec::from_terms(const std::vector<LadderMonomial>& terms, double drive) {
  HamiltonianSpec h;
  for (const auto& t : terms) {
    if (t.drive_sign == 0) {
      h.static_terms.push_back(t);
    } else {
      LadderMonomial bare = t;
      bare.drive_sign = 0;
      h.driven_terms.push_back({bare, Envelope::phasor(t.drive_sign, drive)});
    }
  }
  return h;
}

CompiledHamiltonian::CompiledHamiltonian(const HamiltonianSpec& h, const RegisterLayout& layout)
    : layout_(layout), static_(build_sum(h.static_terms, layout).matrix) {
  std::vector<std::pair<Envelope, std::vector<LadderMonomial>>> groups;
  for (const auto& d : h.driven_terms) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == d.envelope; });
    if (it == groups.end())
      groups.push_back({d.envelope, {d.term}});
    else
      it->second.push_back(d.term);
  }
  for (auto& [env, terms] : groups) driven_.emplace_back(env, build_sum(terms, layout).matrix);
}

SpMat CompiledHamiltonian::at(double t) const {
  SpMat h = static_;
  for (const auto& [env, m] : driven_) h += env(t) * m;
  return h;
}

void CompiledHamiltonian::apply(double t, const Vec& psi, Vec& out) const {
  out.noalias() = static_ * psi;
  for (const auto& [env, m] : driven_) {
    const cplx f = env(t);
    if (f != 0.0) out.noalias() += f * (m * psi);
  }
}

double CompiledHamiltonian::scale() const {
  auto row_norm = [](const SpMat& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      double s = 0.0;
      for (SpMat::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
      best = std::max(best, s);
    }
    return best;
  };
  double s = row_norm(static_);
  for (const auto& [env, m] : driven_) {
    const double a = env.type == Envelope::Type::phasor ? 0.5 : std::abs(env.amplitude) + std::abs(env.amplitude2);
    s += a * row_norm(m);
  }
  return s;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory evolve(const HamiltonianSpec& h, const QuantumState& psi0, const std::vector<double>& t_grid,
                  const StepControl& control, const std::vector<NamedOperator>& observables) {
  return evolve(CompiledHamiltonian(h, psi0.layout()), psi0, t_grid, control, observables);
}

Trajectory evolve(const CompiledHamiltonian& h, const QuantumState& psi0, const std::vector<double>& t_grid,
                  const StepControl& control, const std::vector<NamedOperator>& observables) {
  if (!psi0.is_pure()) throw std::invalid_argument("evolve needs a pure initial state");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial state is not normalized");
  if (!(psi0.layout() == h.layout())) throw std::invalid_argument("state and Hamiltonian layouts differ");
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");

  Trajectory traj;
  auto record = [&](double t, const Vec& y) {
    traj.times.push_back(t);
    traj.states.push_back(QuantumState::unnormalized(psi0.layout(), y));
    for (const auto& [name, op] : observables) traj.observables[name].push_back(expectation(traj.states.back(), op));
  };

  // dy/dt = -i H(t) y
  auto rhs = [&](double t, const Vec& y, Vec& out) {
    h.apply(t, y, out);
    out *= cplx(0.0, -1.0);
  };

  const Eigen::Index n = psi0.vector().size();
  Vec y = psi0.vector(), ynew(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);
  double t = t_grid.front();
  record(t, y);
  rhs(t, y, k1);
  double hstep = control.initial_step > 0.0 ? control.initial_step : 0.01 / std::max(h.scale(), 1e-300);

  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double target = t_grid[g];
    while (t < target) {
      const double h_min = control.min_step * std::max(1.0, std::abs(t));
      bool last = false;
      double hh = hstep;
      if (t + hh >= target || target - (t + hh) < h_min) {
        hh = target - t;
        last = true;
      }
      tmp = y + hh * a21 * k1;
      rhs(t + c2 * hh, tmp, k2);
      tmp = y + hh * (a31 * k1 + a32 * k2);
      rhs(t + c3 * hh, tmp, k3);
      tmp = y + hh * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * hh, tmp, k4);
      tmp = y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * hh, tmp, k5);
      tmp = y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + hh, tmp, k6);
      ynew = y + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(t + hh, ynew, k7);
      tmp = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = control.atol + control.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
        err = std::max(err, std::abs(tmp(i)) / sc);
      }
      if (++traj.steps > control.max_steps) throw StepSizeError("step budget exhausted", t);
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t = last ? target : t + hh;
        y.swap(ynew);
        k1.swap(k7);
        if (!last || factor < 1.0) hstep = hh * factor;
        else hstep = std::max(hstep, hh * factor);
      } else {
        ++traj.rejected;
        hstep = hh * std::min(1.0, factor);
        if (hstep < h_min) {
          std::ostringstream os;
          os << "step size underflow at t = " << t << " (h = " << hstep << ")";
          throw StepSizeError(os.str(), t);
        }
      }
    }
    record(target, y);
  }
  return traj;
}

StaticPropagator::StaticPropagator(const std::vector<LadderMonomial>& static_terms, const RegisterLayout& layout)
    : layout_(layout) {
  if (layout.total_dim() > kMaxDim)
    throw DimensionError("dense propagator limited to dimension " + std::to_string(kMaxDim));
  Mat h = Mat(build_sum(static_terms, layout).matrix);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

QuantumState StaticPropagator::operator()(const QuantumState& psi0, double t) const {
  if (!(psi0.layout() == layout_)) throw std::invalid_argument("state and Hamiltonian layouts differ");
  Vec c = vectors_.adjoint() * psi0.vector();
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -energies_(i) * t);
  return QuantumState::unnormalized(layout_, vectors_ * c);
}

QuantumState evolve_static_expm(const std::vector<LadderMonomial>& h_static, const QuantumState& psi0, double t) {
  return StaticPropagator(h_static, psi0.layout())(psi0, t);
}

ConvergenceReport cutoff_sweep(const CutoffRun& run, const std::vector<int>& cutoffs, double tolerance) {
  if (cutoffs.size() < 2) throw std::invalid_argument("cutoff sweep needs at least two cutoffs");
  ConvergenceReport rep;
  rep.cutoffs = cutoffs;
  rep.tolerance = tolerance;
  std::vector<std::map<std::string, std::vector<double>>> runs;
  for (int c : cutoffs) runs.push_back(run(c));
  for (const auto& [name, series] : runs.front()) {
    std::vector<double> ch;
    bool present = true;
    for (std::size_t k = 1; k < runs.size() && present; ++k) {
      auto a = runs[k - 1].find(name), b = runs[k].find(name);
      if (a == runs[k - 1].end() || b == runs[k].end()) {
        present = false;
        break;
      }
      const std::size_t len = std::min(a->second.size(), b->second.size());
      double m = 0.0;
      for (std::size_t i = 0; i < len; ++i) m = std::max(m, std::abs(a->second[i] - b->second[i]));
      ch.push_back(m);
    }
    if (!present) continue;
    for (std::size_t k = 1; k < ch.size(); ++k)
      if (ch[k] > ch[k - 1] && ch[k] > 1e-14) rep.monotone = false;
    rep.max_final_change = std::max(rep.max_final_change, ch.back());
    rep.changes[name] = std::move(ch);
  }
  rep.converged = rep.max_final_change < tolerance;
  return rep;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = b;
  return v;
}

}  // namespace cqed
