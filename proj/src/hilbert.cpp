#include "cqed/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cqed {

RegisterLayout::RegisterLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  for (const auto& s : subsystems_) {
    if (s.dim < 2) throw std::invalid_argument("subsystem dimension must be at least 2");
    if (s.kind == SubsystemKind::qubit && s.dim != 2) throw std::invalid_argument("qubit dimension must be 2");
  }
}

RegisterLayout RegisterLayout::bosons(std::size_t count, std::size_t cutoff) {
  return RegisterLayout(std::vector<Subsystem>(count, {SubsystemKind::boson, cutoff + 1}));
}

RegisterLayout RegisterLayout::qubits(std::size_t count) {
  return RegisterLayout(std::vector<Subsystem>(count, {SubsystemKind::qubit, 2}));
}

RegisterLayout& RegisterLayout::add_boson(std::size_t cutoff) {
  if (cutoff < 1) throw std::invalid_argument("Fock cutoff must be at least 1");
  subsystems_.push_back({SubsystemKind::boson, cutoff + 1});
  return *this;
}

RegisterLayout& RegisterLayout::add_qubit() {
  subsystems_.push_back({SubsystemKind::qubit, 2});
  return *this;
}

std::size_t RegisterLayout::total_dim() const {
  std::size_t d = 1;
  for (const auto& s : subsystems_) d *= s.dim;
  return d;
}

std::size_t RegisterLayout::stride(std::size_t i) const {
  std::size_t s = 1;
  for (std::size_t j = i + 1; j < subsystems_.size(); ++j) s *= subsystems_[j].dim;
  return s;
}

std::vector<std::size_t> RegisterLayout::digits(std::size_t index) const {
  std::vector<std::size_t> d(subsystems_.size());
  for (std::size_t j = subsystems_.size(); j-- > 0;) {
    d[j] = index % subsystems_[j].dim;
    index /= subsystems_[j].dim;
  }
  return d;
}

std::size_t RegisterLayout::index(const std::vector<std::size_t>& digits) const {
  if (digits.size() != subsystems_.size()) throw std::invalid_argument("digit count does not match layout");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] >= subsystems_[j].dim) throw std::out_of_range("occupation exceeds subsystem dimension");
    idx = idx * subsystems_[j].dim + digits[j];
  }
  return idx;
}

RegisterLayout RegisterLayout::select(const std::vector<std::size_t>& keep) const {
  std::vector<Subsystem> out;
  for (auto k : keep) out.push_back(subsystems_.at(k));
  return RegisterLayout(std::move(out));
}

namespace {

void check_indices(const std::vector<std::size_t>& keep, std::size_t n) {
  if (keep.empty()) throw std::invalid_argument("subsystem set must be nonempty");
  std::vector<bool> seen(n, false);
  for (auto k : keep) {
    if (k >= n) throw std::out_of_range("subsystem index " + std::to_string(k) + " out of range");
    if (seen[k]) throw std::invalid_argument("duplicate subsystem index " + std::to_string(k));
    seen[k] = true;
  }
}

// Applies one factor to a single digit; returns false if the column is annihilated.
bool apply_factor(Kind kind, std::size_t dim, std::size_t& n, double& amp) {
  switch (kind) {
    case Kind::create:
      if (n + 1 >= dim) return false;
      amp *= std::sqrt(n + 1.0);
      ++n;
      return true;
    case Kind::annihilate:
      if (n == 0) return false;
      amp *= std::sqrt(static_cast<double>(n));
      --n;
      return true;
    case Kind::number:
      amp *= static_cast<double>(n);
      return n != 0;
    case Kind::sigma_plus:
      if (n != 0) return false;
      n = 1;
      return true;
    case Kind::sigma_minus:
      if (n != 1) return false;
      n = 0;
      return true;
    case Kind::sigma_z:
      amp *= n == 1 ? 1.0 : -1.0;
      return true;
  }
  return false;
}

void check_kind(Kind kind, const Subsystem& s, std::size_t index) {
  if (is_ladder(kind) && s.kind != SubsystemKind::boson)
    throw std::invalid_argument("ladder factor on non-bosonic subsystem " + std::to_string(index));
  if (is_pauli(kind) && s.kind != SubsystemKind::qubit)
    throw std::invalid_argument("Pauli factor on non-qubit subsystem " + std::to_string(index));
}

void append_triplets(const LadderMonomial& term, const RegisterLayout& layout,
                     std::vector<Eigen::Triplet<cplx>>& out) {
  for (const auto& f : term.factors) {
    if (f.subsystem >= layout.size())
      throw std::out_of_range("factor subsystem " + std::to_string(f.subsystem) + " outside layout");
    check_kind(f.kind, layout[f.subsystem], f.subsystem);
  }
  const std::size_t dim = layout.total_dim();
  std::vector<std::size_t> digits(layout.size(), 0);
  std::vector<std::size_t> strides(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) strides[i] = layout.stride(i);
  // Only the touched subsystems change, so track them explicitly.
  std::vector<std::size_t> touched;
  for (const auto& f : term.factors)
    if (std::find(touched.begin(), touched.end(), f.subsystem) == touched.end()) touched.push_back(f.subsystem);
  std::vector<std::size_t> local(layout.size());
  for (std::size_t col = 0; col < dim; ++col) {
    if (col > 0) {
      std::size_t j = layout.size();
      while (j-- > 0) {
        if (++digits[j] < layout.dim(j)) break;
        digits[j] = 0;
      }
    }
    for (auto s : touched) local[s] = digits[s];
    double amp = 1.0;
    bool alive = true;
    for (auto it = term.factors.rbegin(); it != term.factors.rend() && alive; ++it)
      alive = apply_factor(it->kind, layout.dim(it->subsystem), local[it->subsystem], amp);
    if (!alive) continue;
    std::ptrdiff_t row = static_cast<std::ptrdiff_t>(col);
    for (auto s : touched)
      row += (static_cast<std::ptrdiff_t>(local[s]) - static_cast<std::ptrdiff_t>(digits[s])) *
             static_cast<std::ptrdiff_t>(strides[s]);
    out.emplace_back(row, col, term.coeff * amp);
  }
}

}  // namespace

Eigen::SparseMatrix<cplx> local_matrix(Kind kind, std::size_t dim) {
  RegisterLayout layout({{is_pauli(kind) ? SubsystemKind::qubit : SubsystemKind::boson, dim}});
  return Eigen::SparseMatrix<cplx>(build_operator({{{0, kind}}, 1.0, 0}, layout).matrix);
}

OperatorMatrix build_operator(const LadderMonomial& term, const RegisterLayout& layout) {
  return build_sum({term}, layout);
}

OperatorMatrix build_sum(const std::vector<LadderMonomial>& terms, const RegisterLayout& layout) {
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (const auto& t : terms) append_triplets(t, layout, triplets);
  const auto dim = static_cast<Eigen::Index>(layout.total_dim());
  OperatorMatrix op{layout, SpMat(dim, dim)};
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.prune(cplx(0.0));
  return op;
}

OperatorMatrix identity_operator(const RegisterLayout& layout) {
  return build_operator({{}, 1.0, 0}, layout);
}

QuantumState QuantumState::pure(RegisterLayout layout, Vec amplitudes) {
  auto s = unnormalized(std::move(layout), std::move(amplitudes));
  if (std::abs(s.psi_.norm() - 1.0) > 1e-9) throw std::invalid_argument("pure state is not normalized");
  return s;
}

QuantumState QuantumState::unnormalized(RegisterLayout layout, Vec amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != layout.total_dim())
    throw std::invalid_argument("amplitude vector length does not match layout");
  QuantumState s;
  s.layout_ = std::move(layout);
  s.pure_ = true;
  s.psi_ = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::density(RegisterLayout layout, Mat rho, bool validate) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("density matrix shape does not match layout");
  if (!validate) {
    QuantumState s;
    s.layout_ = std::move(layout);
    s.pure_ = false;
    s.rho_ = std::move(rho);
    return s;
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-9) throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw std::invalid_argument("density matrix has negative eigenvalues");
  QuantumState s;
  s.layout_ = std::move(layout);
  s.pure_ = false;
  s.rho_ = std::move(rho);
  return s;
}

const Vec& QuantumState::vector() const {
  if (!pure_) throw std::logic_error("state is not pure");
  return psi_;
}

const Mat& QuantumState::matrix() const {
  if (pure_) throw std::logic_error("state is pure; use density_matrix()");
  return rho_;
}

Mat QuantumState::density_matrix() const { return pure_ ? Mat(psi_ * psi_.adjoint()) : rho_; }

double QuantumState::norm() const { return pure_ ? psi_.norm() : rho_.trace().real(); }

cplx expectation(const QuantumState& state, const OperatorMatrix& op) {
  if (!(op.layout == state.layout())) throw std::invalid_argument("operator and state layouts differ");
  if (state.is_pure()) {
    const Vec& psi = state.vector();
    return psi.dot(op.matrix * psi);
  }
  const Mat& rho = state.matrix();
  cplx acc = 0.0;
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r)
    for (SpMat::InnerIterator it(op.matrix, r); it; ++it) acc += it.value() * rho(it.col(), it.row());
  return acc;
}

cplx expectation(const QuantumState& state, const LadderMonomial& term) {
  return expectation(state, build_operator(term, state.layout()));
}

QuantumState partial_trace(const QuantumState& state, const std::vector<std::size_t>& keep) {
  const auto& layout = state.layout();
  check_indices(keep, layout.size());
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) rest.push_back(i);
  RegisterLayout lk = layout.select(keep);
  const std::size_t dk = lk.total_dim();
  const std::size_t dr = rest.empty() ? 1 : layout.select(rest).total_dim();
  // map[(ik, ir)] = full index
  std::vector<std::size_t> map(dk * dr);
  std::vector<std::size_t> ks(keep.size()), rs(rest.size());
  for (std::size_t i = 0; i < keep.size(); ++i) ks[i] = layout.stride(keep[i]);
  for (std::size_t i = 0; i < rest.size(); ++i) rs[i] = layout.stride(rest[i]);
  RegisterLayout lr = rest.empty() ? RegisterLayout() : layout.select(rest);
  for (std::size_t ik = 0; ik < dk; ++ik) {
    auto dkg = lk.digits(ik);
    std::size_t base = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) base += dkg[i] * ks[i];
    for (std::size_t ir = 0; ir < dr; ++ir) {
      std::size_t off = 0;
      if (!rest.empty()) {
        auto drg = lr.digits(ir);
        for (std::size_t i = 0; i < rest.size(); ++i) off += drg[i] * rs[i];
      }
      map[ik * dr + ir] = base + off;
    }
  }
  Mat out = Mat::Zero(dk, dk);
  if (state.is_pure()) {
    const Vec& psi = state.vector();
    Mat m(dk, dr);
    for (std::size_t ik = 0; ik < dk; ++ik)
      for (std::size_t ir = 0; ir < dr; ++ir) m(ik, ir) = psi(map[ik * dr + ir]);
    out = m * m.adjoint();
  } else {
    const Mat& rho = state.matrix();
    for (std::size_t ik = 0; ik < dk; ++ik)
      for (std::size_t jk = 0; jk < dk; ++jk) {
        cplx acc = 0.0;
        for (std::size_t ir = 0; ir < dr; ++ir) acc += rho(map[ik * dr + ir], map[jk * dr + ir]);
        out(ik, jk) = acc;
      }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return QuantumState::density(std::move(lk), std::move(out), false);
}

Eigen::MatrixXd symplectic_form(std::size_t m) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    omega(i, m + i) = 1.0;
    omega(m + i, i) = -1.0;
  }
  return omega;
}

Eigen::MatrixXd covariance_matrix(const QuantumState& state, const std::vector<std::size_t>& modes) {
  const auto& layout = state.layout();
  for (auto i : modes) {
    if (i >= layout.size()) throw std::out_of_range("mode index out of range");
    if (layout[i].kind != SubsystemKind::boson) throw std::invalid_argument("covariance requested on a qubit");
  }
  const std::size_t m = modes.size();
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<SpMat> q;
  for (auto i : modes) q.push_back(build_sum({{{{i, Kind::annihilate}}, r2, 0}, {{{i, Kind::create}}, r2, 0}}, layout).matrix);
  for (auto i : modes)
    q.push_back(build_sum({{{{i, Kind::create}}, cplx(0, r2), 0}, {{{i, Kind::annihilate}}, cplx(0, -r2), 0}}, layout).matrix);
  Eigen::VectorXd mean(2 * m);
  Eigen::MatrixXd sym(2 * m, 2 * m);
  if (state.is_pure()) {
    const Vec& psi = state.vector();
    const double nn = psi.squaredNorm();
    std::vector<Vec> v;
    for (const auto& op : q) v.push_back(op * psi);
    for (std::size_t k = 0; k < 2 * m; ++k) mean(k) = psi.dot(v[k]).real() / nn;
    for (std::size_t k = 0; k < 2 * m; ++k)
      for (std::size_t l = k; l < 2 * m; ++l) sym(k, l) = sym(l, k) = v[k].dot(v[l]).real() / nn;
  } else {
    const Mat& rho = state.matrix();
    std::vector<Mat> qr;
    for (const auto& op : q) qr.push_back(op * rho);
    for (std::size_t k = 0; k < 2 * m; ++k) mean(k) = qr[k].trace().real();
    for (std::size_t k = 0; k < 2 * m; ++k)
      for (std::size_t l = k; l < 2 * m; ++l) {
        cplx acc = 0.0;
        for (Eigen::Index r = 0; r < q[k].outerSize(); ++r)
          for (SpMat::InnerIterator it(q[k], r); it; ++it) acc += it.value() * qr[l](it.col(), it.row());
        sym(k, l) = sym(l, k) = acc.real();
      }
  }
  return sym - mean * mean.transpose();
}

QuantumState fock_state(const RegisterLayout& layout, const std::vector<std::size_t>& occupations) {
  Vec psi = Vec::Zero(layout.total_dim());
  psi(layout.index(occupations)) = 1.0;
  return QuantumState::pure(layout, std::move(psi));
}

namespace {
void require_three_qubits(const RegisterLayout& layout) {
  if (layout.size() != 3 || !std::all_of(layout.subsystems().begin(), layout.subsystems().end(),
                                         [](const Subsystem& s) { return s.kind == SubsystemKind::qubit; }))
    throw std::invalid_argument("GHZ and W states need a three-qubit layout");
}
}  // namespace

QuantumState ghz(const RegisterLayout& layout) {
  require_three_qubits(layout);
  Vec psi = Vec::Zero(8);
  psi(0) = psi(7) = 1.0 / std::sqrt(2.0);
  return QuantumState::pure(layout, std::move(psi));
}

QuantumState w_state(const RegisterLayout& layout) {
  require_three_qubits(layout);
  Vec psi = Vec::Zero(8);
  psi(1) = psi(2) = psi(4) = 1.0 / std::sqrt(3.0);
  return QuantumState::pure(layout, std::move(psi));
}

double top_level_population(const QuantumState& state, std::size_t i, std::size_t levels) {
  const auto& layout = state.layout();
  const std::size_t dim = layout.dim(i), stride = layout.stride(i);
  double p = 0.0;
  for (std::size_t idx = 0; idx < layout.total_dim(); ++idx) {
    if ((idx / stride) % dim + levels < dim) continue;
    p += state.is_pure() ? std::norm(state.vector()(idx)) : state.matrix()(idx, idx).real();
  }
  return p;
}

QuantumState apply_local_phases(const QuantumState& state, const std::vector<std::pair<std::size_t, double>>& phases) {
  const auto& layout = state.layout();
  Vec diag = Vec::Ones(layout.total_dim());
  for (std::size_t idx = 0; idx < layout.total_dim(); ++idx) {
    double theta = 0.0;
    for (const auto& [s, th] : phases) theta += th * static_cast<double>((idx / layout.stride(s)) % layout.dim(s));
    diag(idx) = std::polar(1.0, theta);
  }
  if (state.is_pure()) return QuantumState::unnormalized(layout, diag.cwiseProduct(state.vector()));
  Mat rho = diag.asDiagonal() * state.matrix() * diag.conjugate().asDiagonal();
  return QuantumState::density(layout, 0.5 * (rho + rho.adjoint()), false);
}

double von_neumann_entropy(const QuantumState& state) {
  Eigen::SelfAdjointEigenSolver<Mat> es(state.density_matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

nlohmann::json state_to_json(const QuantumState& state) {
  nlohmann::json layout = nlohmann::json::array();
  for (const auto& s : state.layout().subsystems())
    layout.push_back({{"kind", s.kind == SubsystemKind::boson ? "boson" : "qubit"}, {"dim", s.dim}});
  nlohmann::json data = nlohmann::json::array();
  if (state.is_pure()) {
    for (Eigen::Index i = 0; i < state.vector().size(); ++i)
      data.push_back({state.vector()(i).real(), state.vector()(i).imag()});
  } else {
    const Mat& rho = state.matrix();
    for (Eigen::Index r = 0; r < rho.rows(); ++r)
      for (Eigen::Index c = 0; c < rho.cols(); ++c) data.push_back({rho(r, c).real(), rho(r, c).imag()});
  }
  return {{"layout", layout}, {"kind", state.is_pure() ? "pure" : "density"},
          {"basis_order", "subsystem 0 slowest"}, {"data", data}};
}

QuantumState state_from_json(const nlohmann::json& j) {
  std::vector<Subsystem> subs;
  for (const auto& s : j.at("layout")) {
    const auto kind = s.at("kind").get<std::string>();
    if (kind != "boson" && kind != "qubit") throw std::invalid_argument("unknown subsystem kind '" + kind + "'");
    subs.push_back({kind == "boson" ? SubsystemKind::boson : SubsystemKind::qubit, s.at("dim").get<std::size_t>()});
  }
  RegisterLayout layout(std::move(subs));
  const auto& data = j.at("data");
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  const auto kind = j.at("kind").get<std::string>();
  auto entry = [&](std::size_t i) { return cplx(data.at(i).at(0).get<double>(), data.at(i).at(1).get<double>()); };
  if (kind == "pure") {
    if (data.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("state data length mismatch");
    Vec psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = entry(i);
    return QuantumState::pure(layout, std::move(psi));
  }
  if (kind != "density") throw std::invalid_argument("state kind must be pure or density");
  if (data.size() != static_cast<std::size_t>(d * d)) throw std::invalid_argument("state data length mismatch");
  Mat rho(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) rho(r, c) = entry(r * d + c);
  return QuantumState::density(layout, std::move(rho));
}

}  // namespace cqed
