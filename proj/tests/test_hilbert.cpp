#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "cqed/hilbert.hpp"

using namespace cqed;

namespace {

LadderMonomial op(std::vector<Factor> f, cplx c = 1.0) { return {std::move(f), c, 0}; }

Vec random_low_vector(std::mt19937_64& rng, const RegisterLayout& layout, std::size_t levels) {
  std::normal_distribution<double> n;
  Vec v = Vec::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  for (std::size_t i = 0; i < layout.total_dim(); ++i) {
    const auto d = layout.digits(i);
    if (std::all_of(d.begin(), d.end(), [&](std::size_t x) { return x < levels; })) v(i) = cplx(n(rng), n(rng));
  }
  return v.normalized();
}

}  // namespace

TEST_CASE("ladder matrices on a cutoff-2 mode") {
  const auto a = Mat(local_matrix(Kind::annihilate, 3));
  Mat expect = Mat::Zero(3, 3);
  expect(0, 1) = 1.0;
  expect(1, 2) = std::sqrt(2.0);
  CHECK((a - expect).norm() == 0.0);
  const auto n = Mat(local_matrix(Kind::number, 3));
  CHECK((n - a.adjoint() * a).norm() < 1e-15);
}

TEST_CASE("commutator [a, a+] = 1 away from the top level") {
  const auto a = Mat(local_matrix(Kind::annihilate, 6));
  const Mat c = a * a.adjoint() - a.adjoint() * a;
  for (int i = 0; i < 5; ++i) CHECK(c(i, i).real() == doctest::Approx(1.0));
  CHECK(c(5, 5).real() == doctest::Approx(-5.0));
}

TEST_CASE("qubit conventions") {
  const auto sm = Mat(local_matrix(Kind::sigma_minus, 2));
  const auto sz = Mat(local_matrix(Kind::sigma_z, 2));
  CHECK(sm(0, 1) == cplx(1.0));
  CHECK(sm.cwiseAbs().sum() == 1.0);
  CHECK(sz(0, 0) == cplx(-1.0));
  CHECK(sz(1, 1) == cplx(1.0));
  CHECK_THROWS(local_matrix(Kind::sigma_plus, 3));
}

TEST_CASE("big-endian basis order") {
  RegisterLayout l;
  l.add_boson(2).add_qubit().add_boson(1);
  CHECK(l.total_dim() == 3 * 2 * 2);
  CHECK(l.stride(0) == 4);
  CHECK(l.stride(2) == 1);
  CHECK(l.index({1, 0, 1}) == 5);
  CHECK(l.digits(5) == std::vector<std::size_t>{1, 0, 1});
  const auto s = fock_state(RegisterLayout::bosons(3, 3), {1, 1, 1});
  CHECK(s.vector()(16 + 4 + 1) == cplx(1.0));
}

TEST_CASE("operators on the wrong subsystem kind are rejected") {
  const auto l = RegisterLayout::qubits(2);
  CHECK_THROWS(build_operator(op({{0, Kind::create}}), l));
  CHECK_THROWS(build_operator(op({{2, Kind::sigma_z}}), l));
}

TEST_CASE("expectation examples") {
  const auto l = RegisterLayout::bosons(3, 3);
  CHECK(expectation(fock_state(l, {0, 0, 0}), op({{0, Kind::annihilate}, {0, Kind::create}})) == cplx(1.0));
  Vec v = Vec::Zero(64);
  v(0) = 1.0;
  v(l.index({1, 1, 1})) = 0.03;
  const auto s = QuantumState::unnormalized(l, v);
  CHECK(std::abs(expectation(s, op({{0, Kind::annihilate}, {1, Kind::annihilate}, {2, Kind::annihilate}}))) ==
        doctest::Approx(0.03));
  const auto q = RegisterLayout::qubits(3);
  CHECK(std::abs(expectation(ghz(q), op({{0, Kind::sigma_minus}, {1, Kind::sigma_minus}, {2, Kind::sigma_minus}}))) ==
        doctest::Approx(0.5));
  CHECK(std::abs(expectation(w_state(q), op({{0, Kind::sigma_minus}, {1, Kind::sigma_minus}, {2, Kind::sigma_minus}}))) ==
        doctest::Approx(0.0));
}

TEST_CASE("GHZ and W against direct 8-dimensional construction") {
  const auto q = RegisterLayout::qubits(3);
  Vec g = Vec::Zero(8), w = Vec::Zero(8);
  g(0) = g(7) = 1 / std::sqrt(2.0);
  w(1) = w(2) = w(4) = 1 / std::sqrt(3.0);
  CHECK((ghz(q).vector() - g).norm() < 1e-15);
  CHECK((w_state(q).vector() - w).norm() < 1e-15);
  CHECK_THROWS(ghz(RegisterLayout::qubits(2)));
}

TEST_CASE("state validation") {
  const auto l = RegisterLayout::qubits(1);
  Vec bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS(QuantumState::pure(l, bad));
  CHECK_THROWS(QuantumState::pure(l, Vec::Zero(3)));
  Mat rho(2, 2);
  rho << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS(QuantumState::density(l, rho));
  rho << 0.7, 0.0, 0.0, 0.7;
  CHECK_THROWS(QuantumState::density(l, rho));
  rho << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS(QuantumState::density(l, rho));
  rho << 0.5, 0.0, 0.0, 0.5;
  CHECK_NOTHROW(QuantumState::density(l, rho));
}

TEST_CASE("partial trace examples") {
  const auto q2 = RegisterLayout::qubits(2);
  Vec prod = Vec::Zero(4);
  prod(1) = 1.0;  // |0>|1>
  const auto r0 = partial_trace(QuantumState::pure(q2, prod), {0});
  CHECK(r0.matrix()(0, 0) == cplx(1.0));
  CHECK(r0.matrix().cwiseAbs().sum() == doctest::Approx(1.0));
  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const auto rb = partial_trace(QuantumState::pure(q2, bell), {0});
  CHECK((rb.matrix() * rb.matrix()).trace().real() == doctest::Approx(0.5));
  const auto rg = partial_trace(ghz(RegisterLayout::qubits(3)), {0, 1});
  Mat expect = Mat::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 0.5;
  CHECK((rg.matrix() - expect).norm() < 1e-15);
}

TEST_CASE("partial trace keeps the requested order") {
  const auto q2 = RegisterLayout::qubits(2);
  Vec prod = Vec::Zero(4);
  prod(1) = 1.0;  // |0>|1>
  const auto r = partial_trace(QuantumState::pure(q2, prod), {1, 0});
  CHECK(r.matrix()(2, 2) == cplx(1.0));  // |1>|0> in the kept order
}

TEST_CASE("vacuum covariance and the uncertainty relation") {
  const auto l = RegisterLayout::bosons(3, 6);
  const auto cov0 = covariance_matrix(fock_state(l, {0, 0, 0}), {0, 1, 2});
  CHECK((cov0 - 0.5 * Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-14);
  std::mt19937_64 rng(5);
  const Eigen::MatrixXcd omega = symplectic_form(3).cast<cplx>();
  for (int k = 0; k < 20; ++k) {
    const auto s = QuantumState::pure(l, random_low_vector(rng, l, 4));
    const Eigen::MatrixXcd m = covariance_matrix(s, {0, 1, 2}).cast<cplx>() + cplx(0, 0.5) * omega;
    const double min_ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues().minCoeff();
    CHECK(min_ev > -1e-12);
  }
}

TEST_CASE("pure and density covariance paths agree") {
  const auto l = RegisterLayout::bosons(2, 4);
  std::mt19937_64 rng(9);
  const Vec v = random_low_vector(rng, l, 4);
  const auto a = covariance_matrix(QuantumState::pure(l, v), {0, 1});
  const auto b = covariance_matrix(QuantumState::density(l, v * v.adjoint()), {0, 1});
  CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("truncation consistency: moments do not change when the cutoff grows by two") {
  std::mt19937_64 rng(11);
  const auto small = RegisterLayout::bosons(3, 4), big = RegisterLayout::bosons(3, 6);
  const Vec vs = random_low_vector(rng, small, 3);
  Vec vb = Vec::Zero(static_cast<Eigen::Index>(big.total_dim()));
  for (std::size_t i = 0; i < small.total_dim(); ++i) vb(big.index(small.digits(i))) = vs(i);
  const auto a = QuantumState::pure(small, vs), b = QuantumState::pure(big, vb);
  CHECK(top_level_population(a, 0, 2) < 1e-8);
  const std::vector<LadderMonomial> probes = {
      op({{0, Kind::annihilate}, {1, Kind::annihilate}, {2, Kind::annihilate}}),
      op({{0, Kind::number}, {1, Kind::number}}),
      op({{2, Kind::annihilate}, {2, Kind::create}}),
      op({{0, Kind::create}, {0, Kind::create}, {1, Kind::annihilate}})};
  for (const auto& p : probes) CHECK(std::abs(expectation(a, p) - expectation(b, p)) < 1e-7);
  CHECK((covariance_matrix(a, {0, 1, 2}) - covariance_matrix(b, {0, 1, 2})).norm() < 1e-7);
}

TEST_CASE("top level population and local phases") {
  const auto l = RegisterLayout::bosons(2, 2);
  Vec v = Vec::Zero(9);
  v(l.index({2, 0})) = std::sqrt(0.3);
  v(l.index({1, 1})) = std::sqrt(0.7);
  const auto s = QuantumState::pure(l, v);
  CHECK(top_level_population(s, 0) == doctest::Approx(0.3));
  CHECK(top_level_population(s, 1) == doctest::Approx(0.0));
  const auto p = apply_local_phases(s, {{0, 0.4}, {1, -1.1}});
  CHECK(std::abs(p.vector()(l.index({2, 0})) - std::polar(std::sqrt(0.3), 0.8)) < 1e-15);
  CHECK(std::abs(p.vector()(l.index({1, 1})) - std::polar(std::sqrt(0.7), 0.4 - 1.1)) < 1e-15);
}

TEST_CASE("entropy") {
  const auto q = RegisterLayout::qubits(1);
  CHECK(von_neumann_entropy(QuantumState::density(q, 0.5 * Mat::Identity(2, 2))) == doctest::Approx(std::log(2.0)));
  CHECK(von_neumann_entropy(fock_state(q, {0})) == doctest::Approx(0.0));
}

TEST_CASE("state JSON round trip") {
  RegisterLayout l;
  l.add_boson(2).add_qubit();
  std::mt19937_64 rng(3);
  const auto s = QuantumState::pure(l, random_low_vector(rng, l, 2));
  const auto back = state_from_json(state_to_json(s));
  CHECK(back.layout() == l);
  CHECK((back.vector() - s.vector()).norm() == 0.0);
  const auto d = QuantumState::density(l, s.vector() * s.vector().adjoint());
  CHECK((state_from_json(state_to_json(d)).matrix() - d.matrix()).norm() == 0.0);
}
