#include <doctest.h>

#include <cmath>
#include <random>

#include "cqed/witnesses.hpp"

using namespace cqed;

namespace {

QuantumState eps_state(double eps, std::size_t cutoff = 2) {
  const auto l = RegisterLayout::bosons(3, cutoff);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(l.total_dim()));
  v(l.index({0, 0, 0})) = 1.0;
  v(l.index({1, 1, 1})) = eps;
  return QuantumState::pure(l, v / v.norm());
}

QuantumState random_pure(std::mt19937_64& rng, const RegisterLayout& l) {
  std::normal_distribution<double> n;
  Vec v(static_cast<Eigen::Index>(l.total_dim()));
  for (auto& x : v) x = cplx(n(rng), n(rng));
  return QuantumState::pure(l, v / v.norm());
}

QuantumState product_state(std::mt19937_64& rng, std::size_t levels) {
  std::normal_distribution<double> n;
  Vec v = Vec::Ones(1);
  for (int m = 0; m < 3; ++m) {
    Vec local = Vec::Zero(static_cast<Eigen::Index>(levels + 2));
    for (std::size_t k = 0; k <= levels; ++k) local(static_cast<Eigen::Index>(k)) = cplx(n(rng), n(rng));
    local.normalize();
    Vec next(v.size() * local.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * local.size(), local.size()) = v(i) * local;
    v = next;
  }
  return QuantumState::pure(RegisterLayout::bosons(3, levels + 1), v);
}

}  // namespace

TEST_CASE("vacuum VLF value") {
  const auto vac = fock_state(RegisterLayout::bosons(3, 3), {0, 0, 0});
  const auto r = vlf_S(vac, {{1, 1, 1}, {1, 1, 1}});
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.detects == (r.value > 0.0));
  CHECK(r.components.at("var_x1") == doctest::Approx(0.5));
  CHECK(optimize_vlf(vac, {.restarts = 20}).value <= 1e-9);
}

TEST_CASE("vlf_value on hand covariances") {
  const Eigen::MatrixXd vac = 0.5 * Eigen::MatrixXd::Identity(6, 6);
  CHECK(vlf_value(vac, {{1, 1, 1}, {1, 1, 1}}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vlf_value(vac, {{1, 0, 0}, {0, 1, 1}}) == doctest::Approx(-1.5));
  Eigen::MatrixXd sq = vac;
  sq(0, 0) = 0.3;
  sq(3, 3) = 0.5 / 0.6;
  CHECK(vlf_value(sq, {{1, 1, 1}, {1, 1, 1}}) < 0.0);
  CHECK_THROWS(vlf_value(Eigen::MatrixXd::Identity(4, 4), {}));
}

TEST_CASE("inseparability and genuine criteria on Fock states") {
  const auto vac = fock_state(RegisterLayout::bosons(3, 3), {0, 0, 0});
  const auto one = fock_state(RegisterLayout::bosons(3, 3), {1, 1, 1});
  CHECK(hz_inseparability(one, 0).value == doctest::Approx(-1.0));
  CHECK(hz_inseparability(vac, 2).value == doctest::Approx(0.0));
  CHECK(genuine_g1(vac).value == doctest::Approx(-3.0));
  CHECK(genuine_g1(one).value == doctest::Approx(-6.0 * std::sqrt(2.0)));
  CHECK(genuine_g2(vac).value == doctest::Approx(0.0));
  CHECK_FALSE(genuine_g2(vac).detects);
  CHECK_THROWS(hz_inseparability(vac, 3));
}

TEST_CASE("G2 on |000> + eps |111>") {
  for (double eps : {0.01, 0.1, 0.5, 0.9}) {
    const auto s = eps_state(eps);
    const double expect = eps * (1 - eps) / (1 + eps * eps);
    CHECK(genuine_g2(s).value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(genuine_g2(s).detects);
    for (std::size_t a = 0; a < 3; ++a) CHECK(hz_inseparability(s, a).value == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_FALSE(genuine_g2(eps_state(1.0)).detects);
}

TEST_CASE("G2 is at least G1 and both ignore local phases") {
  std::mt19937_64 rng(7);
  const auto l = RegisterLayout::bosons(3, 3);
  for (int i = 0; i < 25; ++i) {
    const auto s = random_pure(rng, l);
    const double g1 = genuine_g1(s).value, g2 = genuine_g2(s).value;
    CHECK(g2 >= g1);
    const auto r = apply_local_phases(s, {{0, 0.3 * i}, {1, -1.1}, {2, 2.0 + i}});
    CHECK(genuine_g1(r).value == doctest::Approx(g1).epsilon(1e-10));
    CHECK(genuine_g2(r).value == doctest::Approx(g2).epsilon(1e-10));
    CHECK(hz_inseparability(r, 1).value == doctest::Approx(hz_inseparability(s, 1).value).epsilon(1e-10));
  }
}

TEST_CASE("criteria stay silent on product states") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto s = product_state(rng, 2);
    CHECK(genuine_g1(s).value <= 1e-12);
    CHECK(genuine_g2(s).value <= 1e-12);
    for (std::size_t a = 0; a < 3; ++a) CHECK(hz_inseparability(s, a).value <= 1e-12);
    CHECK(optimize_vlf(s, {.restarts = 5, .seed = static_cast<std::uint64_t>(i)}).value <= 1e-9);
  }
}

TEST_CASE("VLF search is deterministic in the seed") {
  const auto s = eps_state(0.3, 3);
  const auto a = optimize_vlf(s, {.restarts = 8, .seed = 11});
  const auto b = optimize_vlf(s, {.restarts = 8, .seed = 11});
  CHECK(a.value == b.value);
  REQUIRE(a.params);
  CHECK(a.params->g == b.params->g);
  CHECK(a.params->h == b.params->h);
  CHECK(vlf_S(s, *a.params).value == doctest::Approx(a.value).epsilon(1e-12));
}

TEST_CASE("DV criterion on qubit states") {
  const auto q = RegisterLayout::qubits(3);
  const auto g = dv_genuine(ghz(q));
  CHECK(g.components.at("|<s-s-s->|") == doctest::Approx(0.5));
  CHECK(g.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dv_genuine(w_state(q)).components.at("|<s-s-s->|") == doctest::Approx(0.0));
  CHECK(dv_genuine(w_state(q)).value == doctest::Approx(0.0));
  CHECK(dv_genuine(fock_state(q, {0, 0, 0})).value == doctest::Approx(0.0));
  CHECK(dv_genuine(fock_state(q, {1, 1, 1})).value == doctest::Approx(-1.0));
  CHECK(dv_genuine(fock_state(q, {0, 0, 0}), MomentOrder::antinormal).value == doctest::Approx(-1.0));
  CHECK(dv_genuine(fock_state(q, {1, 1, 1}), MomentOrder::normal, Aggregate::sum).value == doctest::Approx(-3.0));
  CHECK_THROWS(dv_genuine(fock_state(RegisterLayout::bosons(3, 1), {0, 0, 0})));
}

TEST_CASE("DV detects a GHZ-like state with unequal weights") {
  const auto q = RegisterLayout::qubits(3);
  Vec v = Vec::Zero(8);
  v(0) = 1.0;
  v(7) = 0.4;
  const auto s = QuantumState::pure(q, v / v.norm());
  const double expect = (0.4 - 0.16) / 1.16;
  CHECK(dv_genuine(s).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(dv_genuine(s).detects);
}

TEST_CASE("negativity") {
  const auto q2 = RegisterLayout::qubits(2);
  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto b = QuantumState::pure(q2, bell);
  CHECK(ppt_negativity(b, {0}) == doctest::Approx(0.5));
  CHECK(pure_state_negativity(b, {1}) == doctest::Approx(0.5));
  CHECK(ppt_negativity(fock_state(q2, {1, 0}), {0}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS(ppt_negativity(b, {0, 1}));
  CHECK_THROWS(ppt_negativity(b, {}));

  std::mt19937_64 rng(5);
  RegisterLayout l = RegisterLayout::bosons(2, 2);
  l.add_qubit();
  for (int i = 0; i < 5; ++i) {
    const auto s = random_pure(rng, l);
    for (std::vector<std::size_t> a : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}})
      CHECK(ppt_negativity(QuantumState::density(l, s.density_matrix()), a) ==
            doctest::Approx(pure_state_negativity(s, a)).epsilon(1e-9));
  }
}

TEST_CASE("report json") {
  const auto j = report_to_json(genuine_g2(eps_state(0.2)));
  CHECK(j.at("name") == "G2");
  CHECK(j.at("detects") == true);
  CHECK(j.at("components").contains("<N1>"));
}
