#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace cqed {

using cplx = std::complex<double>;

enum class Kind { create, annihilate, sigma_plus, sigma_minus, sigma_z, number };

struct Factor {
  std::size_t subsystem = 0;
  Kind kind = Kind::number;

  bool operator==(const Factor&) const = default;
};

// Product of single-subsystem factors, applied right to left like an operator string.
// drive_sign != 0 means the term stands for (coeff/2) exp(i drive_sign w_d t) times the product.
struct LadderMonomial {
  std::vector<Factor> factors;
  cplx coeff{1.0, 0.0};
  int drive_sign = 0;
};

bool is_ladder(Kind k);
bool is_pauli(Kind k);
Kind adjoint(Kind k);
// +1 raises the subsystem energy, -1 lowers it, 0 conserves it.
int energy_sign(Kind k);

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

LadderMonomial adjoint(const LadderMonomial& m);
bool same_operator(const LadderMonomial& a, const LadderMonomial& b);
std::string to_string(const LadderMonomial& m);

// Reorders factors acting on different subsystems (they commute) and merges equal operator strings.
std::vector<LadderMonomial> simplify(const std::vector<LadderMonomial>& terms, double drop_below = 0.0);

void to_json(nlohmann::json& j, const LadderMonomial& m);
void from_json(const nlohmann::json& j, LadderMonomial& m);

}  // namespace cqed
