#include "cqed/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace cqed {

bool is_ladder(Kind k) {
  return k == Kind::create || k == Kind::annihilate || k == Kind::number;
}

bool is_pauli(Kind k) {
  return k == Kind::sigma_plus || k == Kind::sigma_minus || k == Kind::sigma_z;
}

Kind adjoint(Kind k) {
  switch (k) {
    case Kind::create: return Kind::annihilate;
    case Kind::annihilate: return Kind::create;
    case Kind::sigma_plus: return Kind::sigma_minus;
    case Kind::sigma_minus: return Kind::sigma_plus;
    default: return k;
  }
}

int energy_sign(Kind k) {
  switch (k) {
    case Kind::create:
    case Kind::sigma_plus: return 1;
    case Kind::annihilate:
    case Kind::sigma_minus: return -1;
    default: return 0;
  }
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::create: return "create";
    case Kind::annihilate: return "annihilate";
    case Kind::sigma_plus: return "pauli-plus";
    case Kind::sigma_minus: return "pauli-minus";
    case Kind::sigma_z: return "pauli-z";
    case Kind::number: return "number";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  static const std::map<std::string, Kind> table = {
      {"create", Kind::create},         {"annihilate", Kind::annihilate},
      {"pauli-plus", Kind::sigma_plus}, {"pauli-minus", Kind::sigma_minus},
      {"pauli-z", Kind::sigma_z},       {"number", Kind::number}};
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown factor kind '" + name + "'");
  return it->second;
}

LadderMonomial adjoint(const LadderMonomial& m) {
  LadderMonomial out;
  out.factors.reserve(m.factors.size());
  for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it)
    out.factors.push_back({it->subsystem, adjoint(it->kind)});
  out.coeff = std::conj(m.coeff);
  out.drive_sign = -m.drive_sign;
  return out;
}

bool same_operator(const LadderMonomial& a, const LadderMonomial& b) {
  return a.drive_sign == b.drive_sign && a.factors == b.factors;
}

std::string to_string(const LadderMonomial& m) {
  std::ostringstream os;
  os << "(" << m.coeff.real();
  if (m.coeff.imag() != 0.0) os << (m.coeff.imag() < 0 ? "" : "+") << m.coeff.imag() << "i";
  os << ")";
  for (const auto& f : m.factors) {
    switch (f.kind) {
      case Kind::create: os << " a" << f.subsystem << "+"; break;
      case Kind::annihilate: os << " a" << f.subsystem; break;
      case Kind::number: os << " N" << f.subsystem; break;
      case Kind::sigma_plus: os << " s+" << f.subsystem; break;
      case Kind::sigma_minus: os << " s-" << f.subsystem; break;
      case Kind::sigma_z: os << " sz" << f.subsystem; break;
    }
  }
  if (m.factors.empty()) os << " 1";
  if (m.drive_sign != 0) os << " e^{" << (m.drive_sign > 0 ? "+" : "-") << "iwt}";
  return os.str();
}

std::vector<LadderMonomial> simplify(const std::vector<LadderMonomial>& terms, double drop_below) {
  std::vector<LadderMonomial> out;
  std::map<std::pair<int, std::vector<std::pair<std::size_t, int>>>, std::size_t> seen;
  for (const auto& t : terms) {
    LadderMonomial c = t;
    std::stable_sort(c.factors.begin(), c.factors.end(),
                     [](const Factor& a, const Factor& b) { return a.subsystem < b.subsystem; });
    std::vector<std::pair<std::size_t, int>> key;
    for (const auto& f : c.factors) key.emplace_back(f.subsystem, static_cast<int>(f.kind));
    auto [it, fresh] = seen.try_emplace({c.drive_sign, key}, out.size());
    if (fresh)
      out.push_back(std::move(c));
    else
      out[it->second].coeff += c.coeff;
  }
  std::erase_if(out, [&](const LadderMonomial& m) { return std::abs(m.coeff) <= drop_below; });
  return out;
}

void to_json(nlohmann::json& j, const LadderMonomial& m) {
  auto fs = nlohmann::json::array();
  for (const auto& f : m.factors) fs.push_back({f.subsystem, kind_name(f.kind)});
  j = {{"factors", fs}, {"coeff", {m.coeff.real(), m.coeff.imag()}}, {"drive_sign", m.drive_sign}};
}

void from_json(const nlohmann::json& j, LadderMonomial& m) {
  m.factors.clear();
  for (const auto& f : j.at("factors"))
    m.factors.push_back({f.at(0).get<std::size_t>(), kind_from_name(f.at(1).get<std::string>())});
  const auto& c = j.at("coeff");
  m.coeff = {c.at(0).get<double>(), c.at(1).get<double>()};
  m.drive_sign = j.value("drive_sign", 0);
  if (m.drive_sign < -1 || m.drive_sign > 1) throw std::invalid_argument("drive_sign must be -1, 0 or 1");
  if (!std::isfinite(m.coeff.real()) || !std::isfinite(m.coeff.imag()))
    throw std::invalid_argument("coefficient must be finite");
}

}  // namespace cqed
