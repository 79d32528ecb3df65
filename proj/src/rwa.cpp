#include "cqed/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cqed/errors.hpp"

namespace cqed {

KerrMode kerr_mode_from_name(const std::string& name) {
  if (name == "keep") return KerrMode::keep;
  if (name == "drop") return KerrMode::drop;
  if (name == "constant-shift") return KerrMode::constant_shift;
  throw std::invalid_argument("kerr must be keep, drop or constant-shift, got '" + name + "'");
}

std::string kerr_mode_name(KerrMode mode) {
  switch (mode) {
    case KerrMode::keep: return "keep";
    case KerrMode::drop: return "drop";
    case KerrMode::constant_shift: return "constant-shift";
  }
  return "?";
}

double interaction_frequency(const LadderMonomial& term, std::span<const double> frequencies, double drive) {
  double w = term.drive_sign * drive;
  for (const auto& f : term.factors) {
    if (f.subsystem >= frequencies.size())
      throw std::out_of_range("factor subsystem " + std::to_string(f.subsystem) + " has no frequency");
    w += energy_sign(f.kind) * frequencies[f.subsystem];
  }
  return w;
}

TermClassification classify_terms(const std::vector<LadderMonomial>& terms, std::span<const double> frequencies,
                                  double drive, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("tolerance must be non-negative");
  TermClassification out;
  for (const auto& t : terms) {
    const double w = interaction_frequency(t, frequencies, drive);
    if (std::abs(w) <= tolerance)
      out.resonant.push_back(t);
    else
      out.counter_rotating.emplace_back(t, w);
  }
  return out;
}

bool is_kerr_like(const LadderMonomial& term) {
  if (term.drive_sign != 0 || term.factors.size() < 4) return false;
  std::map<std::size_t, int> balance;
  for (const auto& f : term.factors) {
    if (!is_ladder(f.kind)) return false;
    balance[f.subsystem] += energy_sign(f.kind);
  }
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
}

cplx vacuum_expectation(const LadderMonomial& term) {
  // Track each mode's occupation while applying factors right to left.
  std::map<std::size_t, int> occ;
  double amp = 1.0;
  for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
    int& n = occ[it->subsystem];
    switch (it->kind) {
      case Kind::create: amp *= std::sqrt(n + 1.0); ++n; break;
      case Kind::annihilate:
        if (n == 0) return 0.0;
        amp *= std::sqrt(static_cast<double>(n));
        --n;
        break;
      case Kind::number: amp *= n; break;
      default: throw std::invalid_argument("vacuum expectation defined for bosonic factors only");
    }
    if (amp == 0.0) return 0.0;
  }
  for (const auto& [s, n] : occ)
    if (n != 0) return 0.0;
  return term.coeff * amp;
}

std::vector<LadderMonomial> rwa_reduce(const std::vector<LadderMonomial>& terms, std::span<const double> frequencies,
                                       double drive, double tolerance, KerrMode kerr) {
  auto cls = classify_terms(terms, frequencies, drive, tolerance);
  std::vector<LadderMonomial> kept;
  cplx shift = 0.0;
  bool any_kerr = false;
  for (auto t : cls.resonant) {
    if (kerr != KerrMode::keep && is_kerr_like(t)) {
      any_kerr = true;
      if (kerr == KerrMode::constant_shift) shift += vacuum_expectation(t);
      continue;
    }
    if (t.drive_sign != 0) {
      t.coeff *= 0.5;
      t.drive_sign = 0;
    }
    kept.push_back(std::move(t));
  }
  auto out = simplify(kept);
  if (kerr == KerrMode::constant_shift && any_kerr) out.push_back({{}, shift, 0});
  return out;
}

double default_tolerance(std::span<const double> frequencies) {
  if (frequencies.empty()) return 0.0;
  return 1e-6 * std::abs(*std::min_element(frequencies.begin(), frequencies.end(),
                                  [](double a, double b) { return std::abs(a) < std::abs(b); }));
}

void check_nondegenerate(std::span<const double> w, double rel_tol) {
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (i == j || !(std::abs(w[i]) <= std::abs(w[j])) || w[i] == 0.0) continue;
      const double ratio = w[j] / w[i];
      if (std::abs(ratio - std::round(ratio)) <= rel_tol * std::abs(ratio)) {
        std::ostringstream os;
        os << "degenerate spectrum: w" << j << "/w" << i << " = " << ratio
           << " is an integer; the RWA classification needs anharmonic modes";
        throw DegenerateSpectrumError(os.str());
      }
    }
}

}  // namespace cqed
