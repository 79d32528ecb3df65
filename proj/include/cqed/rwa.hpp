#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cqed/ladder.hpp"

namespace cqed {

struct TermClassification {
  std::vector<LadderMonomial> resonant;
  std::vector<std::pair<LadderMonomial, double>> counter_rotating;
};

enum class KerrMode { keep, drop, constant_shift };

KerrMode kerr_mode_from_name(const std::string& name);
std::string kerr_mode_name(KerrMode mode);

double interaction_frequency(const LadderMonomial& term, std::span<const double> frequencies, double drive);

TermClassification classify_terms(const std::vector<LadderMonomial>& terms, std::span<const double> frequencies,
                                  double drive, double tolerance);

// Undriven, bosonic, at least quartic and number conserving on every mode.
bool is_kerr_like(const LadderMonomial& term);

// Vacuum expectation of a bosonic monomial (ladder factors only).
cplx vacuum_expectation(const LadderMonomial& term);

std::vector<LadderMonomial> rwa_reduce(const std::vector<LadderMonomial>& terms, std::span<const double> frequencies,
                                       double drive, double tolerance, KerrMode kerr = KerrMode::drop);

double default_tolerance(std::span<const double> frequencies);

// Throws DegenerateSpectrumError if any two frequencies are in an integer ratio.
void check_nondegenerate(std::span<const double> boson_frequencies, double rel_tol = 1e-6);

}  // namespace cqed
