#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularBiasError : NumericError {
  using NumericError::NumericError;
};

struct DegenerateSpectrumError : NumericError {
  using NumericError::NumericError;
};

struct PumpMismatchError : NumericError {
  using NumericError::NumericError;
};

struct StepSizeError : NumericError {
  double time;
  StepSizeError(const std::string& msg, double t) : NumericError(msg), time(t) {}
};

struct DimensionError : NumericError {
  using NumericError::NumericError;
};

}  // namespace cqed
