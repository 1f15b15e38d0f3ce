#pragma once

#include <stdexcept>
#include <string>

namespace wright {

struct WrightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleError : WrightError {
  using WrightError::WrightError;
};

// Parameter lists that violate a documented invariant.
struct InvalidParams : WrightError {
  using WrightError::WrightError;
};

struct KappaNonPositive : WrightError {
  using WrightError::WrightError;
};

struct NoConvergence : WrightError {
  using WrightError::WrightError;
};

struct HigherOrderPole : WrightError {
  using WrightError::WrightError;
};

struct PrecisionExhausted : WrightError {
  using WrightError::WrightError;
};

struct OutOfRegime : WrightError {
  using WrightError::WrightError;
};

struct UnsupportedSigma : WrightError {
  using WrightError::WrightError;
};

}  // namespace wright
