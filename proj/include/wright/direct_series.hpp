#pragma once

#include <string>
#include <vector>

#include "wright/params.hpp"

namespace wright {

struct EvalReport {
  HPComplex value;
  long terms_used = 0;
  HPReal peak_term_magnitude;
  int working_precision = 0;
  HPReal est_truncation_error;
  // Only filled by the asymptotic evaluator.
  std::string plan;
  std::vector<std::string> flags;
};

// g(n) = prod Gamma(alpha n + a) / prod Gamma(beta n + b); 0 when a lower
// gamma sits at a pole.
HPReal eval_g(const WrightParams& params, long n, int digits = default_digits());

// Working precision used for a given target: headroom for the cancellation
// of terms of size |e^Z| plus the target itself.
int direct_series_digits(const WrightParams& params, const HPReal& r, int target_digits);

EvalReport wright_eval(const WrightParams& params, const RayPoint& z, int target_digits);

}  // namespace wright
