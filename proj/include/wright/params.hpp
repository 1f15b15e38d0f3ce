#pragma once

#include <string>
#include <vector>

#include "wright/numerics.hpp"

namespace wright {

// One gamma factor Gamma(scale * n + shift).
struct GammaPair {
  Scalar scale;
  Scalar shift;
};

struct WrightParams {
  std::vector<GammaPair> upper;  // (alpha_r, a_r)
  std::vector<GammaPair> lower;  // (beta_r, b_r)

  int p() const { return static_cast<int>(upper.size()); }
  int q() const { return static_cast<int>(lower.size()); }
  bool exact() const;
  std::string key() const;

  // Throws InvalidParams naming the violated condition.
  void validate() const;

  // E_{a,b}(z) = sum z^n / Gamma(a n + b), as 1Psi1 with Gamma(1+n)/Gamma(a n + b).
  static WrightParams mittag_leffler(const Scalar& a, const Scalar& b);
  // sum Gamma(n/2 + a) / Gamma(n + b) z^n / n!
  static WrightParams f1(const Scalar& a, const Scalar& b);
  // sum Gamma(2n/3 + a) / Gamma(n/3 + b) z^n / n!
  static WrightParams f2(const Scalar& a, const Scalar& b);
  // sum z^n / (Gamma(c n + a) Gamma(c n + b) n!)
  static WrightParams f3(const Scalar& c, const Scalar& a, const Scalar& b);
};

struct DerivedConstants {
  HPReal kappa;
  HPReal h;
  HPReal theta_big;
  HPReal theta_prime;
  HPReal A0;
  // Exact twins of kappa and theta, real-valued when the parameters are not rational.
  Scalar kappa_exact;
  Scalar theta_exact;
  bool kappa_zero = false;
};

// kappa = 1 + sum beta - sum alpha, theta = sum a - sum b + (q - p)/2.
Scalar kappa_of(const WrightParams& params);
Scalar theta_of(const WrightParams& params);

// Throws KappaNonPositive for kappa < 0; kappa == 0 is returned flagged
// with A0 and h left as NaN.
DerivedConstants derive_constants(const WrightParams& params, int digits = default_digits());

}  // namespace wright
