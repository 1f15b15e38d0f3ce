#include "wright/params.hpp"

#include <cmath>
#include <sstream>

namespace wright {

bool WrightParams::exact() const {
  for (const auto& g : upper)
    if (!g.scale.exact() || !g.shift.exact()) return false;
  for (const auto& g : lower)
    if (!g.scale.exact() || !g.shift.exact()) return false;
  return true;
}

std::string WrightParams::key() const {
  std::ostringstream os;
  os << "up";
  for (const auto& g : upper) os << ' ' << g.scale.str() << ',' << g.shift.str();
  os << " lo";
  for (const auto& g : lower) os << ' ' << g.scale.str() << ',' << g.shift.str();
  return os.str();
}

namespace {

// Is alpha n + a = -m for some integers n, m >= 0?
bool hits_pole(const GammaPair& g) {
  if (g.shift.sign() > 0) return false;
  if (g.scale.exact() && g.shift.exact()) {
    const BigRational& al = g.scale.rational();
    const BigRational& a = g.shift.rational();
    // alpha n + a mod 1 repeats with period den(alpha).
    BigRational limit = -a / al;
    mpz_class period = al.get_den();
    for (mpz_class n = 0; n < period && BigRational(n) <= limit; ++n)
      if (is_integer(BigRational(al * n + a))) return true;
    return false;
  }
  int d = default_digits();
  HPReal al = g.scale.real(d), a = g.shift.real(d);
  HPReal tol = pow10(-(d - 5), d);
  double limit = to_double(-a / al);
  long nmax = static_cast<long>(std::min(limit, 1e5));
  for (long n = 0; n <= nmax; ++n) {
    HPReal v = al * n + a;
    HPReal r = floor(v + HPReal(BigRational(1, 2), d));
    if (abs(v - r) < tol) return true;
  }
  return false;
}

}  // namespace

void WrightParams::validate() const {
  for (const auto& g : upper)
    if (g.scale.sign() <= 0) throw InvalidParams("upper scale alpha must be real and positive, got " + g.scale.str());
  for (const auto& g : lower)
    if (g.scale.sign() <= 0) throw InvalidParams("lower scale beta must be real and positive, got " + g.scale.str());
  for (const auto& g : upper)
    if (hits_pole(g))
      throw InvalidParams("restriction alpha*n + a != 0,-1,-2,... violated by (alpha, a) = (" + g.scale.str() + ", " +
                          g.shift.str() + ")");
}

WrightParams WrightParams::mittag_leffler(const Scalar& a, const Scalar& b) {
  return {{{Scalar(1), Scalar(1)}}, {{a, b}}};
}

WrightParams WrightParams::f1(const Scalar& a, const Scalar& b) {
  return {{{Scalar(BigRational(1, 2)), a}}, {{Scalar(1), b}}};
}

WrightParams WrightParams::f2(const Scalar& a, const Scalar& b) {
  return {{{Scalar(BigRational(2, 3)), a}}, {{Scalar(BigRational(1, 3)), b}}};
}

WrightParams WrightParams::f3(const Scalar& c, const Scalar& a, const Scalar& b) { return {{}, {{c, a}, {c, b}}}; }

Scalar kappa_of(const WrightParams& params) {
  Scalar k(1);
  for (const auto& g : params.lower) k = k + g.scale;
  for (const auto& g : params.upper) k = k - g.scale;
  return k;
}

Scalar theta_of(const WrightParams& params) {
  Scalar t = Scalar(BigRational(params.q() - params.p(), 2));
  for (const auto& g : params.upper) t = t + g.shift;
  for (const auto& g : params.lower) t = t - g.shift;
  return t;
}

DerivedConstants derive_constants(const WrightParams& params, int digits) {
  DerivedConstants dc;
  dc.kappa_exact = kappa_of(params);
  dc.theta_exact = theta_of(params);
  if (dc.kappa_exact.sign() < 0) throw KappaNonPositive("kappa = " + dc.kappa_exact.str() + " < 0");
  int w = digits + 10;
  dc.kappa = dc.kappa_exact.real(w);
  dc.theta_big = dc.theta_exact.real(w);
  dc.theta_prime = HPReal(1L, w) - dc.theta_big;
  dc.kappa_zero = dc.kappa_exact.is_zero();
  HPReal nan(0L, w);
  mpfr_set_nan(nan.get());
  if (dc.kappa_zero) {
    dc.h = nan;
    dc.A0 = nan;
  } else {
    HPReal h(1L, w);
    HPReal half(BigRational(1, 2), w);
    HPReal A0 = pow(pi(w) * 2, HPReal(BigRational(params.p() - params.q(), 2), w));
    A0 *= pow(dc.kappa, -half - dc.theta_big);
    for (const auto& g : params.upper) {
      HPReal al = g.scale.real(w);
      h *= pow(al, al);
      A0 *= pow(al, g.shift.real(w) - half);
    }
    for (const auto& g : params.lower) {
      HPReal be = g.scale.real(w);
      h /= pow(be, be);
      A0 *= pow(be, half - g.shift.real(w));
    }
    dc.h = h;
    dc.A0 = A0;
  }
  dc.kappa = dc.kappa.with_digits(digits);
  dc.h = dc.h.with_digits(digits);
  dc.theta_big = dc.theta_big.with_digits(digits);
  dc.theta_prime = dc.theta_prime.with_digits(digits);
  dc.A0 = dc.A0.with_digits(digits);
  return dc;
}

}  // namespace wright
