#include "wright/direct_series.hpp"

#include <cmath>

namespace wright {

namespace {

constexpr long kMaxTerms = 1000000;
constexpr int kSmallRun = 30;

void require_positive_kappa(const WrightParams& params) {
  Scalar k = kappa_of(params);
  if (k.sign() <= 0) throw KappaNonPositive("kappa = " + k.str() + " must be positive for evaluation");
}

// |Z| = kappa (h r)^{1/kappa} in double; the result may be huge but stays finite for any sane input.
double z_modulus(const WrightParams& params, const HPReal& r) {
  DerivedConstants dc = derive_constants(params, 30);
  HPReal Z = dc.kappa * pow(dc.h * r.with_digits(30), HPReal(1L, 30) / dc.kappa);
  return to_double(Z);
}

mpfr_exp_t mag_exp(const HPComplex& z) {
  mpfr_exp_t e = mpfr_get_emin() - 1;
  if (!z.re.is_zero()) e = std::max(e, mpfr_get_exp(z.re.get()));
  if (!z.im.is_zero()) e = std::max(e, mpfr_get_exp(z.im.get()));
  return e;
}

struct SeriesRun {
  HPComplex value;
  long terms = 0;
  HPReal peak;
  HPReal last;
};

SeriesRun sum_series(const WrightParams& params, const RayPoint& z, int target_digits, int wp, long n_peak) {
  std::vector<GammaSequence> ups, lows;
  for (const auto& g : params.upper) ups.emplace_back(g.shift, g.scale, false, wp);
  for (const auto& g : params.lower) lows.emplace_back(g.shift, g.scale, true, wp);

  HPComplex zc = z.with_digits(wp).to_complex();
  HPComplex w(HPReal(1L, wp), HPReal(0L, wp));
  HPComplex sum(HPReal(0L, wp), HPReal(0L, wp));
  HPReal peak(0L, wp);
  mpfr_exp_t peak_exp = mpfr_get_emin() - 1;
  const mpfr_exp_t small_gap = static_cast<mpfr_exp_t>(digits_to_bits(target_digits + 10));
  int small = 0;
  HPComplex term;
  long n = 0;
  for (; n < kMaxTerms; ++n) {
    HPReal g(1L, wp);
    for (auto& s : ups) g *= s.next();
    for (auto& s : lows) g *= s.next();
    if (n > 0) {
      w *= zc;
      w.re /= n;
      w.im /= n;
    }
    term = w * g;
    sum += term;
    mpfr_exp_t te = mag_exp(term);
    if (te >= peak_exp) {
      peak_exp = te;
      peak = max(peak, abs(term));
    }
    bool tiny = !sum.is_zero() && (term.is_zero() || te < mag_exp(sum) - small_gap);
    small = (n > n_peak && tiny) ? small + 1 : 0;
    if (small >= kSmallRun) break;
  }
  if (n >= kMaxTerms) throw NoConvergence("direct series did not settle within 10^6 terms");
  return {sum, n + 1, peak, abs(term)};
}

}  // namespace

HPReal eval_g(const WrightParams& params, long n, int digits) {
  if (n < 0) throw InvalidParams("eval_g needs n >= 0");
  int w = digits + 5;
  HPReal g(1L, w);
  for (const auto& u : params.upper) g *= hp_gamma(u.scale * Scalar(n) + u.shift, w);
  for (const auto& l : params.lower) g *= hp_recip_gamma(l.scale * Scalar(n) + l.shift, w);
  return g.with_digits(digits);
}

int direct_series_digits(const WrightParams& params, const HPReal& r, int target_digits) {
  double Z = z_modulus(params, r);
  double kap = to_double(kappa_of(params).real(30));
  double n_peak = Z / kap;
  int wp = std::max(50, static_cast<int>(std::ceil(0.4343 * Z)) + target_digits + 20);
  return wp + static_cast<int>(std::ceil(std::log10(3 * n_peak + 10))) + 5;
}

EvalReport wright_eval(const WrightParams& params, const RayPoint& z, int target_digits) {
  if (target_digits < 10) throw InvalidParams("target_digits must be at least 10");
  params.validate();
  require_positive_kappa(params);
  double kap = to_double(kappa_of(params).real(30));
  long n_peak = static_cast<long>(std::ceil(z_modulus(params, z.r) / kap));
  int wp = direct_series_digits(params, z.r, target_digits);

  for (int attempt = 0; attempt < 4; ++attempt) {
    SeriesRun run = sum_series(params, z, target_digits, wp, n_peak);
    HPReal rounding = run.peak * pow10(-wp, wp) * (run.terms + 1);
    HPReal est = run.last * 2 + rounding;
    HPReal mag = abs(run.value);
    HPReal allowed = mag * pow10(-target_digits, wp);
    if (est <= allowed || mag.is_zero()) {
      EvalReport rep;
      rep.value = run.value;
      rep.terms_used = run.terms;
      rep.peak_term_magnitude = run.peak;
      rep.working_precision = wp;
      rep.est_truncation_error = est;
      return rep;
    }
    double deficit = log10_abs(est) - log10_abs(allowed);
    wp += static_cast<int>(std::ceil(deficit)) + 10;
  }
  throw PrecisionExhausted("direct series could not reach " + std::to_string(target_digits) + " digits");
}

}  // namespace wright
