#include "wright/expansions.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace wright {

namespace {

constexpr double kDipRatio = 1.0;      // log10 of the factor a dip must sit below both neighbours
constexpr double kGrowthStop = 6.0;    // stop once terms are 10^6 above the best candidate
constexpr long kGrowthRun = 8;
constexpr long kZeroTail = 130;        // more than twice the maximal lane period

double log10_mag(const HPComplex& t) {
  double lr = log10_abs(t.re), li = log10_abs(t.im);
  double hi = std::max(lr, li), lo = std::min(lr, li);
  if (std::isinf(hi) && hi < 0) return hi;
  return hi + 0.5 * std::log10(1.0 + std::pow(10.0, 2 * (lo - hi)));
}

HPReal from_log10(double m, int digits) {
  if (std::isinf(m) && m < 0) return HPReal(0L, digits);
  HPReal x = HPReal::from_double(m, digits);
  return exp(x * log(HPReal(10L, digits)));
}

HPComplex czero(int digits) { return {HPReal(0L, digits), HPReal(0L, digits)}; }

using TermSource = std::function<HPComplex(long)>;

std::pair<HPComplex, ExpansionTermLog> run_series(const TermSource& next, const TruncationSpec& trunc, long limit,
                                                  int digits) {
  ExpansionTermLog log;
  if (trunc.mode == TruncationSpec::Mode::Fixed) {
    HPComplex sum = czero(digits);
    double peak = -std::numeric_limits<double>::infinity();
    double last = peak;
    for (long j = 0; j < limit; ++j) {
      HPComplex t = next(j);
      double m = log10_mag(t);
      log.log10_magnitudes.push_back(m);
      peak = std::max(peak, m);
      last = m;
      sum += t;
    }
    log.terms_used = static_cast<int>(limit);
    log.smallest_term = from_log10(last, 20);
    log.peak_term = from_log10(peak, 20);
    return {sum.with_digits(digits), log};
  }
  OptimalTruncator opt(static_cast<int>(std::min<long>(limit, std::numeric_limits<int>::max())), digits);
  for (long j = 0; j < limit; ++j)
    if (!opt.push(next(j))) break;
  TruncationResult res = opt.finish();
  log.log10_magnitudes = opt.log10_magnitudes();
  log.terms_used = res.index;
  log.smallest_term = res.smallest_term;
  log.no_minimum_found = res.no_minimum_found;
  double peak = -std::numeric_limits<double>::infinity();
  for (double m : log.log10_magnitudes) peak = std::max(peak, m);
  log.peak_term = from_log10(peak, 20);
  const auto& mags = log.log10_magnitudes;
  log.divergent_from_start = res.index == 1 && mags.size() > 1 && mags[1] > mags[0];
  return {res.partial_sum.with_digits(digits), log};
}

void merge_log(ExpansionTermLog& into, const ExpansionTermLog& part) {
  into.log10_magnitudes.insert(into.log10_magnitudes.end(), part.log10_magnitudes.begin(),
                               part.log10_magnitudes.end());
  into.terms_used += part.terms_used;
  into.smallest_term = into.smallest_term + part.smallest_term;
  into.peak_term = max(into.peak_term, part.peak_term);
  into.no_minimum_found = into.no_minimum_found || part.no_minimum_found;
  into.divergent_from_start = into.divergent_from_start || part.divergent_from_start;
}

ExpansionTermLog empty_log() {
  ExpansionTermLog log;
  log.smallest_term = HPReal(0L, 20);
  log.peak_term = HPReal(0L, 20);
  return log;
}

int coefficient_limit(const CoefficientSet& coeffs, const TruncationSpec& trunc) {
  if (trunc.count < (trunc.mode == TruncationSpec::Mode::Fixed ? 0 : 1))
    throw InvalidParams("truncation count out of range");
  int want = trunc.max_terms();
  if (trunc.mode == TruncationSpec::Mode::Fixed && want > coeffs.size())
    throw InvalidParams("fixed truncation J=" + std::to_string(trunc.count) + " needs more coefficients than supplied");
  return std::min(want, coeffs.size());
}

// Exponential-type sum P * sum_j c_j (sign Z)^{-j}.
std::pair<HPComplex, ExpansionTermLog> exponential_sum(const CoefficientSet& coeffs, const HPComplex& pref,
                                                       const HPComplex& zinv, const TruncationSpec& trunc,
                                                       int w, int digits) {
  long limit = coefficient_limit(coeffs, trunc);
  HPComplex power = pref;
  TermSource next = [&](long j) {
    if (j > 0) power *= zinv;
    if (coeffs.is_zero(static_cast<int>(j))) return czero(w);
    return power * coeffs.coefficient(static_cast<int>(j), w);
  };
  return run_series(next, trunc, limit, digits);
}

std::string check_coeffs(const WrightParams& params, const CoefficientSet& coeffs) {
  if (coeffs.params_hash != params.key()) throw InvalidParams("coefficient set was built for other parameters");
  return {};
}

}  // namespace

std::string TruncationSpec::str() const {
  return (mode == Mode::Fixed ? "fixed(" : "optimal(") + std::to_string(count) + ")";
}

void SectorConfig::validate() const {
  if (!(epsilon.sign() > 0) || !(epsilon < pi(epsilon.digits()) / 8))
    throw InvalidParams("sector epsilon must lie in (0, pi/8)");
}

// ------------------------------------------------------ optimal truncation

OptimalTruncator::OptimalTruncator(int cap, int digits)
    : cap_(cap), sum_(czero(digits)), prev_sum_(czero(digits)), best_sum_(czero(digits)),
      last_nonzero_sum_(czero(digits)) {
  if (cap < 1) throw InvalidParams("optimal truncation cap must be at least 1");
}

void OptimalTruncator::consider(long j) {
  if (j < 0) return;
  double m = mags_[j];
  bool zero = std::isinf(m) && m < 0;
  if (zero) return;
  long n = static_cast<long>(mags_.size());
  bool dip = j >= 1 && j + 1 < n && m < std::min(mags_[j - 1], mags_[j + 1]) - kDipRatio;
  if (dip) return;
  if (best_ < 0 || m < best_mag_) {
    best_ = j;
    best_mag_ = m;
    best_sum_ = (j == n - 1) ? sum_ : prev_sum_;
  }
}

bool OptimalTruncator::push(const HPComplex& term) {
  long n = static_cast<long>(mags_.size());
  double m = log10_mag(term);
  mags_.push_back(m);
  prev_sum_ = sum_;
  sum_ += term;
  consider(n - 1);
  if (std::isinf(m) && m < 0) {
    ++zero_run_;
  } else {
    zero_run_ = 0;
    last_nonzero_ = n;
  }
  if (n + 1 >= cap_) return false;
  if (zero_run_ >= kZeroTail) return false;
  if (best_ >= 0 && n - best_ >= kGrowthRun && m > best_mag_ + kGrowthStop) return false;
  return true;
}

TruncationResult OptimalTruncator::finish() {
  long last = static_cast<long>(mags_.size()) - 1;
  TruncationResult res;
  if (last < 0) {
    res.partial_sum = sum_;
    res.smallest_term = HPReal(0L, 20);
    return res;
  }
  // The final term has no right neighbour; it competes unless zero.
  prev_sum_ = sum_;
  consider(last);
  if (last_nonzero_ < last) {
    res.partial_sum = sum_;
    res.index = static_cast<int>(last_nonzero_ + 1);
    res.smallest_term = HPReal(0L, 20);
    return res;
  }
  res.partial_sum = best_sum_;
  res.index = static_cast<int>(best_ + 1);
  res.smallest_term = from_log10(best_mag_, 20);
  res.no_minimum_found = best_ == last;
  return res;
}

TruncationResult optimal_truncate(const std::vector<HPComplex>& terms, int cap) {
  int digits = terms.empty() ? default_digits() : terms.front().digits();
  OptimalTruncator opt(cap, digits);
  for (size_t j = 0; j < terms.size() && static_cast<int>(j) < cap; ++j)
    if (!opt.push(terms[j])) break;
  return opt.finish();
}

// -------------------------------------------------------------- E series

std::pair<HPComplex, ExpansionTermLog> exp_expansion_E(const WrightParams& params, const CoefficientSet& coeffs,
                                                       const RayPoint& z, const TruncationSpec& trunc) {
  check_coeffs(params, coeffs);
  int digits = z.digits();
  int w = digits + 10;
  DerivedConstants dc = derive_constants(params, w);
  if (dc.kappa.sign() <= 0) throw KappaNonPositive("kappa must be positive");
  HPReal one(1L, w);
  HPReal Zmod = dc.kappa * pow(dc.h * z.r.with_digits(w), one / dc.kappa);
  HPReal Zarg = z.theta.with_digits(w) / dc.kappa;
  HPReal ReZ = Zmod * cos(Zarg);
  HPReal ImZ = Zmod * sin(Zarg);
  HPComplex pref = polar(dc.A0 * pow(Zmod, dc.theta_big) * exp(ReZ), dc.theta_big * Zarg + ImZ);
  HPComplex zinv = polar(one / Zmod, -Zarg);
  return exponential_sum(coeffs, pref, zinv, trunc, w, digits);
}

// -------------------------------------------------------------- H series

namespace {

void check_simple_poles(const WrightParams& params, long depth) {
  int p = params.p();
  for (int m = 0; m < p; ++m) {
    for (int r = 0; r < p; ++r) {
      if (r == m) continue;
      const GammaPair& gm = params.upper[m];
      const GammaPair& gr = params.upper[r];
      // s = (a_m + k)/alpha_m = (a_r + k')/alpha_r  <=>  k' = alpha_r (a_m + k)/alpha_m - a_r
      if (gm.scale.exact() && gm.shift.exact() && gr.scale.exact() && gr.shift.exact()) {
        BigRational ratio = gr.scale.rational() / gm.scale.rational();
        for (long k = 0; k < depth; ++k) {
          BigRational kp = ratio * (gm.shift.rational() + k) - gr.shift.rational();
          if (is_integer(kp) && kp >= 0 && kp < depth) {
            std::ostringstream os;
            os << "pole sequences collide: (m=" << m + 1 << ", k=" << k << ") and (r=" << r + 1
               << ", k'=" << kp.get_str() << "); the simple-pole algebraic expansion does not apply";
            throw HigherOrderPole(os.str());
          }
        }
      } else {
        int d = default_digits();
        HPReal ratio = gr.scale.real(d) / gm.scale.real(d);
        HPReal tol = pow10(-(d - 5), d);
        for (long k = 0; k < depth; ++k) {
          HPReal kp = ratio * (gm.shift.real(d) + k) - gr.shift.real(d);
          HPReal near = floor(kp + HPReal(BigRational(1, 2), d));
          if (abs(kp - near) < tol && near.sign() >= 0 && to_double(near) < depth) {
            std::ostringstream os;
            os << "pole sequences collide: (m=" << m + 1 << ", k=" << k << ") and (r=" << r + 1
               << ", k'=" << to_sci(near, 10) << "); the simple-pole algebraic expansion does not apply";
            throw HigherOrderPole(os.str());
          }
        }
      }
    }
  }
}

}  // namespace

std::pair<HPComplex, ExpansionTermLog> alg_expansion_H(const WrightParams& params, const RayPoint& z_shifted,
                                                       const TruncationSpec& trunc) {
  int digits = z_shifted.digits();
  int w = digits + 10;
  if (params.p() == 0) return {czero(digits), empty_log()};
  long limit = trunc.max_terms();
  if (limit < 1) throw InvalidParams("truncation count out of range");
  check_simple_poles(params, limit);

  HPComplex total = czero(w);
  ExpansionTermLog log = empty_log();
  RayPoint zw = z_shifted.with_digits(w);
  for (int m = 0; m < params.p(); ++m) {
    const GammaPair& gm = params.upper[m];
    Scalar inv_alpha = Scalar(1) / gm.scale;
    Scalar s0 = gm.shift * inv_alpha;
    GammaSequence gamma_s(s0, inv_alpha, false, w);
    std::vector<GammaSequence> others, lowers;
    for (int r = 0; r < params.p(); ++r) {
      if (r == m) continue;
      const GammaPair& gr = params.upper[r];
      others.emplace_back(gr.shift - gr.scale * s0, -(gr.scale * inv_alpha), false, w);
    }
    for (const auto& gl : params.lower) lowers.emplace_back(gl.shift - gl.scale * s0, -(gl.scale * inv_alpha), true, w);

    HPComplex power = ray_power(zw, -s0.real(w)) * inv_alpha.real(w);
    HPComplex step = ray_power(zw, -inv_alpha.real(w));
    HPReal sign_fact(1L, w);  // (-1)^k / k!
    TermSource next = [&](long k) {
      if (k > 0) {
        power *= step;
        sign_fact /= -k;
      }
      HPReal g = gamma_s.next() * sign_fact;
      for (auto& s : others) g *= s.next();
      for (auto& s : lowers) g *= s.next();
      return power * g;
    };
    auto [value, part] = run_series(next, trunc, limit, w);
    total += value;
    merge_log(log, part);
  }
  return {total.with_digits(digits), log};
}

// ------------------------------------------------------ third exponential

bool has_third_series(const WrightParams& params) {
  if (params.p() != 0 || params.q() != 2) return false;
  if (!(params.lower[0].scale == params.lower[1].scale)) return false;
  Scalar diff = params.lower[0].shift - params.lower[1].shift;
  if (diff.exact()) {
    BigRational twice = diff.rational() * 2;
    if (is_integer(twice) && mpz_odd_p(twice.get_num_mpz_t())) return false;
    return true;
  }
  HPReal c = cos(pi(default_digits()) * diff.real(default_digits()));
  return !(abs(c) < pow10(-(default_digits() - 5), default_digits()));
}

std::pair<HPComplex, ExpansionTermLog> third_exp_series_logged(const WrightParams& params,
                                                               const CoefficientSet& coeffs, const RayPoint& z,
                                                               const TruncationSpec& trunc) {
  if (params.p() != 0 || params.q() != 2 || !(params.lower[0].scale == params.lower[1].scale))
    throw InvalidParams("the third exponential series belongs to the 0Psi2 family with equal scales");
  check_coeffs(params, coeffs);
  int digits = z.digits();
  if (!has_third_series(params)) return {czero(digits), empty_log()};
  int w = digits + 10;
  DerivedConstants dc = derive_constants(params, w);
  HPReal one(1L, w);
  HPReal th = z.theta.with_digits(w);
  HPReal P = pi(w);
  HPReal xarg_src = th.sign() >= 0 ? th - P : th + P;
  HPReal Xmod = dc.kappa * pow(dc.h * z.r.with_digits(w), one / dc.kappa);
  HPReal Xarg = xarg_src / dc.kappa;
  HPReal ReX = Xmod * cos(Xarg);
  HPReal ImX = Xmod * sin(Xarg);
  Scalar diff = params.lower[0].shift - params.lower[1].shift;
  HPReal cosfac = cos(P * diff.real(w)) * 2;
  HPComplex pref = polar(cosfac * dc.A0 * pow(Xmod, dc.theta_big) * exp(-ReX), dc.theta_big * Xarg - ImX);
  // (-X)^{-j} = (-1)^j X^{-j}
  HPComplex xinv = -polar(one / Xmod, -Xarg);
  return exponential_sum(coeffs, pref, xinv, trunc, w, digits);
}

HPComplex third_exp_series(const WrightParams& params, const CoefficientSet& coeffs, const RayPoint& z,
                           const TruncationSpec& trunc) {
  return third_exp_series_logged(params, coeffs, z, trunc).first;
}

// ------------------------------------------------------- sector planning

std::string CompositionPlan::describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : components) {
    if (!first) os << " + ";
    first = false;
    if (c.weight != 1) os << c.weight.get_str() << "*";
    switch (c.kind) {
      case ExpansionKind::Exponential:
        os << "E(n=" << c.shift << ")";
        break;
      case ExpansionKind::Algebraic:
        os << "H(k=" << c.shift << ")";
        break;
      case ExpansionKind::ThirdExponential:
        os << "X(k=" << c.shift << ")";
        break;
    }
  }
  return os.str();
}

CompositionPlan classify_sector(const HPReal& kappa, const HPReal& theta, const SectorConfig& cfg) {
  cfg.validate();
  if (kappa.sign() <= 0) throw KappaNonPositive("kappa must be positive");
  int d = std::max(kappa.digits(), theta.digits());
  HPReal P = pi(d);
  HPReal at = abs(theta);
  HPReal tiny = pow10(-(d - 5), d);
  if (at > P + tiny) throw InvalidParams("classify_sector needs |theta| <= pi");
  bool at_pi = abs(at - P) <= tiny;
  const HPReal& eps = cfg.epsilon;

  // Shift direction for the H and secondary branches: e^{-pi i} above the axis, e^{+pi i} below.
  std::vector<std::pair<long, BigRational>> sides;
  if (theta.sign() > 0)
    sides = {{-1, BigRational(1)}};
  else if (theta.sign() < 0)
    sides = {{1, BigRational(1)}};
  else
    sides = {{-1, BigRational(1, 2)}, {1, BigRational(1, 2)}};

  CompositionPlan plan;
  auto add = [&](ExpansionKind k, long shift, const BigRational& wgt) { plan.components.push_back({k, shift, wgt}); };
  auto decide = [&](const HPReal& line, bool beyond_is_on) {
    // beyond_is_on: the term is present for |theta| past the line (secondary E), else before it.
    if (at <= line - eps) return !beyond_is_on;
    if (at >= line + eps) return beyond_is_on;
    plan.on_stokes_line = true;
    return cfg.policy == StokesPolicy::IncludeBelow;
  };

  HPReal one(1L, d);
  if (kappa < one) {
    if (decide(P * kappa, false)) add(ExpansionKind::Exponential, 0, BigRational(1));
  } else if (kappa <= HPReal(2L, d)) {
    if (kappa == one) plan.heuristic = true;
    add(ExpansionKind::Exponential, 0, BigRational(1));
    HPReal line = P * (HPReal(2L, d) - kappa);
    if (!cfg.secondary_from_algebraic) line = line / 2;
    bool secondary = !cfg.switch_secondary || decide(line, true);
    if (secondary)
      for (const auto& [s, wgt] : sides) add(ExpansionKind::Exponential, s, wgt);
  } else {
    long N = 0;
    while (!(HPReal(2 * N + 1, d) > kappa / 2)) ++N;
    if (at_pi) {
      // Average the representations from theta and theta -+ 2 pi.
      long lo = theta.sign() > 0 ? -N : -N + 1;
      long hi = theta.sign() > 0 ? N - 1 : N;
      for (long n = lo; n <= hi; ++n) add(ExpansionKind::Exponential, n, BigRational(1));
      add(ExpansionKind::Exponential, theta.sign() > 0 ? N : -N, BigRational(1, 2));
      add(ExpansionKind::Exponential, theta.sign() > 0 ? -N - 1 : N + 1, BigRational(1, 2));
    } else {
      for (long n = -N; n <= N; ++n) add(ExpansionKind::Exponential, n, BigRational(1));
    }
  }
  for (const auto& [s, wgt] : sides) add(ExpansionKind::Algebraic, s, wgt);
  return plan;
}

// ------------------------------------------------------------- composer

EvalReport asymptotic_eval(const WrightParams& params, const RayPoint& z, const TruncationSpec& trunc,
                           const SectorConfig& cfg) {
  params.validate();
  Scalar kap = kappa_of(params);
  if (kap.sign() <= 0) throw KappaNonPositive("kappa = " + kap.str() + " must be positive");
  int digits = z.digits();
  SectorConfig sector = cfg;
  sector.secondary_from_algebraic = params.p() > 0;
  CompositionPlan plan = classify_sector(kap.real(digits), z.theta, sector);
  if (has_third_series(params)) {
    std::vector<PlanComponent> extra;
    for (const auto& c : plan.components)
      if (c.kind == ExpansionKind::Algebraic) extra.push_back({ExpansionKind::ThirdExponential, c.shift, c.weight});
    plan.components.insert(plan.components.end(), extra.begin(), extra.end());
  }

  int J = trunc.mode == TruncationSpec::Mode::Fixed ? trunc.count : std::min(kMaxCoefficients, trunc.count - 1);
  if (J > kMaxCoefficients) throw InvalidParams("at most 100 expansion coefficients are supported");
  auto coeffs = solve_coefficients(params, std::max(J, 0));

  EvalReport rep;
  rep.value = czero(digits);
  rep.est_truncation_error = HPReal(0L, 20);
  rep.peak_term_magnitude = HPReal(0L, 20);
  rep.working_precision = digits;
  rep.plan = plan.describe();
  bool no_min = false, divergent = false;
  for (const auto& c : plan.components) {
    std::pair<HPComplex, ExpansionTermLog> part;
    switch (c.kind) {
      case ExpansionKind::Exponential:
        part = exp_expansion_E(params, *coeffs, z.rotated(pi(digits + 10) * (2 * c.shift)), trunc);
        break;
      case ExpansionKind::Algebraic:
        part = alg_expansion_H(params, z.rotated_pi(c.shift), trunc);
        break;
      case ExpansionKind::ThirdExponential: {
        // The third series picks its own branch from the sign of theta; at
        // theta = 0 the two halves are the mirrored rays.
        RayPoint zz = z;
        if (z.theta.sign() == 0) zz = RayPoint(z.r, pi(digits) * c.shift * pow10(-(digits + 5), digits));
        part = third_exp_series_logged(params, *coeffs, zz, trunc);
        break;
      }
    }
    HPReal wgt(c.weight, digits);
    rep.value += part.first * wgt;
    rep.terms_used += part.second.terms_used;
    rep.est_truncation_error = rep.est_truncation_error + part.second.smallest_term * HPReal(c.weight, 20);
    rep.peak_term_magnitude = max(rep.peak_term_magnitude, part.second.peak_term);
    no_min = no_min || part.second.no_minimum_found;
    divergent = divergent || part.second.divergent_from_start;
  }
  if (plan.on_stokes_line) rep.flags.push_back("on_stokes_line");
  if (plan.heuristic) rep.flags.push_back("kappa_one_heuristic");
  if (no_min) rep.flags.push_back("no_minimum_found");
  if (divergent) rep.flags.push_back("divergent_from_start");
  return rep;
}

// ------------------------------------------------------- Mittag-Leffler

EvalReport mittag_leffler(const Scalar& a, const Scalar& b, const RayPoint& z, int target_digits,
                          const MittagLefflerOptions& opt) {
  if (a.sign() <= 0) throw InvalidParams("Mittag-Leffler parameter a must be positive");
  WrightParams params = WrightParams::mittag_leffler(a, b);
  double ad = to_double(a.real(30));
  double Z = std::pow(to_double(z.r), 1.0 / ad);
  if (Z < opt.direct_threshold) return wright_eval(params, z, target_digits);
  double cap = std::min(1e6, std::ceil(3 * Z / ad) + 64);
  return asymptotic_eval(params, z.with_digits(target_digits + 10), TruncationSpec::optimal(static_cast<int>(cap)),
                         opt.sector);
}

EvalReport mittag_leffler(const HPReal& a, const HPReal& b, const RayPoint& z, int target_digits,
                          const MittagLefflerOptions& opt) {
  return mittag_leffler(Scalar(a), Scalar(b), z, target_digits, opt);
}

HPReal erf_smoothing_factor(const HPReal& a, const HPReal& theta, const HPReal& r) {
  int d = std::max({a.digits(), theta.digits(), r.digits()});
  if (!(a.sign() > 0) || !(a < HPReal(1L, d))) throw OutOfRegime("the smoothing factor needs 0 < a < 1");
  HPReal P = pi(d);
  HPReal lead = theta.sign() >= 0 ? P * a - theta : P * a + theta;
  HPReal arg = lead / a * sqrt(r / 2);
  return HPReal(BigRational(1, 2), d) + hp_erf(arg) / 2;
}

}  // namespace wright
