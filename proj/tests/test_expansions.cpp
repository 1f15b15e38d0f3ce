#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "wright/expansions.hpp"
#include "wright/stokes_lab.hpp"

using namespace wright;
using Q = BigRational;

namespace {

HPComplex cr(double x, int d = 40) { return HPComplex(HPReal::from_double(x, d)); }

std::vector<HPComplex> from_mags(const std::vector<double>& m) {
  std::vector<HPComplex> v;
  for (double x : m) v.push_back(cr(x));
  return v;
}

double rel(const HPComplex& a, const HPComplex& b) { return to_double(abs(a - b) / abs(b)); }

RayPoint at(long r, Q t, int d = 40) { return RayPoint::from_pi(HPReal(r, d), t); }

bool same_plan(const CompositionPlan& p, std::vector<std::tuple<ExpansionKind, long, Q>> want) {
  if (p.components.size() != want.size()) return false;
  for (size_t i = 0; i < want.size(); ++i) {
    const auto& c = p.components[i];
    if (c.kind != std::get<0>(want[i]) || c.shift != std::get<1>(want[i]) || c.weight != std::get<2>(want[i])) return false;
  }
  return true;
}

const auto E = ExpansionKind::Exponential;
const auto H = ExpansionKind::Algebraic;

}  // namespace

TEST_CASE("optimal truncation examples") {
  auto r = optimal_truncate(from_mags({1, 0.1, 0.01, 0.5, 2}), 64);
  CHECK(r.index == 3);
  CHECK(std::abs(to_double(r.smallest_term) - 0.01) < 1e-12);
  CHECK(std::abs(to_double(r.partial_sum.re) - 1.11) < 1e-12);
  CHECK_FALSE(r.no_minimum_found);

  std::vector<double> dec;
  for (int j = 0; j < 20; ++j) dec.push_back(std::pow(0.5, j));
  auto r2 = optimal_truncate(from_mags(dec), 10);
  CHECK(r2.index == 10);
  CHECK(r2.no_minimum_found);

  std::vector<double> ml(40, 0.0);
  ml[0] = 3;
  auto r3 = optimal_truncate(from_mags(ml), 40);
  CHECK(r3.index == 1);
  CHECK(to_double(r3.partial_sum.re) == 3);
}

TEST_CASE("isolated zeros and sharp dips are skipped") {
  auto r = optimal_truncate(from_mags({1, 0.5, 0, 0.2, 1e-4, 0.15, 0.3, 1}), 64);
  CHECK(r.index == 6);  // smallest non-dip is 0.15 at index 5
  CHECK(std::abs(to_double(r.smallest_term) - 0.15) < 1e-9);
}

TEST_CASE("U-shaped sequences truncate at the minimum with decreasing terms before it") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.2, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> m{1};
    int down = 3 + trial % 17;
    for (int j = 0; j < down; ++j) m.push_back(m.back() * u(rng));
    for (int j = 0; j < 15; ++j) m.push_back(m.back() / u(rng));
    auto r = optimal_truncate(from_mags(m), 64);
    CHECK(r.index == down + 1);
    for (int j = 1; j < r.index; ++j) CHECK(m[j] < m[j - 1]);
  }
}

TEST_CASE("streaming truncator stops early once terms blow up") {
  OptimalTruncator t(1000, 30);
  int pushed = 0;
  double m = 1;
  for (int j = 0; j < 1000; ++j) {
    ++pushed;
    m = j < 10 ? m / 10 : m * 10;
    if (!t.push(cr(m))) break;
  }
  CHECK(pushed < 30);
  CHECK(t.finish().index == 10);
}

TEST_CASE("sector plans") {
  SectorConfig cfg;
  HPReal P = pi(50);
  auto p1 = classify_sector(HPReal(Q(3, 2), 50), P * 9 / 10, cfg);
  CHECK(same_plan(p1, {{E, 0, Q(1)}, {E, -1, Q(1)}, {H, -1, Q(1)}}));
  auto p2 = classify_sector(HPReal(Q(2, 3), 50), P * 3 / 4, cfg);
  CHECK(same_plan(p2, {{H, -1, Q(1)}}));
  auto p3 = classify_sector(HPReal(6L, 50), HPReal(0L, 50), cfg);
  CHECK(same_plan(p3, {{E, -2, Q(1)}, {E, -1, Q(1)}, {E, 0, Q(1)}, {E, 1, Q(1)}, {E, 2, Q(1)}, {H, -1, Q(1, 2)}, {H, 1, Q(1, 2)}}));
  auto p4 = classify_sector(HPReal(Q(2, 3), 50), -P / 2, cfg);
  CHECK(same_plan(p4, {{E, 0, Q(1)}, {H, 1, Q(1)}}));
  auto on = classify_sector(HPReal(Q(2, 3), 50), P * 2 / 3, cfg);
  CHECK(on.on_stokes_line);
  CHECK(same_plan(on, {{E, 0, Q(1)}, {H, -1, Q(1)}}));
  SectorConfig drop = cfg;
  drop.policy = StokesPolicy::DropAbove;
  CHECK(same_plan(classify_sector(HPReal(Q(2, 3), 50), P * 2 / 3, drop), {{H, -1, Q(1)}}));
  CHECK(classify_sector(HPReal(1L, 50), P / 3, cfg).heuristic);
  CHECK_THROWS_AS(classify_sector(HPReal(1L, 50), P * 2, cfg), InvalidParams);
  SectorConfig wide;
  wide.epsilon = P / 4;
  CHECK_THROWS_AS(classify_sector(HPReal(1L, 50), P / 2, wide), InvalidParams);
}

TEST_CASE("secondary exponential switches on past its Stokes line") {
  HPReal P = pi(50), k(Q(5, 4), 50);
  SectorConfig cfg;  // switched by H at pi (2 - kappa) = 3 pi / 4
  CHECK(same_plan(classify_sector(k, P / 2, cfg), {{E, 0, Q(1)}, {H, -1, Q(1)}}));
  CHECK(same_plan(classify_sector(k, P * 4 / 5, cfg), {{E, 0, Q(1)}, {E, -1, Q(1)}, {H, -1, Q(1)}}));
  SectorConfig no_h = cfg;  // switched by E(z) at 3 pi / 8
  no_h.secondary_from_algebraic = false;
  CHECK(same_plan(classify_sector(k, P / 2, no_h), {{E, 0, Q(1)}, {E, -1, Q(1)}, {H, -1, Q(1)}}));

  // the Mittag-Leffler value between the two lines has no E(z e^{-2 pi i}) in it
  auto ml = WrightParams::mittag_leffler(Q(5, 4), Q(3, 4));
  RayPoint z = at(40, Q(1, 2), 60);
  auto a = asymptotic_eval(ml, z, TruncationSpec::optimal(400));
  auto d = wright_eval(ml, z, 50);
  CHECK(to_double(abs(a.value - d.value)) < to_double(a.est_truncation_error) * 10);

  auto f3 = WrightParams::f3(Q(1, 10), Q(1, 4), Q(3, 4));
  CHECK(asymptotic_eval(f3, at(20, Q(1, 2)), TruncationSpec::optimal()).plan.find("E(n=-1)") != std::string::npos);
}

TEST_CASE("kappa > 2 on the negative axis averages both representations") {
  auto p = classify_sector(HPReal(3L, 50), pi(50), SectorConfig{});
  CHECK(same_plan(p, {{E, -1, Q(1)}, {E, 0, Q(1)}, {E, 1, Q(1, 2)}, {E, -2, Q(1, 2)}, {H, -1, Q(1)}}));
}

TEST_CASE("Mittag-Leffler exponential expansion is a single term") {
  auto p = WrightParams::mittag_leffler(Q(1, 2), Q(1));
  auto c = solve_coefficients(p, 20);
  auto [v, log] = exp_expansion_E(p, *c, at(3, Q(0)), TruncationSpec::optimal());
  CHECK(log.terms_used == 1);
  CHECK(rel(v, HPComplex(exp(HPReal(9L, 40)) * 2)) < 1e-35);
}

TEST_CASE("F1 subdominant exponential at 0.9 pi") {
  auto p = WrightParams::f1(Q(1, 4), Q(3, 4));
  auto c = solve_coefficients(p, 5);
  auto [v, log] = exp_expansion_E(p, *c, at(100, Q(9, 10)).rotated(pi(40) * -2), TruncationSpec::fixed(5));
  CHECK(log.terms_used == 6);
  CHECK(std::abs(to_double(abs(v)) / 8.190854e-9 - 1) < 1e-6);
}

TEST_CASE("branch-shifted E differs by the rotation inside Z") {
  auto p = WrightParams::f1(Q(1, 4), Q(3, 4));
  auto c = solve_coefficients(p, 0);
  RayPoint z = at(5, Q(1, 5));
  auto a = exp_expansion_E(p, *c, z, TruncationSpec::fixed(0)).first;
  auto b = exp_expansion_E(p, *c, z.rotated(pi(40) * 2), TruncationSpec::fixed(0)).first;
  HPComplex expect = leading_term(p, z, 1);
  CHECK(rel(b, expect) < 1e-35);
  CHECK(rel(a, leading_term(p, z, 0)) < 1e-35);
}

TEST_CASE("Mittag-Leffler algebraic expansion") {
  Q a(3, 5), b(3, 4);
  auto p = WrightParams::mittag_leffler(a, b);
  RayPoint z = at(7, Q(2, 5));
  auto [v, log] = alg_expansion_H(p, z.rotated_pi(-1), TruncationSpec::fixed(9));
  HPComplex s(HPReal(0L, 40), HPReal(0L, 40));
  for (long k = 1; k <= 10; ++k) s -= ray_power(z, HPReal(-k, 40)) * hp_recip_gamma(b - a * k, 40);
  CHECK(rel(v, s) < 1e-35);
}

TEST_CASE("F2 algebraic expansion matches its printed series") {
  Q a(1, 3), b(1, 4);
  auto p = WrightParams::f2(a, b);
  RayPoint w = at(10, Q(3, 5)).rotated_pi(-1);
  auto v = alg_expansion_H(p, w, TruncationSpec::fixed(8)).first;
  HPComplex s(HPReal(0L, 40), HPReal(0L, 40));
  for (long k = 0; k <= 8; ++k) {
    HPReal t = hp_gamma(Q(3 * k, 2) + Q(3, 2) * a, 45) * hp_recip_gamma(b - a / 2 - Q(k, 2), 45) /
               hp_gamma(Q(k + 1), 45);
    if (k % 2) t = -t;
    s += ray_power(w, HPReal(-(Q(3, 2) * (Q(k) + a)), 45)) * t;
  }
  s = s * HPReal(Q(3, 2), 45);
  CHECK(rel(v, s) < 1e-35);
}

TEST_CASE("no upper gammas means no algebraic expansion") {
  auto p = WrightParams::f3(Q(1, 10), Q(1, 4), Q(3, 4));
  auto [v, log] = alg_expansion_H(p, at(20, Q(1, 2)), TruncationSpec::optimal());
  CHECK(v.is_zero());
}

TEST_CASE("colliding pole sequences are refused") {
  WrightParams p;
  p.upper = {{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(2)}};
  p.lower = {{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(1)}};
  CHECK_THROWS_AS(alg_expansion_H(p, at(10, Q(0)), TruncationSpec::optimal()), HigherOrderPole);
  try {
    alg_expansion_H(p, at(10, Q(0)), TruncationSpec::optimal());
  } catch (const HigherOrderPole& e) {
    CHECK(std::string(e.what()).find("(m=1, k=1)") != std::string::npos);
  }
}

TEST_CASE("vanishing lower gammas zero the affected terms") {
  auto p = WrightParams::mittag_leffler(Q(1, 2), Q(1));  // 1/Gamma(1 - k/2) = 0 at even k
  auto [v, log] = alg_expansion_H(p, at(9, Q(1)).rotated_pi(-1), TruncationSpec::fixed(12));
  int zeros = 0;
  for (double m : log.log10_magnitudes) zeros += std::isinf(m);
  CHECK(zeros == 6);
}

TEST_CASE("third exponential series") {
  auto quarter = WrightParams::f3(Q(1, 10), Q(1, 4), Q(3, 4));
  auto c = solve_coefficients(quarter, 10);
  CHECK_FALSE(has_third_series(quarter));
  CHECK(third_exp_series(quarter, *c, at(20, Q(1, 2)), TruncationSpec::optimal()).is_zero());

  auto eq = WrightParams::f3(Q(1, 10), Q(1, 3), Q(1, 3));
  auto ce = solve_coefficients(eq, 5);
  RayPoint z = at(20, Q(1, 2));
  HPComplex got = third_exp_series(eq, *ce, z, TruncationSpec::fixed(0));
  // leading term 2 A0 X^theta e^{-X}, X = kappa (h z e^{-pi i})^{1/kappa}
  DerivedConstants dc = derive_constants(eq, 50);
  RayPoint zx = z.rotated_pi(-1).with_digits(50);
  HPComplex X = ray_power(zx, HPReal(1L, 50) / dc.kappa) * pow(dc.h, HPReal(1L, 50) / dc.kappa) * dc.kappa;
  HPComplex Xt = polar(pow(abs(X), dc.theta_big), arg(X) * dc.theta_big);
  HPComplex expect = Xt * exp(-X) * (dc.A0 * 2);
  CHECK(rel(got, expect) < 1e-35);
}

TEST_CASE("third series measured against the residual it should explain") {
  auto p = WrightParams::f3(Q(1, 10), Q(7, 12), Q(1, 4));  // a - b = 1/3
  PolarPoint z{Scalar(20), Scalar(Q(1, 2))};
  auto R = residual_report(p, z, {{E, 0, TruncationSpec::optimal()}, {E, -1, TruncationSpec::optimal()}}).residual;
  auto c = solve_coefficients(p, 63);
  auto X = third_exp_series(p, *c, z.at(40), TruncationSpec::optimal());
  CHECK_FALSE(X.is_zero());
  double ratio = to_double(abs(R) / abs(X));
  CHECK(ratio > 0.1);
  CHECK(ratio < 10);
}

TEST_CASE("asymptotic evaluation agrees with the series") {
  auto p = WrightParams::mittag_leffler(Q(1, 2), Q(1));
  RayPoint z = at(25, Q(0), 60);
  auto a = asymptotic_eval(p, z, TruncationSpec::optimal(400));
  auto d = wright_eval(p, z, 50);
  CHECK(to_double(abs(a.value - d.value)) <= to_double(a.est_truncation_error) * 10 + to_double(abs(d.value)) * 1e-45);
}

TEST_CASE("conjugate symmetry in the argument") {
  for (const auto& p : {WrightParams::f1(Q(1, 4), Q(3, 4)), WrightParams::f2(Q(1, 3), Q(1, 4)),
                        WrightParams::f3(Q(1, 10), Q(1, 3), Q(1, 4)), WrightParams::mittag_leffler(Q(3), Q(3, 4))}) {
    for (Q t : {Q(1, 5), Q(3, 5), Q(1)}) {
      auto up = asymptotic_eval(p, at(30, t), TruncationSpec::optimal()).value;
      auto dn = asymptotic_eval(p, at(30, -t), TruncationSpec::optimal()).value;
      CHECK(rel(conj(dn), up) < 1e-30);
    }
  }
}

TEST_CASE("real result on the negative axis") {
  for (const auto& p : {WrightParams::f1(Q(1, 4), Q(3, 4)), WrightParams::f3(Q(1, 10), Q(1, 4), Q(3, 4)),
                        WrightParams::mittag_leffler(Q(5, 4), Q(3, 4))}) {
    auto rep = asymptotic_eval(p, at(20, Q(1)), TruncationSpec::optimal());
    CHECK(abs(rep.value.im) / abs(rep.value) < rep.est_truncation_error / abs(rep.value));
  }
}

TEST_CASE("exponential expansion is algebraic in size on the anti-Stokes ray") {
  auto p = WrightParams::f2(Q(1, 3), Q(1, 4));
  auto c = solve_coefficients(p, 63);
  DerivedConstants dc = derive_constants(p, 40);
  for (long r : {50, 500}) {
    RayPoint z = at(r, Q(1, 3));  // kappa pi / 2
    auto v = exp_expansion_E(p, *c, z, TruncationSpec::optimal()).first;
    HPReal Zmod = dc.kappa * pow(dc.h * r, HPReal(1L, 40) / dc.kappa);
    HPReal scale = dc.A0 * pow(Zmod, dc.theta_big);
    double q = to_double(abs(v) / scale);
    CHECK(q > 0.8);
    CHECK(q < 1.25);
  }
}

TEST_CASE("Mittag-Leffler wrapper") {
  auto e = mittag_leffler(Scalar(1), Scalar(1), at(1, Q(0)), 30);
  CHECK(to_fixed(e.value.re, 30) == "2.718281828459045235360287471353");
  auto ch = mittag_leffler(Scalar(2), Scalar(1), at(16, Q(0)), 30);
  HPReal c = (exp(HPReal(4L, 40)) + exp(HPReal(-4L, 40))) / 2;
  CHECK(rel(ch.value, HPComplex(c)) < 1e-29);
  // E_{1/2,1}(-5) = 2 E_{1,1}(25) - E_{1/2,1}(5); |Z| = 25 takes the asymptotic route
  auto neg = mittag_leffler(Scalar(Q(1, 2)), Scalar(1), at(5, Q(1)), 20);
  CHECK(neg.plan.find("H") != std::string::npos);
  auto p1 = wright_eval(WrightParams::mittag_leffler(Q(1), Q(1)), at(25, Q(0), 60), 40).value;
  auto ph = wright_eval(WrightParams::mittag_leffler(Q(1, 2), Q(1)), at(5, Q(0), 60), 40).value;
  HPComplex id = p1 * HPReal(2L, 60) - ph;
  CHECK(to_double(abs(neg.value - id)) <= 10 * to_double(neg.est_truncation_error));
  CHECK_THROWS_AS(mittag_leffler(Scalar(0), Scalar(1), at(1, Q(0)), 30), InvalidParams);
}

TEST_CASE("error-function smoothing factor") {
  HPReal a(Q(2, 3), 40);
  CHECK(abs(erf_smoothing_factor(a, pi(40) * a, HPReal(100L, 40)) - HPReal(Q(1, 2), 40)) < pow10(-35, 40));
  CHECK(erf_smoothing_factor(a, HPReal(Q(1, 100), 40), HPReal(1000000L, 40)) > HPReal(Q(999999, 1000000), 40));
  CHECK_THROWS_AS(erf_smoothing_factor(HPReal(1L, 40), HPReal(0L, 40), HPReal(10L, 40)), OutOfRegime);
}

TEST_CASE("smoothing factor against a measured multiplier") {
  auto p = WrightParams::mittag_leffler(Q(2, 3), Q(1));
  for (Q t : {Q(3, 5), Q(7, 10)}) {
    PolarPoint z{Scalar(100), Scalar(t)};
    HPComplex S = stokes_multiplier(p, z, 0, {{H, -1, TruncationSpec::optimal(2000)}});
    HPReal f = erf_smoothing_factor(HPReal(Q(2, 3), 40), HPReal(t, 40) * pi(40), HPReal(100L, 40));
    CHECK(std::abs(to_double(S.re) - to_double(f)) < 0.1);
  }
}
