#include "wright/numerics.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <mutex>

namespace wright {

namespace {

thread_local int g_digits = 50;

constexpr mpfr_rnd_t RND = MPFR_RNDN;

// Above this precision the Stirling route needs too many Bernoulli numbers;
// the incomplete-gamma series takes over.
constexpr int kStirlingMaxDigits = 600;

}  // namespace

int default_digits() { return g_digits; }

PrecisionScope::PrecisionScope(int digits) : saved_(g_digits) {
  g_digits = std::max(digits, kMinDigits);
}

PrecisionScope::~PrecisionScope() { g_digits = saved_; }

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(std::max(digits, kMinDigits) * 3.3219280948873623)) + 8;
}

// ---------------------------------------------------------------- HPReal

HPReal::HPReal() : HPReal(0L, g_digits) {}
HPReal::HPReal(int v) : HPReal(static_cast<long>(v), g_digits) {}
HPReal::HPReal(long v) : HPReal(v, g_digits) {}

HPReal::HPReal(long v, int digits) : digits_(std::max(digits, kMinDigits)) {
  mpfr_init2(v_, digits_to_bits(digits_));
  mpfr_set_si(v_, v, RND);
}

HPReal::HPReal(const BigRational& q, int digits) : digits_(std::max(digits, kMinDigits)) {
  mpfr_init2(v_, digits_to_bits(digits_));
  mpfr_set_q(v_, q.get_mpq_t(), RND);
}

HPReal::HPReal(const mpz_class& n, int digits) : digits_(std::max(digits, kMinDigits)) {
  mpfr_init2(v_, digits_to_bits(digits_));
  mpfr_set_z(v_, n.get_mpz_t(), RND);
}

HPReal HPReal::parse(const std::string& s, int digits) {
  HPReal r(0L, digits);
  if (mpfr_set_str(r.v_, s.c_str(), 10, RND) != 0) throw InvalidParams("not a number: '" + s + "'");
  return r;
}

HPReal HPReal::from_double(double d, int digits) {
  HPReal r(0L, digits);
  mpfr_set_d(r.v_, d, RND);
  return r;
}

HPReal::HPReal(const HPReal& o) : digits_(o.digits_) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, RND);
}

HPReal::HPReal(HPReal&& o) noexcept : digits_(o.digits_) {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

HPReal& HPReal::operator=(const HPReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, RND);
    digits_ = o.digits_;
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& o) noexcept {
  mpfr_swap(v_, o.v_);
  std::swap(digits_, o.digits_);
  return *this;
}

HPReal::~HPReal() { mpfr_clear(v_); }

HPReal HPReal::with_digits(int digits) const {
  HPReal r(0L, digits);
  mpfr_set(r.v_, v_, RND);
  return r;
}

void HPReal::widen_to(int digits) {
  if (digits > digits_) {
    mpfr_prec_round(v_, digits_to_bits(digits), RND);
    digits_ = digits;
  }
}

HPReal& HPReal::operator+=(const HPReal& o) {
  widen_to(o.digits_);
  mpfr_add(v_, v_, o.v_, RND);
  return *this;
}
HPReal& HPReal::operator-=(const HPReal& o) {
  widen_to(o.digits_);
  mpfr_sub(v_, v_, o.v_, RND);
  return *this;
}
HPReal& HPReal::operator*=(const HPReal& o) {
  widen_to(o.digits_);
  mpfr_mul(v_, v_, o.v_, RND);
  return *this;
}
HPReal& HPReal::operator/=(const HPReal& o) {
  widen_to(o.digits_);
  mpfr_div(v_, v_, o.v_, RND);
  return *this;
}
HPReal& HPReal::operator*=(long k) {
  mpfr_mul_si(v_, v_, k, RND);
  return *this;
}
HPReal& HPReal::operator/=(long k) {
  mpfr_div_si(v_, v_, k, RND);
  return *this;
}
HPReal& HPReal::mul_z(const mpz_class& k) {
  mpfr_mul_z(v_, v_, k.get_mpz_t(), RND);
  return *this;
}
HPReal& HPReal::div_z(const mpz_class& k) {
  mpfr_div_z(v_, v_, k.get_mpz_t(), RND);
  return *this;
}

HPReal HPReal::operator-() const {
  HPReal r(*this);
  mpfr_neg(r.v_, r.v_, RND);
  return r;
}

namespace {

HPReal blank(const HPReal& a, const HPReal& b) { return HPReal(0L, std::max(a.digits(), b.digits())); }

}  // namespace

HPReal operator+(const HPReal& a, const HPReal& b) {
  HPReal r = blank(a, b);
  mpfr_add(r.get(), a.get(), b.get(), RND);
  return r;
}
HPReal operator-(const HPReal& a, const HPReal& b) {
  HPReal r = blank(a, b);
  mpfr_sub(r.get(), a.get(), b.get(), RND);
  return r;
}
HPReal operator*(const HPReal& a, const HPReal& b) {
  HPReal r = blank(a, b);
  mpfr_mul(r.get(), a.get(), b.get(), RND);
  return r;
}
HPReal operator/(const HPReal& a, const HPReal& b) {
  HPReal r = blank(a, b);
  mpfr_div(r.get(), a.get(), b.get(), RND);
  return r;
}
HPReal operator*(const HPReal& a, long k) {
  HPReal r(a);
  r *= k;
  return r;
}
HPReal operator*(long k, const HPReal& a) { return a * k; }
HPReal operator/(const HPReal& a, long k) {
  HPReal r(a);
  r /= k;
  return r;
}
HPReal operator+(const HPReal& a, long k) {
  HPReal r(a);
  mpfr_add_si(r.get(), r.get(), k, RND);
  return r;
}
HPReal operator-(const HPReal& a, long k) {
  HPReal r(a);
  mpfr_sub_si(r.get(), r.get(), k, RND);
  return r;
}

bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator!=(const HPReal& a, const HPReal& b) { return !(a == b); }
bool operator<(const HPReal& a, const HPReal& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const HPReal& a, const HPReal& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const HPReal& a, const HPReal& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const HPReal& a, const HPReal& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }

#define WRIGHT_UNARY(name, fn)            \
  HPReal name(const HPReal& x) {          \
    HPReal r(0L, x.digits());             \
    fn(r.get(), x.get(), RND);            \
    return r;                             \
  }

WRIGHT_UNARY(abs, mpfr_abs)
WRIGHT_UNARY(sqrt, mpfr_sqrt)
WRIGHT_UNARY(exp, mpfr_exp)
WRIGHT_UNARY(log, mpfr_log)
WRIGHT_UNARY(log10, mpfr_log10)
WRIGHT_UNARY(sin, mpfr_sin)
WRIGHT_UNARY(cos, mpfr_cos)
#undef WRIGHT_UNARY

HPReal floor(const HPReal& x) {
  HPReal r(0L, x.digits());
  mpfr_floor(r.get(), x.get());
  return r;
}

HPReal pow(const HPReal& x, const HPReal& e) {
  HPReal r = blank(x, e);
  mpfr_pow(r.get(), x.get(), e.get(), RND);
  return r;
}

HPReal atan2(const HPReal& y, const HPReal& x) {
  HPReal r = blank(y, x);
  mpfr_atan2(r.get(), y.get(), x.get(), RND);
  return r;
}

HPReal pi(int digits) {
  HPReal r(0L, digits);
  mpfr_const_pi(r.get(), RND);
  return r;
}

HPReal max(const HPReal& a, const HPReal& b) { return a < b ? b : a; }
HPReal min(const HPReal& a, const HPReal& b) { return b < a ? b : a; }

HPReal pow10(long e, int digits) {
  HPReal r(0L, digits);
  mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(std::labs(e)), RND);
  if (e < 0) mpfr_ui_div(r.get(), 1, r.get(), RND);
  return r;
}

bool is_integer(const HPReal& x) { return mpfr_integer_p(x.get()) != 0; }
bool is_nonpositive_integer(const HPReal& x) { return is_integer(x) && x.sign() <= 0; }

double to_double(const HPReal& x) { return mpfr_get_d(x.get(), RND); }

double log10_abs(const HPReal& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  if (!x.is_finite()) return std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.get(), RND);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398120;
}

std::string to_sci(const HPReal& x, int significant) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", std::max(significant - 1, 0), x.get());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

std::string to_fixed(const HPReal& x, int decimals) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rf", std::max(decimals, 0), x.get());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

// ------------------------------------------------------------- HPComplex

HPComplex::HPComplex() : re(0L), im(0L) {}
HPComplex::HPComplex(const HPReal& r) : re(r), im(0L, r.digits()) {}
HPComplex::HPComplex(const HPReal& r, const HPReal& i) : re(r), im(i) {
  if (re.digits() < im.digits()) re = re.with_digits(im.digits());
  if (im.digits() < re.digits()) im = im.with_digits(re.digits());
}

HPComplex HPComplex::with_digits(int digits) const { return {re.with_digits(digits), im.with_digits(digits)}; }

HPComplex& HPComplex::operator+=(const HPComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
HPComplex& HPComplex::operator-=(const HPComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
HPComplex& HPComplex::operator*=(const HPComplex& o) {
  *this = *this * o;
  return *this;
}
HPComplex& HPComplex::operator*=(const HPReal& o) {
  re *= o;
  im *= o;
  return *this;
}
HPComplex HPComplex::operator-() const { return {-re, -im}; }

HPComplex operator+(const HPComplex& a, const HPComplex& b) { return {a.re + b.re, a.im + b.im}; }
HPComplex operator-(const HPComplex& a, const HPComplex& b) { return {a.re - b.re, a.im - b.im}; }
HPComplex operator*(const HPComplex& a, const HPComplex& b) {
  if (a.im.is_zero()) return b * a.re;
  if (b.im.is_zero()) return a * b.re;
  // three real products instead of four
  HPReal k1 = b.re * (a.re + a.im);
  HPReal k2 = a.re * (b.im - b.re);
  HPReal k3 = a.im * (b.re + b.im);
  return {k1 - k3, k1 + k2};
}
HPComplex operator*(const HPComplex& a, const HPReal& b) { return {a.re * b, a.im * b}; }
HPComplex operator*(const HPReal& b, const HPComplex& a) { return a * b; }
HPComplex operator/(const HPComplex& a, const HPComplex& b) {
  HPReal d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
HPComplex operator/(const HPComplex& a, const HPReal& b) { return {a.re / b, a.im / b}; }

HPReal abs(const HPComplex& z) {
  HPReal r(0L, z.digits());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), RND);
  return r;
}

HPReal arg(const HPComplex& z) { return atan2(z.im, z.re); }
HPComplex conj(const HPComplex& z) { return {z.re, -z.im}; }

HPComplex polar(const HPReal& r, const HPReal& theta) {
  int d = std::max(r.digits(), theta.digits());
  HPReal s(0L, d), c(0L, d);
  mpfr_sin_cos(s.get(), c.get(), theta.get(), RND);
  return {r * c, r * s};
}

HPComplex exp(const HPComplex& z) { return polar(exp(z.re), z.im); }

// -------------------------------------------------------------- RayPoint

RayPoint::RayPoint(const HPReal& r_, const HPReal& theta_) : r(r_), theta(theta_) {
  if (!(r.sign() > 0)) throw InvalidParams("RayPoint modulus must be positive");
}

RayPoint RayPoint::from_pi(const HPReal& r, const BigRational& theta_over_pi) {
  HPReal t(theta_over_pi, r.digits());
  return RayPoint(r, t * pi(r.digits()));
}

HPComplex RayPoint::to_complex() const { return polar(r, theta); }

RayPoint RayPoint::rotated(const HPReal& dtheta) const { return RayPoint(r, theta + dtheta); }

RayPoint RayPoint::rotated_pi(long k) const { return RayPoint(r, theta + pi(digits()) * k); }

RayPoint RayPoint::with_digits(int digits) const {
  return RayPoint(r.with_digits(digits), theta.with_digits(digits));
}

HPComplex ray_power(const RayPoint& z, const HPReal& e) {
  if (mpfr_cmp_ui(e.get(), 1) == 0) return z.to_complex();
  return polar(pow(z.r, e), e * z.theta);
}

// ---------------------------------------------------------- BigRational

BigRational parse_rational(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InvalidParams("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigRational n = parse_rational(s.substr(0, slash));
    BigRational d = parse_rational(s.substr(slash + 1));
    if (d == 0) throw InvalidParams("zero denominator in '" + raw + "'");
    BigRational q = n / d;
    q.canonicalize();
    return q;
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool dot = false;
  bool any = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i];
      any = true;
      if (dot) ++frac;
    } else {
      throw InvalidParams("not a rational number: '" + raw + "'");
    }
  }
  if (!any) throw InvalidParams("not a rational number: '" + raw + "'");
  long ex = 0;
  if (i < s.size()) {
    std::string e = s.substr(i + 1);
    try {
      size_t used = 0;
      ex = std::stol(e, &used);
      if (used != e.size()) throw InvalidParams("bad exponent");
    } catch (const std::logic_error&) {
      throw InvalidParams("not a rational number: '" + raw + "'");
    }
  }
  mpz_class num(digits, 10);
  long scale = ex - frac;
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  BigRational q = scale >= 0 ? BigRational(num * p) : BigRational(num, p);
  q.canonicalize();
  return neg ? BigRational(-q) : q;
}

std::string to_string(const BigRational& q) { return q.get_str(); }

bool is_integer(const BigRational& q) { return q.get_den() == 1; }
bool is_nonpositive_integer(const BigRational& q) { return is_integer(q) && sgn(q) <= 0; }

BigRational floor(const BigRational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return BigRational(f);
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar() : v_(BigRational(0)) {}
Scalar::Scalar(int v) : v_(BigRational(v)) {}
Scalar::Scalar(long v) : v_(BigRational(v)) {}
Scalar::Scalar(const BigRational& q) : v_(q) { std::get<BigRational>(v_).canonicalize(); }
Scalar::Scalar(const HPReal& x) : v_(x) {}

Scalar Scalar::parse(const std::string& s) { return Scalar(parse_rational(s)); }

const BigRational& Scalar::rational() const {
  if (!exact()) throw InvalidParams("parameter is not rational");
  return std::get<BigRational>(v_);
}

HPReal Scalar::real(int digits) const {
  if (exact()) return HPReal(std::get<BigRational>(v_), digits);
  return std::get<HPReal>(v_).with_digits(digits);
}

std::string Scalar::str() const {
  if (exact()) return to_string(std::get<BigRational>(v_));
  return to_sci(std::get<HPReal>(v_), 20);
}

int Scalar::sign() const {
  if (exact()) return sgn(std::get<BigRational>(v_));
  return std::get<HPReal>(v_).sign();
}

namespace {

int real_digits(const Scalar& a, const Scalar& b) {
  int d = default_digits();
  d = std::max({d, a.digits(), b.digits()});
  return d;
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return Scalar(BigRational(a.rational() + b.rational()));
  int d = real_digits(a, b);
  return Scalar(a.real(d) + b.real(d));
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return Scalar(BigRational(a.rational() - b.rational()));
  int d = real_digits(a, b);
  return Scalar(a.real(d) - b.real(d));
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return Scalar(BigRational(a.rational() * b.rational()));
  int d = real_digits(a, b);
  return Scalar(a.real(d) * b.real(d));
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw InvalidParams("division by zero");
  if (a.exact() && b.exact()) return Scalar(BigRational(a.rational() / b.rational()));
  int d = real_digits(a, b);
  return Scalar(a.real(d) / b.real(d));
}
Scalar Scalar::operator-() const { return Scalar(0) - *this; }

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return a.rational() == b.rational();
  int d = real_digits(a, b);
  return a.real(d) == b.real(d);
}

// ------------------------------------------------------------- Bernoulli

namespace {

std::mutex g_bern_mutex;
std::vector<BigRational> g_bern;  // g_bern[k-1] = B_{2k}

void ensure_bernoulli(int n) {
  if (static_cast<int>(g_bern.size()) >= n) return;
  int m = std::max(n, 2 * static_cast<int>(g_bern.size()));
  // Tangent numbers T_1..T_m, then B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1)).
  std::vector<mpz_class> t(m + 1);
  t[1] = 1;
  for (int k = 2; k <= m; ++k) t[k] = (k - 1) * t[k - 1];
  for (int k = 2; k <= m; ++k)
    for (int j = k; j <= m; ++j) t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j];
  std::vector<BigRational> out(m);
  for (int k = 1; k <= m; ++k) {
    mpz_class four;
    mpz_ui_pow_ui(four.get_mpz_t(), 4, static_cast<unsigned long>(k));
    BigRational b(mpz_class(2 * k * t[k]), mpz_class(four * (four - 1)));
    b.canonicalize();
    out[k - 1] = (k % 2 == 1) ? b : BigRational(-b);
  }
  g_bern = std::move(out);
}

}  // namespace

BigRational bernoulli_even(int k) {
  if (k < 1) throw InvalidParams("bernoulli_even needs k >= 1");
  std::lock_guard<std::mutex> lock(g_bern_mutex);
  ensure_bernoulli(k);
  return g_bern[k - 1];
}

std::vector<BigRational> bernoulli_even_table(int n) {
  std::lock_guard<std::mutex> lock(g_bern_mutex);
  ensure_bernoulli(n);
  return {g_bern.begin(), g_bern.begin() + n};
}

// ----------------------------------------------------------------- Gamma

namespace {

// Stirling series for x > 0 after shifting x up to at least the working
// precision in digits.
HPReal gamma_stirling(const Scalar& x0, int digits) {
  int shift_digits = digits + 8;
  long target = std::max(shift_digits, 12);
  long n = 0;
  double xd = to_double(x0.real(kMinDigits));
  if (xd < target) n = static_cast<long>(std::ceil(target - xd));
  int w = digits + 10 + static_cast<int>(std::log10(double(target + n) + 10.0) * 2);
  HPReal x = x0.real(w);
  HPReal y = x + n;

  HPReal lg = (y - HPReal(BigRational(1, 2), w)) * log(y) - y + log(pi(w) * 2) / 2;
  HPReal y2 = y * y;
  HPReal ypow = y;  // y^(2k-1)
  HPReal eps = pow10(-(w + 2), w);
  for (int k = 1;; ++k) {
    BigRational c = bernoulli_even(k) / BigRational(2 * k * (2 * k - 1));
    HPReal term = HPReal(c, w) / ypow;
    lg += term;
    if (abs(term) < eps) break;
    if (k > 4 * w) throw NoConvergence("Stirling series did not converge");
    ypow *= y2;
  }
  HPReal g = exp(lg);
  if (n > 0) {
    HPReal prod(1L, w);
    for (long i = 0; i < n; ++i) prod *= x + i;
    g /= prod;
  }
  return g.with_digits(digits);
}

// Gamma(x) = gamma(x, N) + Gamma(x, N) with the upper part below the target
// precision; gamma(x, N) = N^x e^{-N} sum_k N^k / (x (x+1) ... (x+k)).
// Intended for 1 <= x < 2; when x is an exact rational the series steps
// are multiplications by machine integers.
HPReal gamma_incomplete(const Scalar& x, int digits) {
  int w = digits + 15;
  double lnN = std::log(w * 2.302585092994046 + 50.0);
  unsigned long N = static_cast<unsigned long>(std::ceil(w * 2.302585092994046 + 3 * lnN + 20));
  w += static_cast<int>(std::log10(double(N)) * 2) + 2;
  HPReal xr = x.real(w);
  bool small_rational = false;
  unsigned long p = 0, q = 0;
  if (x.exact()) {
    const BigRational& xq = x.rational();
    if (xq.get_num().fits_ulong_p() && xq.get_den().fits_ulong_p() && xq.get_den() < (1UL << 20) &&
        xq.get_num() < (1UL << 30)) {
      small_rational = true;
      p = xq.get_num().get_ui();
      q = xq.get_den().get_ui();
    }
  }
  HPReal term = HPReal(1L, w) / xr;
  HPReal sum = term;
  mpfr_exp_t bits = static_cast<mpfr_exp_t>(digits_to_bits(w)) + 8;
  for (unsigned long k = 1;; ++k) {
    if (small_rational) {
      mpfr_mul_ui(term.get(), term.get(), N, RND);
      mpfr_mul_ui(term.get(), term.get(), q, RND);
      mpfr_div_ui(term.get(), term.get(), p + k * q, RND);
    } else {
      term *= static_cast<long>(N);
      term /= xr + static_cast<long>(k);
    }
    sum += term;
    if (k > N && mpfr_get_exp(term.get()) < mpfr_get_exp(sum.get()) - bits) break;
  }
  HPReal Nr(static_cast<long>(N), w);
  HPReal pref = exp(xr * log(Nr) - Nr);
  return (pref * sum).with_digits(digits);
}

HPReal gamma_positive(const Scalar& x, int digits) {
  if (digits <= kStirlingMaxDigits) return gamma_stirling(x, digits);
  // Reduce to [1, 2) by the recurrence; the product is cheap next to the series.
  int w = digits + 10;
  if (x.exact()) {
    BigRational q = x.rational();
    BigRational f = q - floor(q) + 1;
    HPReal g = gamma_incomplete(Scalar(f), w);
    if (q < 1) return (g / HPReal(q, w)).with_digits(digits);
    mpz_class num = 1, den = 1;
    for (BigRational t = f; t < q; t += 1) {
      num *= t.get_num();
      den *= t.get_den();
      if (mpz_sizeinbase(num.get_mpz_t(), 2) > 4096) {
        g.mul_z(num);
        g.div_z(den);
        num = 1;
        den = 1;
      }
    }
    g.mul_z(num);
    g.div_z(den);
    return g.with_digits(digits);
  }
  HPReal xr = x.real(w);
  HPReal f = xr - floor(xr) + 1;
  HPReal g = gamma_incomplete(Scalar(f), w);
  if (xr < HPReal(1L, w)) return (g / xr).with_digits(digits);
  for (HPReal t = f; t < xr - HPReal(BigRational(1, 2), w); t += HPReal(1L, w)) g *= t;
  return g.with_digits(digits);
}

// sin(pi x) computed from the fractional part so large |x| does not cost
// accuracy.
HPReal sin_pi(const Scalar& x, int digits) {
  if (x.exact()) {
    BigRational q = x.rational();
    BigRational fl = floor(q);
    BigRational f = q - fl;
    HPReal s = sin(pi(digits) * HPReal(f, digits));
    mpz_class n = fl.get_num();
    if (mpz_odd_p(n.get_mpz_t())) s = -s;
    return s;
  }
  int w = digits + std::max(0, static_cast<int>(log10_abs(x.real(kMinDigits)))) + 5;
  HPReal xr = x.real(w);
  HPReal fl = floor(xr);
  HPReal s = sin(pi(w) * (xr - fl));
  HPReal half = fl / 2;
  if (!is_integer(half)) s = -s;
  return s.with_digits(digits);
}

HPReal gamma_any(const Scalar& x, int digits) {
  if (x.exact() ? is_nonpositive_integer(x.rational()) : is_nonpositive_integer(x.real(digits)))
    throw PoleError("gamma pole at " + x.str());
  bool reflect = x.exact() ? x.rational() < BigRational(1, 2) : x.real(digits) < HPReal(BigRational(1, 2), digits);
  if (!reflect) return gamma_positive(x, digits);
  int w = digits + 10;
  HPReal s = sin_pi(x, w);
  HPReal g = gamma_positive(Scalar(1) - x, w);
  return (pi(w) / (s * g)).with_digits(digits);
}

}  // namespace

HPReal hp_gamma(const Scalar& x, int digits) { return gamma_any(x, digits); }

HPReal hp_recip_gamma(const Scalar& x, int digits) {
  if (x.exact() ? is_nonpositive_integer(x.rational()) : is_nonpositive_integer(x.real(digits)))
    return HPReal(0L, digits);
  HPReal g = gamma_any(x, digits + 2);
  return (HPReal(1L, digits + 2) / g).with_digits(digits);
}

HPReal hp_gamma(const HPReal& x) { return gamma_any(Scalar(x), x.digits()); }
HPReal hp_gamma(const BigRational& x, int digits) { return gamma_any(Scalar(x), digits); }
HPReal hp_recip_gamma(const HPReal& x) { return hp_recip_gamma(Scalar(x), x.digits()); }
HPReal hp_recip_gamma(const BigRational& x, int digits) { return hp_recip_gamma(Scalar(x), digits); }

// ------------------------------------------------------------------- erf

HPReal hp_erf(const HPReal& x0) {
  int digits = x0.digits();
  if (x0.is_zero()) return HPReal(0L, digits);
  if (x0.sign() < 0) return -hp_erf(-x0);
  double xd = to_double(x0);
  int w = digits + 10;
  double cutoff = std::max(3.0, std::sqrt(double(w)) / 2);
  if (xd * xd > (w + 5) * 2.302585092994046) return HPReal(1L, digits);
  if (xd < cutoff) {
    // Maclaurin: erf x = 2/sqrt(pi) sum (-1)^n x^{2n+1} / (n! (2n+1)).
    w += static_cast<int>(std::ceil(0.4343 * xd * xd)) + 5;
    HPReal x = x0.with_digits(w);
    HPReal x2 = x * x;
    HPReal p = x;  // (-1)^n x^{2n+1} / n!
    HPReal sum = x;
    HPReal eps = pow10(-(w + 2), w);
    for (long n = 1;; ++n) {
      p *= x2;
      p /= -n;
      HPReal t = p / (2 * n + 1);
      sum += t;
      if (abs(t) < eps * abs(sum)) break;
    }
    return (sum * 2 / sqrt(pi(w))).with_digits(digits);
  }
  // erfc x = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
  HPReal x = x0.with_digits(w);
  HPReal tiny = pow10(-(2 * w), w);
  HPReal f = x;
  HPReal C = f, D(0L, w);
  HPReal eps = pow10(-(w + 2), w);
  for (long n = 1; n < 10000000; ++n) {
    HPReal a = HPReal(n, w) / 2;
    D = x + a * D;
    if (D.is_zero()) D = tiny;
    D = HPReal(1L, w) / D;
    C = x + a / C;
    if (C.is_zero()) C = tiny;
    HPReal delta = C * D;
    f *= delta;
    if (abs(delta - 1) < eps) break;
  }
  HPReal erfc = exp(-(x * x)) / sqrt(pi(w)) / f;
  return (HPReal(1L, w) - erfc).with_digits(digits);
}

// --------------------------------------------------------- GammaSequence

namespace {

constexpr long kMaxLanes = 64;
constexpr long kMaxJump = 64;

}  // namespace

GammaSequence::GammaSequence(const Scalar& x0, const Scalar& step, bool reciprocal, int digits)
    : x0_(x0), step_(step), reciprocal_(reciprocal), digits_(digits), work_(digits + 12) {
  if (x0.exact() && step.exact()) {
    const BigRational& s = step.rational();
    if (s.get_den().fits_slong_p() && s.get_num().fits_slong_p()) {
      long v = s.get_den().get_si();
      long u = s.get_num().get_si();
      if (v <= kMaxLanes && std::labs(u) <= kMaxJump && u != 0) {
        lanes_ = true;
        period_ = v;
        jump_ = u;
      }
    }
  }
}

HPReal GammaSequence::direct(const Scalar& arg) const {
  if (reciprocal_) return hp_recip_gamma(arg, work_);
  return hp_gamma(arg, work_);
}

HPReal GammaSequence::next() {
  long k = k_++;
  if (!lanes_) {
    Scalar arg = x0_ + step_ * Scalar(k);
    return direct(arg).with_digits(digits_);
  }
  long l = k % period_;
  if (k < period_) {
    Lane lane;
    lane.arg = x0_.rational() + step_.rational() * k;
    lane.pole = is_nonpositive_integer(lane.arg);
    if (!(lane.pole && !reciprocal_)) lane.value = direct(Scalar(lane.arg));
    lane_.push_back(std::move(lane));
  } else {
    Lane& lane = lane_[l];
    BigRational from = lane.arg;
    lane.arg += jump_;
    bool was_pole = lane.pole;
    lane.pole = is_nonpositive_integer(lane.arg);
    if (lane.pole) {
      if (reciprocal_) lane.value = HPReal(0L, work_);
    } else if (was_pole) {
      lane.value = direct(Scalar(lane.arg));
    } else {
      // Gamma(from + u) = Gamma(from) (from)_u ; Gamma(from - m) = Gamma(from) / prod_{i=1..m} (from - i).
      mpz_class num = 1, den = 1;
      const mpz_class& p = from.get_num();
      const mpz_class& q = from.get_den();
      if (jump_ > 0) {
        for (long i = 0; i < jump_; ++i) {
          num *= p + i * q;
          den *= q;
        }
      } else {
        for (long i = 1; i <= -jump_; ++i) {
          num *= p - i * q;
          den *= q;
        }
      }
      bool multiply = (jump_ > 0) != reciprocal_;
      if (multiply) {
        lane.value.mul_z(num);
        lane.value.div_z(den);
      } else {
        lane.value.mul_z(den);
        lane.value.div_z(num);
      }
    }
  }
  const Lane& cur = lane_[l];
  if (cur.pole && !reciprocal_) throw PoleError("gamma pole at " + to_string(cur.arg));
  return cur.value.with_digits(digits_);
}

}  // namespace wright
