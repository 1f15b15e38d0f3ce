#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wright/errors.hpp"

namespace wright {

using BigRational = mpq_class;

// Ambient working precision (decimal digits) for values built without an
// explicit precision.  Thread local, so concurrent callers do not interfere.
int default_digits();

class PrecisionScope {
 public:
  explicit PrecisionScope(int digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

constexpr int kMinDigits = 20;
mpfr_prec_t digits_to_bits(int digits);

class HPReal {
 public:
  HPReal();
  HPReal(int v);
  HPReal(long v);
  HPReal(long v, int digits);
  explicit HPReal(const BigRational& q, int digits = default_digits());
  explicit HPReal(const mpz_class& n, int digits = default_digits());
  static HPReal parse(const std::string& s, int digits = default_digits());
  static HPReal from_double(double d, int digits = default_digits());

  HPReal(const HPReal& o);
  HPReal(HPReal&& o) noexcept;
  HPReal& operator=(const HPReal& o);
  HPReal& operator=(HPReal&& o) noexcept;
  ~HPReal();

  int digits() const { return digits_; }
  // Copy rounded (or widened) to the given precision.
  HPReal with_digits(int digits) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  HPReal& operator+=(const HPReal& o);
  HPReal& operator-=(const HPReal& o);
  HPReal& operator*=(const HPReal& o);
  HPReal& operator/=(const HPReal& o);
  HPReal& operator*=(long k);
  HPReal& operator/=(long k);
  HPReal& mul_z(const mpz_class& k);
  HPReal& div_z(const mpz_class& k);
  HPReal operator-() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

 private:
  void widen_to(int digits);
  mpfr_t v_;
  int digits_;
};

HPReal operator+(const HPReal& a, const HPReal& b);
HPReal operator-(const HPReal& a, const HPReal& b);
HPReal operator*(const HPReal& a, const HPReal& b);
HPReal operator/(const HPReal& a, const HPReal& b);
HPReal operator*(const HPReal& a, long k);
HPReal operator*(long k, const HPReal& a);
HPReal operator/(const HPReal& a, long k);
HPReal operator+(const HPReal& a, long k);
HPReal operator-(const HPReal& a, long k);

bool operator==(const HPReal& a, const HPReal& b);
bool operator!=(const HPReal& a, const HPReal& b);
bool operator<(const HPReal& a, const HPReal& b);
bool operator>(const HPReal& a, const HPReal& b);
bool operator<=(const HPReal& a, const HPReal& b);
bool operator>=(const HPReal& a, const HPReal& b);

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal exp(const HPReal& x);
HPReal log(const HPReal& x);
HPReal log10(const HPReal& x);
HPReal pow(const HPReal& x, const HPReal& e);
HPReal sin(const HPReal& x);
HPReal cos(const HPReal& x);
HPReal atan2(const HPReal& y, const HPReal& x);
HPReal floor(const HPReal& x);
HPReal pi(int digits = default_digits());
HPReal max(const HPReal& a, const HPReal& b);
HPReal min(const HPReal& a, const HPReal& b);
HPReal pow10(long e, int digits = default_digits());
bool is_integer(const HPReal& x);
bool is_nonpositive_integer(const HPReal& x);
double to_double(const HPReal& x);
// log10|x| as a double, usable far outside double range; -inf for zero.
double log10_abs(const HPReal& x);

std::string to_sci(const HPReal& x, int significant);
std::string to_fixed(const HPReal& x, int decimals);

struct HPComplex {
  HPReal re;
  HPReal im;

  HPComplex();
  HPComplex(const HPReal& r);
  HPComplex(const HPReal& r, const HPReal& i);

  int digits() const { return re.digits(); }
  HPComplex with_digits(int digits) const;
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  HPComplex& operator+=(const HPComplex& o);
  HPComplex& operator-=(const HPComplex& o);
  HPComplex& operator*=(const HPComplex& o);
  HPComplex& operator*=(const HPReal& o);
  HPComplex operator-() const;
};

HPComplex operator+(const HPComplex& a, const HPComplex& b);
HPComplex operator-(const HPComplex& a, const HPComplex& b);
HPComplex operator*(const HPComplex& a, const HPComplex& b);
HPComplex operator*(const HPComplex& a, const HPReal& b);
HPComplex operator*(const HPReal& b, const HPComplex& a);
HPComplex operator/(const HPComplex& a, const HPComplex& b);
HPComplex operator/(const HPComplex& a, const HPReal& b);

HPReal abs(const HPComplex& z);
HPReal arg(const HPComplex& z);
HPComplex conj(const HPComplex& z);
HPComplex exp(const HPComplex& z);
HPComplex polar(const HPReal& r, const HPReal& theta);

// A point on the Riemann surface of log: the argument is never reduced.
struct RayPoint {
  HPReal r;
  HPReal theta;

  RayPoint(const HPReal& r, const HPReal& theta);
  // theta given in units of pi, the convention used by all the tables.
  static RayPoint from_pi(const HPReal& r, const BigRational& theta_over_pi);

  int digits() const { return std::max(r.digits(), theta.digits()); }
  HPComplex to_complex() const;
  RayPoint rotated(const HPReal& dtheta) const;
  RayPoint rotated_pi(long k) const;
  RayPoint with_digits(int digits) const;
};

HPComplex ray_power(const RayPoint& z, const HPReal& e);

BigRational parse_rational(const std::string& s);
std::string to_string(const BigRational& q);
bool is_integer(const BigRational& q);
bool is_nonpositive_integer(const BigRational& q);
BigRational floor(const BigRational& q);

// A parameter value: exact when it came from a rational, otherwise a real.
class Scalar {
 public:
  Scalar();
  Scalar(int v);
  Scalar(long v);
  Scalar(const BigRational& q);
  Scalar(const HPReal& x);
  // "p/q" and decimal strings are read exactly.
  static Scalar parse(const std::string& s);

  bool exact() const { return std::holds_alternative<BigRational>(v_); }
  const BigRational& rational() const;
  HPReal real(int digits = default_digits()) const;
  // Precision carried by a real value; 0 for rationals.
  int digits() const { return exact() ? 0 : std::get<HPReal>(v_).digits(); }
  std::string str() const;
  int sign() const;
  bool is_zero() const { return sign() == 0; }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<BigRational, HPReal> v_;
};

// B_{2k} for k >= 1, exact.
BigRational bernoulli_even(int k);
std::vector<BigRational> bernoulli_even_table(int n);

HPReal hp_gamma(const HPReal& x);
HPReal hp_gamma(const BigRational& x, int digits);
HPReal hp_recip_gamma(const HPReal& x);
HPReal hp_recip_gamma(const BigRational& x, int digits);
HPReal hp_gamma(const Scalar& x, int digits);
HPReal hp_recip_gamma(const Scalar& x, int digits);
HPReal hp_erf(const HPReal& x);

// Gamma values (or reciprocals) along x0, x0 + step, x0 + 2 step, ...
// Exact progressions with small denominators advance by rational
// Pochhammer factors instead of evaluating a fresh gamma per term.
class GammaSequence {
 public:
  GammaSequence(const Scalar& x0, const Scalar& step, bool reciprocal, int digits);
  HPReal next();
  long index() const { return k_; }

 private:
  struct Lane {
    BigRational arg;
    HPReal value;
    bool pole = false;
  };
  HPReal direct(const Scalar& arg) const;

  Scalar x0_, step_;
  bool reciprocal_;
  int digits_;
  int work_;
  long k_ = 0;
  bool lanes_ = false;
  long period_ = 1;
  long jump_ = 0;
  std::vector<Lane> lane_;
};

}  // namespace wright
