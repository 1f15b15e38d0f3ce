#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wright/params.hpp"

namespace wright {

// Truncated power series sum_{j<M} c_j x^j over BigRational or HPReal.
template <class T>
class Series {
 public:
  explicit Series(int order = 0) : c_(static_cast<size_t>(order), T(0)) {}

  static Series one(int order) {
    Series s(order);
    if (order > 0) s.c_[0] = T(1);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()); }
  T& operator[](int j) { return c_[static_cast<size_t>(j)]; }
  const T& operator[](int j) const { return c_[static_cast<size_t>(j)]; }
  const std::vector<T>& coeffs() const { return c_; }

  Series operator+(const Series& o) const {
    Series r(std::min(order(), o.order()));
    for (int j = 0; j < r.order(); ++j) r[j] = c_[j] + o[j];
    return r;
  }

  Series operator-(const Series& o) const {
    Series r(std::min(order(), o.order()));
    for (int j = 0; j < r.order(); ++j) r[j] = c_[j] - o[j];
    return r;
  }

  Series operator*(const Series& o) const {
    int m = std::min(order(), o.order());
    Series r(m);
    for (int i = 0; i < m; ++i) {
      if (c_[i] == T(0)) continue;
      for (int j = 0; i + j < m; ++j) r[i + j] += c_[i] * o[j];
    }
    return r;
  }

  Series operator*(const T& k) const {
    Series r(*this);
    for (auto& v : r.c_) v = v * k;
    return r;
  }

  // c_j -> c_j f^j, i.e. substitute x -> f x.
  Series scaled(const T& f) const {
    Series r(*this);
    T p(1);
    for (int j = 0; j < order(); ++j) {
      r[j] = r[j] * p;
      p = p * f;
    }
    return r;
  }

  // Multiplicative inverse; needs c_0 != 0.
  Series inverse() const {
    if (order() == 0) return *this;
    if (c_[0] == T(0)) throw InvalidParams("series inverse needs a nonzero constant term");
    Series r(order());
    r[0] = T(1) / c_[0];
    for (int n = 1; n < order(); ++n) {
      T s(0);
      for (int k = 1; k <= n; ++k) s += c_[k] * r[n - k];
      r[n] = -s / c_[0];
    }
    return r;
  }

  // exp of a series with zero constant term, from r' = a' r.
  Series exp() const {
    if (order() == 0) return *this;
    if (c_[0] != T(0)) throw InvalidParams("series exp needs a zero constant term");
    Series r(order());
    r[0] = T(1);
    for (int n = 1; n < order(); ++n) {
      T s(0);
      for (int k = 1; k <= n; ++k) s += T(k) * c_[k] * r[n - k];
      r[n] = s / T(n);
    }
    return r;
  }

 private:
  std::vector<T> c_;
};

using RationalSeries = Series<BigRational>;
using RealSeries = Series<HPReal>;

// gamma_0 .. gamma_{K-1}, with Gamma*(z) ~ sum (-1)^k gamma_k z^{-k}.
std::vector<BigRational> stirling_coeffs(int K);

// B_k^{(sigma)}(x) for sigma <= 0.
BigRational gen_bernoulli(int k, long sigma, const BigRational& x);

// e(alpha s; a) = exp[(alpha s + a - 1/2) log(1 + a/(alpha s)) - a] in powers of x = 1/(kappa s).
RationalSeries e_factor_series(const BigRational& alpha, const BigRational& a, int M,
                               const BigRational& kappa = BigRational(1));
// Gamma*(alpha s + a) in powers of x = 1/(kappa s).
RationalSeries gamma_star_series(const BigRational& alpha, const BigRational& a, int M,
                                 const BigRational& kappa = BigRational(1));
// R(s) Upsilon(s) = 1 + sum C_j x^j; needs rational parameters.
RationalSeries product_series_C(const WrightParams& params, int M);

RealSeries e_factor_series_real(const HPReal& alpha, const HPReal& a, int M, const HPReal& kappa);
RealSeries gamma_star_series_real(const HPReal& alpha, const HPReal& a, int M, const HPReal& kappa);
RealSeries product_series_real(const WrightParams& params, int M);

struct CoefficientSet {
  std::vector<BigRational> c;  // exact case
  std::vector<HPReal> c_real;  // irrational parameters
  HPReal A0;
  std::string params_hash;
  bool exact = true;

  int size() const { return exact ? static_cast<int>(c.size()) : static_cast<int>(c_real.size()); }
  HPReal coefficient(int j, int digits) const;
  bool is_zero(int j) const;
};

constexpr int kMaxCoefficients = 100;

// c_0 .. c_J, cached per (params, J, exactness).
std::shared_ptr<const CoefficientSet> solve_coefficients(const WrightParams& params, int J);

// kappa (A + B/6) / 2 from the closed-form sums A and B.
Scalar c1_closed_form(const WrightParams& params);

}  // namespace wright
