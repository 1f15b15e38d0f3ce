#include "wright/coefficients.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

namespace wright {

namespace {

std::mutex g_stirling_mutex;
std::vector<BigRational> g_stirling;

template <class T>
T field(const BigRational& q);
template <>
BigRational field<BigRational>(const BigRational& q) {
  return q;
}
template <>
HPReal field<HPReal>(const BigRational& q) {
  return HPReal(q, default_digits());
}

template <class T>
T field(const Scalar& s);
template <>
BigRational field<BigRational>(const Scalar& s) {
  return s.rational();
}
template <>
HPReal field<HPReal>(const Scalar& s) {
  return s.real(default_digits());
}

BigRational binomial(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return BigRational(r);
}

template <class T>
Series<T> e_factor(const T& alpha, const T& a, const T& kappa, int M) {
  // log(1 + (a/alpha) u) to order M+2, u = 1/s.
  T ratio = a / alpha;
  std::vector<T> L(static_cast<size_t>(M + 2), T(0));
  T p = ratio;
  for (int n = 1; n < M + 2; ++n) {
    L[n] = (n % 2 == 1 ? p : T(-p)) / T(n);
    p = p * ratio;
  }
  Series<T> ex(M);
  T shift = a - field<T>(BigRational(1, 2));
  for (int n = 0; n < M; ++n) ex[n] = alpha * L[n + 1] + shift * L[n];
  if (M > 0) ex[0] = T(0);  // alpha L_1 - a vanishes identically
  return ex.scaled(kappa).exp();
}

template <class T>
Series<T> gamma_star(const T& alpha, const T& a, const T& kappa, int M) {
  std::vector<BigRational> gam = stirling_coeffs(std::max(M, 1));
  T ratio = a / alpha;
  std::vector<T> rpow(static_cast<size_t>(M + 1), T(1));
  for (int m = 1; m <= M; ++m) rpow[m] = rpow[m - 1] * ratio;
  Series<T> r(M);
  T alpha_inv_k(1);
  for (int k = 0; k < M; ++k) {
    T c = field<T>(k % 2 == 0 ? gam[k] : BigRational(-gam[k])) * alpha_inv_k;
    for (int m = 0; k + m < M; ++m) {
      // binom(-k, m) = (-1)^m binom(k+m-1, m)
      BigRational bn = k == 0 ? BigRational(m == 0 ? 1 : 0) : binomial(k + m - 1, m);
      if (m % 2 == 1) bn = -bn;
      if (bn == 0) continue;
      r[k + m] += c * field<T>(bn) * rpow[m];
    }
    alpha_inv_k = alpha_inv_k / alpha;
  }
  return r.scaled(kappa);
}

template <class T>
Series<T> factor(const T& alpha, const T& a, const T& kappa, int M) {
  return e_factor(alpha, a, kappa, M) * gamma_star(alpha, a, kappa, M);
}

template <class T>
Series<T> product_series(const WrightParams& params, int M) {
  T kappa = field<T>(kappa_of(params));
  T thp = T(1) - field<T>(theta_of(params));
  Series<T> C = Series<T>::one(M);
  for (const auto& g : params.upper) C = C * factor(field<T>(g.scale), field<T>(g.shift), kappa, M);
  for (const auto& g : params.lower) C = C * factor(field<T>(g.scale), field<T>(g.shift), kappa, M).inverse();
  C = C * factor(kappa, thp, kappa, M);
  C = C * factor(T(1), T(1), kappa, M).inverse();
  return C;
}

// B_k^{(sigma)}(x) for sigma = 0, -1, ..., sigma_min and k < kmax, built by
// repeated multiplication with (e^t - 1)/t.
template <class T>
class GenBernoulliTable {
 public:
  GenBernoulliTable(const T& x, int kmax, long sigma_min) : kmax_(kmax) {
    Series<T> base(kmax);
    Series<T> p(kmax);
    T fact(1);
    T xp(1);
    for (int n = 0; n < kmax; ++n) {
      if (n > 0) fact = fact * T(n);
      base[n] = T(1) / (fact * T(n + 1));
      p[n] = xp / fact;
      xp = xp * x;
    }
    factorial_.assign(static_cast<size_t>(kmax), T(1));
    for (int n = 1; n < kmax; ++n) factorial_[n] = factorial_[n - 1] * T(n);
    for (long s = 0; s >= sigma_min; --s) {
      rows_.push_back(p);
      p = p * base;
    }
  }

  T operator()(int k, long sigma) const { return rows_[static_cast<size_t>(-sigma)][k] * factorial_[k]; }

 private:
  int kmax_;
  std::vector<Series<T>> rows_;
  std::vector<T> factorial_;
};

template <class T>
std::vector<T> recursion(const Series<T>& C, const T& thp, int J) {
  std::vector<T> c{T(1)};
  GenBernoulliTable<T> B(thp, std::max(J, 1), std::min(0, 2 - J));
  for (int j = 1; j <= J; ++j) {
    T s = C[j];
    for (int k = 1; k < j; ++k) {
      T term = field<T>(binomial(j - 1, k)) * c[j - k] * B(k, k - j + 1);
      if (k % 2 == 1)
        s += term;
      else
        s -= term;
    }
    c.push_back(s);
  }
  return c;
}

struct CacheKey {
  std::string params;
  int J;
  bool exact;
  bool operator<(const CacheKey& o) const {
    return std::tie(params, J, exact) < std::tie(o.params, o.J, o.exact);
  }
};

std::shared_mutex g_cache_mutex;
std::map<CacheKey, std::shared_ptr<const CoefficientSet>> g_cache;

std::shared_ptr<const CoefficientSet> compute_coefficients(const WrightParams& params, int J) {
  auto set = std::make_shared<CoefficientSet>();
  set->params_hash = params.key();
  set->exact = params.exact();
  set->A0 = derive_constants(params).A0;
  if (set->exact) {
    RationalSeries C = product_series<BigRational>(params, J + 1);
    BigRational thp = BigRational(1) - theta_of(params).rational();
    set->c = recursion(C, thp, J);
  } else {
    PrecisionScope scope(50 + 10 * J);
    RealSeries C = product_series<HPReal>(params, J + 1);
    HPReal thp = HPReal(1L) - theta_of(params).real(default_digits());
    set->c_real = recursion(C, thp, J);
  }
  return set;
}

}  // namespace

std::vector<BigRational> stirling_coeffs(int K) {
  if (K < 1) throw InvalidParams("stirling_coeffs needs K >= 1");
  std::lock_guard<std::mutex> lock(g_stirling_mutex);
  if (static_cast<int>(g_stirling.size()) < K) {
    int m = std::max(K, 2 * static_cast<int>(g_stirling.size()));
    // log Gamma*(z) = sum B_{2k} / (2k (2k-1)) z^{1-2k}
    RationalSeries lg(m);
    std::vector<BigRational> b = bernoulli_even_table(m / 2 + 1);
    for (int k = 1; 2 * k - 1 < m; ++k) lg[2 * k - 1] = b[k - 1] / BigRational(2 * k * (2 * k - 1));
    RationalSeries e = lg.exp();
    g_stirling.assign(static_cast<size_t>(m), BigRational(0));
    for (int k = 0; k < m; ++k) g_stirling[k] = k % 2 == 0 ? e[k] : BigRational(-e[k]);
  }
  return {g_stirling.begin(), g_stirling.begin() + K};
}

BigRational gen_bernoulli(int k, long sigma, const BigRational& x) {
  if (sigma > 0) throw UnsupportedSigma("generalised Bernoulli polynomials are only built for sigma <= 0");
  if (k < 0) throw InvalidParams("gen_bernoulli needs k >= 0");
  GenBernoulliTable<BigRational> table(x, k + 1, sigma);
  return table(k, sigma);
}

RationalSeries e_factor_series(const BigRational& alpha, const BigRational& a, int M, const BigRational& kappa) {
  if (alpha <= 0) throw InvalidParams("e_factor_series needs alpha > 0");
  return e_factor(alpha, a, kappa, M);
}

RationalSeries gamma_star_series(const BigRational& alpha, const BigRational& a, int M, const BigRational& kappa) {
  if (alpha <= 0) throw InvalidParams("gamma_star_series needs alpha > 0");
  return gamma_star(alpha, a, kappa, M);
}

RationalSeries product_series_C(const WrightParams& params, int M) {
  if (!params.exact()) throw InvalidParams("product_series_C needs rational parameters");
  return product_series<BigRational>(params, M);
}

RealSeries e_factor_series_real(const HPReal& alpha, const HPReal& a, int M, const HPReal& kappa) {
  PrecisionScope scope(std::max({alpha.digits(), a.digits(), kappa.digits()}));
  return e_factor(alpha, a, kappa, M);
}

RealSeries gamma_star_series_real(const HPReal& alpha, const HPReal& a, int M, const HPReal& kappa) {
  PrecisionScope scope(std::max({alpha.digits(), a.digits(), kappa.digits()}));
  return gamma_star(alpha, a, kappa, M);
}

RealSeries product_series_real(const WrightParams& params, int M) { return product_series<HPReal>(params, M); }

HPReal CoefficientSet::coefficient(int j, int digits) const {
  if (exact) return HPReal(c.at(static_cast<size_t>(j)), digits);
  return c_real.at(static_cast<size_t>(j)).with_digits(digits);
}

bool CoefficientSet::is_zero(int j) const {
  return exact ? c.at(static_cast<size_t>(j)) == 0 : c_real.at(static_cast<size_t>(j)).is_zero();
}

std::shared_ptr<const CoefficientSet> solve_coefficients(const WrightParams& params, int J) {
  if (J < 0 || J > kMaxCoefficients)
    throw InvalidParams("coefficient count J must lie in [0, " + std::to_string(kMaxCoefficients) + "]");
  params.validate();
  Scalar kap = kappa_of(params);
  if (kap.sign() <= 0) throw KappaNonPositive("kappa = " + kap.str() + " must be positive");
  CacheKey key{params.key(), J, params.exact()};
  {
    std::shared_lock<std::shared_mutex> lock(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  auto set = compute_coefficients(params, J);
  std::unique_lock<std::shared_mutex> lock(g_cache_mutex);
  return g_cache.emplace(key, set).first->second;
}

Scalar c1_closed_form(const WrightParams& params) {
  Scalar kappa = kappa_of(params);
  Scalar th = theta_of(params);
  Scalar A = -(th * (Scalar(1) - th)) / kappa;
  Scalar B = Scalar(1) / kappa - Scalar(1);
  for (const auto& g : params.upper) {
    A = A + g.shift * (g.shift - Scalar(1)) / g.scale;
    B = B + Scalar(1) / g.scale;
  }
  for (const auto& g : params.lower) {
    A = A - g.shift * (g.shift - Scalar(1)) / g.scale;
    B = B - Scalar(1) / g.scale;
  }
  return kappa * (A + B / Scalar(6)) / Scalar(2);
}

}  // namespace wright
