#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wright/coefficients.hpp"
#include "wright/direct_series.hpp"

namespace wright {

struct TruncationSpec {
  enum class Mode { Fixed, Optimal };
  Mode mode = Mode::Optimal;
  int count = 64;  // J for fixed (J+1 terms), cap for optimal

  static TruncationSpec fixed(int J) { return {Mode::Fixed, J}; }
  static TruncationSpec optimal(int cap = 64) { return {Mode::Optimal, cap}; }
  int max_terms() const { return mode == Mode::Fixed ? count + 1 : count; }
  std::string str() const;
};

enum class StokesPolicy { IncludeBelow, DropAbove };

struct SectorConfig {
  HPReal epsilon = pi(50) / 180;
  StokesPolicy policy = StokesPolicy::IncludeBelow;
  // Switch the secondary exponential E(z e^{-+2 pi i}) on only past its own
  // Stokes line when 1 < kappa < 2.
  bool switch_secondary = true;
  // Which expansion switches the secondary on.  With an algebraic series
  // present the secondary is maximally subdominant to H at pi (2 - kappa);
  // without one (p = 0) E(z) switches it at pi (2 - kappa)/2.
  // asymptotic_eval sets this from the parameters.
  bool secondary_from_algebraic = true;

  void validate() const;
};

struct ExpansionTermLog {
  std::vector<double> log10_magnitudes;  // every term examined
  int terms_used = 0;
  HPReal smallest_term;  // magnitude of the last retained term
  HPReal peak_term;
  bool no_minimum_found = false;
  bool divergent_from_start = false;
};

struct TruncationResult {
  HPComplex partial_sum;
  int index = 0;  // number of terms summed
  HPReal smallest_term;
  bool no_minimum_found = false;
};

// Sums terms up to and including the smallest non-dip term among the
// first cap.  A dip is an exactly zero term or one below a tenth of both
// neighbours; an all-zero tail ends the series.
TruncationResult optimal_truncate(const std::vector<HPComplex>& terms, int cap);

// Streaming form of optimal_truncate, which never holds more than the
// current best partial sum.
class OptimalTruncator {
 public:
  explicit OptimalTruncator(int cap, int digits);
  // Returns false once further terms cannot change the outcome.
  bool push(const HPComplex& term);
  TruncationResult finish();
  const std::vector<double>& log10_magnitudes() const { return mags_; }

 private:
  void consider(long j);

  int cap_;
  std::vector<double> mags_;
  HPComplex sum_;
  HPComplex prev_sum_;  // partial sum through term n-2 (candidate awaiting its right neighbour)
  HPComplex best_sum_;
  HPComplex last_nonzero_sum_;
  long best_ = -1;
  double best_mag_ = 0;
  long last_nonzero_ = -1;
  long zero_run_ = 0;
};

std::pair<HPComplex, ExpansionTermLog> exp_expansion_E(const WrightParams& params, const CoefficientSet& coeffs,
                                                       const RayPoint& z, const TruncationSpec& trunc);

std::pair<HPComplex, ExpansionTermLog> alg_expansion_H(const WrightParams& params, const RayPoint& z_shifted,
                                                       const TruncationSpec& trunc);

bool has_third_series(const WrightParams& params);
std::pair<HPComplex, ExpansionTermLog> third_exp_series_logged(const WrightParams& params,
                                                               const CoefficientSet& coeffs, const RayPoint& z,
                                                               const TruncationSpec& trunc);
HPComplex third_exp_series(const WrightParams& params, const CoefficientSet& coeffs, const RayPoint& z,
                           const TruncationSpec& trunc);

enum class ExpansionKind { Exponential, Algebraic, ThirdExponential };

struct PlanComponent {
  ExpansionKind kind;
  long shift;  // E: z e^{2 pi i n}; H and the third series: z e^{k pi i}
  BigRational weight;
};

struct CompositionPlan {
  std::vector<PlanComponent> components;
  bool on_stokes_line = false;
  bool heuristic = false;
  std::string describe() const;
};

CompositionPlan classify_sector(const HPReal& kappa, const HPReal& theta, const SectorConfig& cfg = {});

EvalReport asymptotic_eval(const WrightParams& params, const RayPoint& z, const TruncationSpec& trunc,
                           const SectorConfig& cfg = {});

struct MittagLefflerOptions {
  double direct_threshold = 15;  // use the series while |Z| = |z|^{1/a} is below this
  SectorConfig sector;
};

EvalReport mittag_leffler(const HPReal& a, const HPReal& b, const RayPoint& z, int target_digits,
                          const MittagLefflerOptions& opt = {});
EvalReport mittag_leffler(const Scalar& a, const Scalar& b, const RayPoint& z, int target_digits,
                          const MittagLefflerOptions& opt = {});

// 1/2 + erf(((pi a -+ theta)/a) sqrt(r/2))/2, sign following theta.
HPReal erf_smoothing_factor(const HPReal& a, const HPReal& theta, const HPReal& r);

}  // namespace wright
