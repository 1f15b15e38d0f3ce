#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wright/expansions.hpp"

namespace wright {

// One expansion to subtract from (or compare against) the function value.
struct SubtractItem {
  ExpansionKind kind = ExpansionKind::Exponential;
  long branch = 0;  // E: z e^{2 pi i n}; H: z e^{k pi i}; ignored by the third series
  TruncationSpec trunc;
};

// A point kept exactly so every precision pass rebuilds it without loss.
struct PolarPoint {
  Scalar r;
  Scalar theta_over_pi;
  RayPoint at(int digits) const;
};

std::pair<HPComplex, ExpansionTermLog> evaluate_component(const WrightParams& params, const CoefficientSet& coeffs,
                                                          const RayPoint& z, const SubtractItem& item);

struct ResidualReport {
  HPComplex residual;
  HPComplex oracle;
  int digits = 0;  // precision of the final pass
  std::vector<ExpansionTermLog> logs;
  std::vector<std::string> flags;
};

// f(z) minus the listed expansions, with the precision raised until the
// residual keeps at least min_significant digits.
ResidualReport residual_report(const WrightParams& params, const PolarPoint& z, const std::vector<SubtractItem>& subtract,
                               int min_significant = 8);
HPComplex residual_after(const WrightParams& params, const PolarPoint& z, const std::vector<SubtractItem>& subtract);
// z is taken as exact at its own precision.
HPComplex residual_after(const WrightParams& params, const RayPoint& z, const std::vector<SubtractItem>& subtract);

// A0 Z_ref^theta e^{Z_ref}, Z_ref taken on the branch z e^{2 pi i n}.
HPComplex leading_term(const WrightParams& params, const RayPoint& z, long branch);

HPComplex stokes_multiplier(const WrightParams& params, const PolarPoint& z, long reference_branch,
                            const std::vector<SubtractItem>& subtract);

struct ScanConfig {
  std::string family;  // f1, f2, f3, ml or custom
  WrightParams params;
  Scalar modulus;
  std::vector<BigRational> theta_over_pi;
  int target_digits = 8;  // significant digits kept in each residual
  std::vector<SubtractItem> subtract;
  long reference_branch = 0;           // S denominator: leading term of E on this branch
  TruncationSpec reference_trunc = TruncationSpec::fixed(0);  // reference_abs column

  void validate() const;
};

struct StokesScanRow {
  BigRational theta_over_pi;
  HPReal residual_abs;
  HPReal reference_abs;
  HPReal S_re;
  HPReal S_im;
  bool has_S = false;
  bool ok = false;
  std::vector<std::string> flags;
};

std::vector<StokesScanRow> run_scan(const ScanConfig& cfg);

enum class StokesLineKind { EvsH, EvsE };

HPReal stokes_line_location(StokesLineKind kind, const HPReal& kappa);

struct PublishedRow {
  BigRational theta_over_pi;
  double residual_abs;
  double reference_abs;
  std::optional<double> S_re;
};

struct TablePreset {
  int number;
  ScanConfig scan;
  std::vector<PublishedRow> published;
};

// Tables 2, 3 and 4; InvalidParams for any other number.
TablePreset table_preset(int number);

// "matches_published" or "differs_from_published:<columns>" for a row of a preset table.
std::string compare_with_published(int table, const PublishedRow& pub, const StokesScanRow& row);

std::string scan_csv(const std::vector<StokesScanRow>& rows);
std::string scan_json(const std::vector<StokesScanRow>& rows);

}  // namespace wright
