#include "wright/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wright/stokes_lab.hpp"

namespace wright {

namespace {

using json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (s.back() == ',') out.emplace_back();
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidParams("config key '" + key + "' needs an integer, got '" + v + "'");
  }
}

Scalar num(const std::string& s) { return Scalar::parse(s); }

Scalar single(const std::vector<std::string>& v, const char* name) {
  if (v.size() != 1) throw InvalidParams(std::string("the preset needs exactly one value for --") + name);
  return num(v[0]);
}

WrightParams build_params(const JobConfig& job) {
  bool lists = !job.alpha.empty() || !job.beta.empty();
  if (!job.ml.empty()) {
    if (!job.preset.empty() || lists) throw InvalidParams("--ml cannot be combined with other parameter flags");
    if (job.ml.size() != 2) throw InvalidParams("--ml takes exactly two values a,b");
    return WrightParams::mittag_leffler(num(job.ml[0]), num(job.ml[1]));
  }
  if (!job.preset.empty()) {
    if (lists) throw InvalidParams("--preset cannot be combined with --alpha or --beta");
    if (job.preset == "f1") return WrightParams::f1(single(job.a, "a"), single(job.b, "b"));
    if (job.preset == "f2") return WrightParams::f2(single(job.a, "a"), single(job.b, "b"));
    if (job.preset == "f3") return WrightParams::f3(single(job.c, "c"), single(job.a, "a"), single(job.b, "b"));
    if (job.preset == "ml") return WrightParams::mittag_leffler(single(job.a, "a"), single(job.b, "b"));
    throw InvalidParams("unknown preset '" + job.preset + "' (expected f1, f2, f3 or ml)");
  }
  if (job.alpha.size() != job.a.size())
    throw InvalidParams("--alpha and --a must list the same number of values");
  if (job.beta.size() != job.b.size()) throw InvalidParams("--beta and --b must list the same number of values");
  if (job.alpha.empty() && job.beta.empty()) throw InvalidParams("no parameters given");
  if (!job.c.empty()) throw InvalidParams("--c is only used with --preset f3");
  WrightParams p;
  for (size_t i = 0; i < job.alpha.size(); ++i) p.upper.push_back({num(job.alpha[i]), num(job.a[i])});
  for (size_t i = 0; i < job.beta.size(); ++i) p.lower.push_back({num(job.beta[i]), num(job.b[i])});
  return p;
}

std::string format_value(const HPReal& x, int digits) {
  if (x.is_zero()) return "0";
  double l = log10_abs(x);
  if (l >= -4 && l < 16) return to_fixed(x, digits);
  return to_sci(x, digits + 1);
}

std::string fmt_or_default(const JobConfig& job, const char* dflt) {
  std::string f = job.format.empty() ? dflt : job.format;
  if (f != "csv" && f != "json" && f != "plain") throw InvalidParams("unknown format '" + f + "'");
  return f;
}

BigRational theta_of_job(const JobConfig& job) {
  if (job.theta_pi.size() > 1) throw InvalidParams("eval takes a single --theta-pi value");
  BigRational t = job.theta_pi.empty() ? BigRational(0) : parse_rational(job.theta_pi[0]);
  if (abs(t) > 1) throw InvalidParams("--theta-pi must lie in [-1, 1]");
  return t;
}

BigRational modulus_of_job(const JobConfig& job) {
  if (job.r.empty()) throw InvalidParams("--r is required");
  BigRational r = parse_rational(job.r);
  if (r <= 0) throw InvalidParams("--r must be positive");
  return r;
}

double z_modulus(const WrightParams& params, const BigRational& r) {
  DerivedConstants dc = derive_constants(params, 30);
  return to_double(dc.kappa * pow(dc.h * HPReal(r, 30), HPReal(1L, 30) / dc.kappa));
}

void cmd_eval(const JobConfig& job, std::ostream& out) {
  WrightParams params = build_params(job);
  params.validate();
  BigRational r = modulus_of_job(job);
  BigRational t = theta_of_job(job);
  int D = job.digits;
  if (D < 10) throw InvalidParams("--digits must be at least 10");
  if (job.method != "direct" && job.method != "asym" && job.method != "auto")
    throw InvalidParams("--method must be direct, asym or auto");
  PrecisionScope scope(D + 10);
  RayPoint z = PolarPoint{Scalar(r), Scalar(t)}.at(D + 10);
  std::string method = job.method;
  int cap = job.cap;
  if (method == "auto") {
    Scalar kap = kappa_of(params);
    if (kap.sign() <= 0) throw KappaNonPositive("kappa = " + kap.str() + " must be positive");
    double Z = z_modulus(params, r);
    method = Z < 15 ? "direct" : "asym";
    double k = to_double(kap.real(30));
    cap = static_cast<int>(std::min(1e6, std::max<double>(cap, std::ceil(3 * Z / k) + 64)));
  }
  EvalReport rep = method == "direct" ? wright_eval(params, z, D)
                                      : asymptotic_eval(params, z, TruncationSpec::optimal(cap));
  std::string fmt = fmt_or_default(job, "plain");
  std::string re = format_value(rep.value.re, D), im = format_value(rep.value.im, D);
  std::string est = to_sci(rep.est_truncation_error, 3);
  if (fmt == "plain") {
    bool real = rep.value.im.is_zero() ||
                log10_abs(rep.value.im) < log10_abs(rep.value.re) - D;
    out << (real ? re : re + " " + im + "i") << "\n";
    out << "re " << re << "\nim " << im << "\n";
    out << "est_error " << est << "\n";
    out << "terms " << rep.terms_used << "\n";
    out << "working_digits " << rep.working_precision << "\n";
    out << "method " << method << "\n";
    if (!rep.plan.empty()) out << "plan " << rep.plan << "\n";
    if (!rep.flags.empty()) out << "flags " << join(rep.flags) << "\n";
  } else if (fmt == "json") {
    json j;
    j["re"] = re;
    j["im"] = im;
    j["est_error"] = est;
    j["terms"] = rep.terms_used;
    j["working_digits"] = rep.working_precision;
    j["method"] = method;
    j["plan"] = rep.plan;
    j["flags"] = rep.flags;
    out << j.dump(2) << "\n";
  } else {
    out << "re,im,est_error,terms,method,plan,flags\n";
    out << re << "," << im << "," << est << "," << rep.terms_used << "," << method << "," << rep.plan << ","
        << [&] {
             std::string s;
             for (size_t i = 0; i < rep.flags.size(); ++i) s += (i ? ";" : "") + rep.flags[i];
             return s;
           }()
        << "\n";
  }
}

std::vector<std::string> coefficient_strings(const WrightParams& params, int J, int digits) {
  auto set = solve_coefficients(params, J);
  std::vector<std::string> cs;
  for (int j = 0; j <= J; ++j)
    cs.push_back(set->exact ? to_string(set->c[j]) : format_value(set->c_real[j], digits));
  return cs;
}

void emit_coefficients(const std::vector<std::string>& cs, const std::string* A0, const std::string& fmt,
                       std::ostream& out) {
  if (fmt == "json") {
    json j;
    json arr = json::array();
    for (size_t k = 1; k < cs.size(); ++k) arr.push_back({{"j", k}, {"c_j", cs[k]}});
    j["coefficients"] = arr;
    if (A0) j["A0"] = *A0;
    out << j.dump(2) << "\n";
    return;
  }
  const char* sep = fmt == "csv" ? "," : " ";
  if (fmt == "csv") out << "j,c_j\n";
  for (size_t k = 1; k < cs.size(); ++k) out << k << sep << cs[k] << "\n";
  if (A0) out << "A0" << sep << *A0 << "\n";
}

void cmd_coeffs(const JobConfig& job, std::ostream& out) {
  WrightParams params = build_params(job);
  if (job.J < 0 || job.J > kMaxCoefficients)
    throw InvalidParams("--J must lie in [0, " + std::to_string(kMaxCoefficients) + "]");
  std::string fmt = fmt_or_default(job, "plain");
  auto cs = coefficient_strings(params, job.J, job.digits);
  std::string A0 = format_value(derive_constants(params, job.digits + 5).A0, job.digits);
  emit_coefficients(cs, &A0, fmt, out);
}

SubtractItem parse_item(const std::string& s, int cap) {
  static const std::regex re(R"(^([EHX])([+-]?\d+)?$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw InvalidParams("cannot read expansion '" + s + "' (expected E<n>, H<k> or X)");
  SubtractItem it;
  it.trunc = TruncationSpec::optimal(cap);
  char k = m[1].str()[0];
  it.kind = k == 'E' ? ExpansionKind::Exponential : k == 'H' ? ExpansionKind::Algebraic : ExpansionKind::ThirdExponential;
  it.branch = m[2].matched ? std::stol(m[2].str()) : (k == 'H' ? -1 : 0);
  return it;
}

void emit_rows(const std::vector<StokesScanRow>& rows, const std::string& fmt, std::ostream& out) {
  if (fmt == "json")
    out << scan_json(rows);
  else
    out << scan_csv(rows);
}

void cmd_scan(const JobConfig& job, std::ostream& out) {
  ScanConfig cfg;
  cfg.family = job.preset.empty() ? (job.ml.empty() ? "custom" : "ml") : job.preset;
  cfg.params = build_params(job);
  cfg.params.validate();
  cfg.modulus = Scalar(modulus_of_job(job));
  if (job.theta_pi.empty()) throw InvalidParams("scan needs --theta-pi values");
  for (const auto& t : job.theta_pi) cfg.theta_over_pi.push_back(parse_rational(t));
  if (job.cap < 1) throw InvalidParams("--cap must be positive");
  Scalar kap = kappa_of(cfg.params);
  if (kap.sign() <= 0) throw KappaNonPositive("kappa = " + kap.str() + " must be positive");
  bool below_one = kap.real(30) < HPReal(1L, 30);
  if (job.subtract.empty()) {
    if (!below_one) cfg.subtract.push_back(parse_item("E0", job.cap));
    if (cfg.params.p() > 0) cfg.subtract.push_back(parse_item("H-1", job.cap));
  } else {
    for (const auto& s : job.subtract) cfg.subtract.push_back(parse_item(s, job.cap));
  }
  cfg.reference_branch = job.reference.empty() ? (below_one ? 0 : -1) : std::stol(job.reference);
  if (job.reference_J < 0 || job.reference_J > kMaxCoefficients) throw InvalidParams("--reference-J out of range");
  cfg.reference_trunc = TruncationSpec::fixed(job.reference_J);
  emit_rows(run_scan(cfg), fmt_or_default(job, "csv"), out);
}

void cmd_table(const JobConfig& job, std::ostream& out) {
  std::string fmt = fmt_or_default(job, "csv");
  if (job.n == 1) {
    auto cs = coefficient_strings(WrightParams::f1(BigRational(1, 4), BigRational(3, 4)), 10, job.digits);
    emit_coefficients(cs, nullptr, fmt, out);
    return;
  }
  if (job.n < 1 || job.n > 4) throw InvalidParams("unknown table " + std::to_string(job.n) + " (expected 1-4)");
  TablePreset t = table_preset(job.n);
  auto rows = run_scan(t.scan);
  for (size_t i = 0; i < rows.size(); ++i) rows[i].flags.push_back(compare_with_published(job.n, t.published[i], rows[i]));
  emit_rows(rows, fmt, out);
}

}  // namespace

bool JobConfig::has_inline_params() const {
  return !alpha.empty() || !a.empty() || !beta.empty() || !b.empty() || !c.empty() || !ml.empty() || !preset.empty();
}

std::string to_config_text(const JobConfig& job) {
  std::ostringstream os;
  os << "subcommand=" << job.subcommand << "\n";
  os << "alpha=" << join(job.alpha) << "\n";
  os << "a=" << join(job.a) << "\n";
  os << "beta=" << join(job.beta) << "\n";
  os << "b=" << join(job.b) << "\n";
  os << "c=" << join(job.c) << "\n";
  os << "ml=" << join(job.ml) << "\n";
  os << "preset=" << job.preset << "\n";
  os << "r=" << job.r << "\n";
  os << "theta_pi=" << join(job.theta_pi) << "\n";
  os << "digits=" << job.digits << "\n";
  os << "method=" << job.method << "\n";
  os << "J=" << job.J << "\n";
  os << "n=" << job.n << "\n";
  os << "cap=" << job.cap << "\n";
  os << "subtract=" << join(job.subtract) << "\n";
  os << "reference=" << job.reference << "\n";
  os << "reference_J=" << job.reference_J << "\n";
  os << "out=" << job.out << "\n";
  os << "format=" << job.format << "\n";
  return os.str();
}

JobConfig parse_config_text(const std::string& text) {
  JobConfig job;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidParams("config line without '=': " + line);
    std::string key = line.substr(start, eq - start), v = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key == "subcommand") job.subcommand = v;
    else if (key == "alpha") job.alpha = split(v);
    else if (key == "a") job.a = split(v);
    else if (key == "beta") job.beta = split(v);
    else if (key == "b") job.b = split(v);
    else if (key == "c") job.c = split(v);
    else if (key == "ml") job.ml = split(v);
    else if (key == "preset") job.preset = v;
    else if (key == "r") job.r = v;
    else if (key == "theta_pi") job.theta_pi = split(v);
    else if (key == "digits") job.digits = to_int(key, v);
    else if (key == "method") job.method = v;
    else if (key == "J") job.J = to_int(key, v);
    else if (key == "n") job.n = to_int(key, v);
    else if (key == "cap") job.cap = to_int(key, v);
    else if (key == "subtract") job.subtract = split(v);
    else if (key == "reference") job.reference = v;
    else if (key == "reference_J") job.reference_J = to_int(key, v);
    else if (key == "out") job.out = v;
    else if (key == "format") job.format = v;
    else throw InvalidParams("unknown config key '" + key + "'");
  }
  return job;
}

int run_job(const JobConfig& job, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream buf;
    if (job.subcommand == "eval") cmd_eval(job, buf);
    else if (job.subcommand == "coeffs") cmd_coeffs(job, buf);
    else if (job.subcommand == "scan") cmd_scan(job, buf);
    else if (job.subcommand == "table") cmd_table(job, buf);
    else throw InvalidParams("unknown subcommand '" + job.subcommand + "'");
    if (job.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(job.out);
      if (!f) {
        err << "error: cannot write " << job.out << "\n";
        return 1;
      }
      f << buf.str();
    }
    return 0;
  } catch (const HigherOrderPole& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionExhausted& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const InvalidParams& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const KappaNonPositive& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedSigma& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const OutOfRegime& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const WrightError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wright function evaluation, expansion coefficients and Stokes scans"};
  app.require_subcommand(1);
  JobConfig job;
  std::string config;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--alpha", job.alpha, "upper scales alpha_r")->delimiter(',');
    sub->add_option("--a", job.a, "upper shifts a_r (or the family's a)")->delimiter(',');
    sub->add_option("--beta", job.beta, "lower scales beta_r")->delimiter(',');
    sub->add_option("--b", job.b, "lower shifts b_r (or the family's b)")->delimiter(',');
    sub->add_option("--c", job.c, "f3 family parameter c")->delimiter(',');
    sub->add_option("--ml", job.ml, "Mittag-Leffler a,b")->delimiter(',');
    sub->add_option("--preset", job.preset, "f1 | f2 | f3 | ml");
    sub->add_option("--digits", job.digits, "target digits");
    sub->add_option("--out", job.out, "output file");
    sub->add_option("--format", job.format, "csv | json | plain");
    sub->add_option("--config", config, "key=value job file");
  };
  auto* eval = app.add_subcommand("eval", "evaluate the function at z = r e^{i pi t}");
  add_common(eval);
  eval->add_option("--r", job.r, "|z|");
  eval->add_option("--theta-pi", job.theta_pi, "arg z / pi")->delimiter(',');
  eval->add_option("--method", job.method, "direct | asym | auto");
  eval->add_option("--cap", job.cap, "optimal truncation cap");
  auto* coeffs = app.add_subcommand("coeffs", "print c_1..c_J and A0");
  add_common(coeffs);
  coeffs->add_option("--J", job.J, "number of coefficients");
  auto* scan = app.add_subcommand("scan", "residuals and Stokes multipliers along a ray sweep");
  add_common(scan);
  scan->add_option("--r", job.r, "|z|");
  scan->add_option("--theta-pi", job.theta_pi, "arg z / pi values")->delimiter(',');
  scan->add_option("--cap", job.cap, "optimal truncation cap");
  scan->add_option("--subtract", job.subtract, "expansions to subtract: E<n>, H<k>, X")->delimiter(',');
  scan->add_option("--reference", job.reference, "E branch n of the reference leading term");
  scan->add_option("--reference-J", job.reference_J, "fixed truncation J of the reference column");
  auto* table = app.add_subcommand("table", "reproduce one of the published tables");
  add_common(table);
  table->add_option("--n", job.n, "table number 1-4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "invalid input: " << e.what() << "\n";
    return 2;
  }
  job.subcommand = app.get_subcommands().front()->get_name();

  if (!config.empty()) {
    if (job.has_inline_params()) {
      err << "invalid input: give parameters either inline or through --config, not both\n";
      return 2;
    }
    std::ifstream f(config);
    if (!f) {
      err << "invalid input: cannot read " << config << "\n";
      return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    JobConfig from_file;
    try {
      from_file = parse_config_text(ss.str());
    } catch (const InvalidParams& e) {
      err << "invalid input: " << e.what() << "\n";
      return 2;
    }
    if (!from_file.subcommand.empty() && from_file.subcommand != job.subcommand) {
      err << "invalid input: config file is for '" << from_file.subcommand << "'\n";
      return 2;
    }
    from_file.subcommand = job.subcommand;
    if (!job.out.empty()) from_file.out = job.out;
    if (!job.format.empty()) from_file.format = job.format;
    job = from_file;
  }
  return run_job(job, out, err);
}

}  // namespace wright
