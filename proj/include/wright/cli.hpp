#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wright {

// One command-line job; everything is kept as the user typed it so that
// rationals survive a round trip through the config format.
struct JobConfig {
  std::string subcommand;  // eval | coeffs | scan | table
  std::vector<std::string> alpha, a, beta, b, c, ml;
  std::string preset;  // f1 | f2 | f3 | ml, or empty for explicit lists
  std::string r;
  std::vector<std::string> theta_pi;
  int digits = 30;
  std::string method = "auto";  // direct | asym | auto
  int J = 10;
  int n = 0;
  int cap = 64;
  std::vector<std::string> subtract;  // E0, E-1, H-1, X ...
  std::string reference;              // E branch for the multiplier denominator
  int reference_J = 0;
  std::string out;
  std::string format;  // csv | json | plain; empty picks the subcommand default

  bool has_inline_params() const;
  bool operator==(const JobConfig&) const = default;
};

std::string to_config_text(const JobConfig& job);
JobConfig parse_config_text(const std::string& text);

// Exit codes: 0 success, 1 other failure, 2 invalid input, 3 higher-order
// pole, 4 precision exhausted.
int run_job(const JobConfig& job, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wright
