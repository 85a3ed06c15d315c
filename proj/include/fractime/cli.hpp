#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fractime/lt_invert.hpp"

namespace fractime::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerification = 3;

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on usage or input
/// errors, 2 on numerical failure and 3 when a verification suite fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One line of a verification table.
struct SuiteRow {
  std::string suite;
  std::string model;
  std::string dynamic;
  std::string check;  ///< e.g. "cesaro p (q=0 fit)"
  double measured = 0.0;
  double target = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  double alpha = 0.5;
  std::optional<double> s;  ///< c3 only; both 0.5 and 1 when unset
  std::optional<std::vector<double>> grid;
  InversionConfig inversion{};
  unsigned workers = 1;
};

/// Suites "c1", "c1-two", "c2", "c3" or "all". ConfigError for other names.
std::vector<SuiteRow> run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace fractime::cli
