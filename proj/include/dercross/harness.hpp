#ifndef DERCROSS_HARNESS_HPP
#define DERCROSS_HARNESS_HPP

#include <set>

#include "dercross/bundle.hpp"

namespace dercross {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { Text, Machine };

extern const std::set<std::string> kAllSuites;  // axioms identities variational
                                                // derived graded bundle gauge

struct SuiteConfig {
  FixtureKind fixture = FixtureKind::Conj;
  int lin_dim = 3;
  int samples = 50;
  std::uint64_t seed = 42;
  double fd_step = 1e-5;
  double tol_alg = 1e-9;
  double tol_fd = 1e-5;
  std::set<std::string> suites = kAllSuites;
  ReportFormat report = ReportFormat::Text;
  bool negative_control = false;
};

struct CheckResult {
  std::string check_name;
  std::string fixture_name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // max_residual <= tolerance
  double elapsed = 0.0;
};

/// Line-oriented "key = value" text with [section] headers and # comments.
/// Unknown keys and malformed lines raise ConfigError with the line number.
SuiteConfig parse_config(const std::string& text);

FixtureKind parse_fixture_name(const std::string& name);
std::string fixture_display_name(const SuiteConfig& cfg);

/// Runs the selected suites on the configured fixture. Deterministic per
/// (config, seed); results come back sorted with failures first.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

/// 0 when everything passed, 1 otherwise (configuration errors surface as
/// exceptions and map to exit code 2 in the CLI).
int exit_code(const std::vector<CheckResult>& results);

/// Text: one aligned CHECK line per result. Machine: one record per check
/// with fields name, fixture, max_residual, tol, passed, elapsed in that
/// order. Machine reports zero the elapsed field so that identical
/// (config, seed) runs are byte-identical; wall-clock timing appears in the
/// text summary instead.
std::string emit_report(const std::vector<CheckResult>& results, ReportFormat format);

}  // namespace dercross

#endif  // DERCROSS_HARNESS_HPP
