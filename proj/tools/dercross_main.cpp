#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dercross/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dercross::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dercross: crossed-module / derived-group / 2-bundle verification suites"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the configured check suites");
  std::string config_path;
  std::string fixture, report;
  std::uint64_t seed = 0;
  int samples = 0;
  bool negative = false;
  run->add_option("--config", config_path, "config file (default: $DERCROSS_CONFIG)");
  run->add_option("--seed", seed, "override the RNG seed");
  run->add_option("--samples", samples, "override the sample count");
  run->add_option("--fixture", fixture, "override the fixture (CONJ, LIN, COVER)");
  run->add_option("--report", report, "report format: text or machine");
  run->add_flag("--negative-control", negative,
                "run the deliberately corrupted variants (expected to FAIL)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    dercross::SuiteConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("DERCROSS_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) cfg = dercross::parse_config(read_file(config_path));
    if (run->count("--seed")) cfg.seed = seed;
    if (run->count("--samples")) {
      if (samples < 1) throw dercross::ConfigError("samples must be >= 1");
      cfg.samples = samples;
    }
    if (!fixture.empty()) cfg.fixture = dercross::parse_fixture_name(fixture);
    if (!report.empty()) {
      if (report == "text")
        cfg.report = dercross::ReportFormat::Text;
      else if (report == "machine")
        cfg.report = dercross::ReportFormat::Machine;
      else
        throw dercross::ConfigError("report must be text or machine");
    }
    cfg.negative_control = negative;

    std::vector<dercross::CheckResult> results = dercross::run_suite(cfg);
    std::cout << dercross::emit_report(results, cfg.report);
    return dercross::exit_code(results);
  } catch (const dercross::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
