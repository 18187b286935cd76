#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "riceband/cli.hpp"

using namespace riceband;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("config parsing validates fields by path") {
  CHECK_THROWS_WITH_AS(cli::parse_config("{}"), "config.command: missing", cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{\"command\": \"no-such\"}"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("not json"), cli::ConfigError);
  CHECK_THROWS_WITH_AS(cli::parse_config("{\"command\": \"identities\", \"bogus\": 1}"),
                       "config.bogus: unknown key", cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{\"command\": \"identities\", \"replicates\": -2}"),
                  cli::ConfigError);
  CHECK_THROWS_AS(
      cli::parse_config("{\"command\": \"mc-verify\", \"domain\": {\"lower\": [0], \"upper\": [-1]}}"),
      cli::ConfigError);
}

TEST_CASE("minimal config fills defaults") {
  const auto cfg = cli::parse_config(
      R"({"command": "expected-area",
          "ensemble": {"kind": "kostlan", "d": 1, "n": 9},
          "domain": "line"})");
  CHECK(cfg.command == cli::Command::ExpectedArea);
  CHECK(!cfg.domain.has_value());
  CHECK(cfg.seed == 0);
  CHECK(cfg.replicates == 500);
}

TEST_CASE("expected-area on the whole line reports the sqrt(n) value") {
  const auto cfg = cli::parse_config(
      R"({"command": "expected-area",
          "ensemble": {"kind": "kostlan", "d": 1, "n": 9},
          "domain": "line"})");
  const cli::RunResult result = cli::run(cfg, cli::OutputFormat::Csv);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("kind,d,n,value") == 0);
  CHECK(result.output.find("kostlan,1,9,3\n") != std::string::npos);
}

TEST_CASE("identity suite passes in two dimensions") {
  const auto cfg = cli::parse_config(R"({"command": "identities", "d": 2, "n_measures": 5})");
  const cli::RunResult result = cli::run(cfg, cli::OutputFormat::Csv);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("false") == std::string::npos);
}

TEST_CASE("runs are byte-identical and JSON mirrors CSV") {
  const auto cfg = cli::parse_config(
      R"({"command": "kac-asymptotic", "n_values": [50, 100, 200]})");
  const cli::RunResult a = cli::run(cfg, cli::OutputFormat::Csv);
  const cli::RunResult b = cli::run(cfg, cli::OutputFormat::Csv);
  CHECK(a.output == b.output);

  const cli::RunResult j = cli::run(cfg, cli::OutputFormat::Json);
  CHECK(j.output.find("\"roots\"") != std::string::npos);
}

TEST_CASE("missing ensemble or domain is a config error") {
  const auto no_ensemble = cli::parse_config(R"({"command": "mc-verify"})");
  CHECK_THROWS_AS(cli::run(no_ensemble, cli::OutputFormat::Csv), cli::ConfigError);

  const auto no_domain = cli::parse_config(
      R"({"command": "mc-verify", "ensemble": {"kind": "kac", "d": 1, "n": 3}})");
  CHECK_THROWS_AS(cli::run(no_domain, cli::OutputFormat::Csv), cli::ConfigError);
}

#ifdef RICEBAND_CLI_PATH
TEST_CASE("binary interface: exit codes and byte-identical output files") {
  const std::string dir = "cli_test_tmp";
  std::system(("mkdir -p " + dir).c_str());
  const std::string config = dir + "/cfg.json";
  spit(config,
       R"({"command": "favard-measure", "shape": "circle",
           "domain": {"lower": [-2, -2], "upper": [2, 2]},
           "sphere_resolution": 64, "lines_per_direction": 128, "samples_per_line": 256})");

  const std::string cmd = std::string(RICEBAND_CLI_PATH) + " favard-measure --config " + config;
  const int rc1 = std::system((cmd + " --out " + dir + "/a.csv").c_str());
  const int rc2 = std::system((cmd + " --out " + dir + "/b.csv").c_str());
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  const std::string a = slurp(dir + "/a.csv");
  CHECK(a == slurp(dir + "/b.csv"));
  CHECK(a.find("shape,area,reference,rel_error,pass") == 0);

  // invalid config exits 2
  spit(config, "{\"command\": \"favard-measure\", \"bogus\": 1}");
  const int rc3 = std::system((cmd + " >/dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc3) == 2);

  // command mismatch between CLI and config exits 2
  spit(config, R"({"command": "identities"})");
  const int rc4 = std::system((cmd + " >/dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc4) == 2);
}
#endif
