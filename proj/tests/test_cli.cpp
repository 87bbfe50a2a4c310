#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <laacoex/cli.hpp>

using namespace laacoex;
namespace fs = std::filesystem;

namespace {

const std::string kBin = LAACOEX_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("laacoex_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cmd(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd =
      kBin + " " + args + " > " + stdout_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rate expressions") {
  CHECK(cli::parse_rate_expr("12.5", 40) == Catch::Approx(12.5));
  CHECK(cli::parse_rate_expr("0.5*mu_w", 40) == Catch::Approx(20.0));
  CHECK(cli::parse_rate_expr("mu_w", 40) == Catch::Approx(40.0));
  CHECK(cli::parse_rate_expr(" 2 * mu_w ", 10) == Catch::Approx(20.0));
  CHECK_THROWS_AS(cli::parse_rate_expr("", 1), ConfigError);
  CHECK_THROWS_AS(cli::parse_rate_expr("mu_w*2", 1), ConfigError);
  CHECK_THROWS_AS(cli::parse_rate_expr("abc", 1), ConfigError);
  CHECK_THROWS_AS(cli::parse_rate_expr("2*mu_w2", 1), ConfigError);
}

TEST_CASE("config loading: defaults, expressions, strictness") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "scenario.json";

  SECTION("minimal file gets documented defaults") {
    std::ofstream(cfg) << R"({"scheme": "ufa"})";
    const cli::LoadedConfig lc = cli::load_config(cfg.string(), Scenario{});
    CHECK(lc.scenario.scheme.scheme == Scheme::UFA);
    CHECK(lc.scenario.solver.alpha == 1e-6);
    CHECK(lc.scenario.sessions == 1'000'000);
    CHECK(lc.scenario.batches == 10);
    CHECK_FALSE(lc.sweep.has_value());
  }

  SECTION("rates resolve k*mu_w against the file's mu_w") {
    std::ofstream(cfg) << R"({"scheme": "uta",
      "rates": {"mu_w": 40, "lambda_l": "0.5*mu_w", "lambda_w": 5}})";
    const cli::LoadedConfig lc = cli::load_config(cfg.string(), Scenario{});
    CHECK(lc.scenario.rates.lambda_l == Catch::Approx(20.0));
    CHECK(lc.scenario.rates.lambda_w == Catch::Approx(5.0));
  }

  SECTION("unknown keys are rejected at every level") {
    std::ofstream(cfg) << R"({"scheme": "ufa", "queue": 3})";
    CHECK_THROWS_AS(cli::load_config(cfg.string(), Scenario{}), ConfigError);
    std::ofstream(cfg) << R"({"rates": {"mu_q": 1}})";
    CHECK_THROWS_AS(cli::load_config(cfg.string(), Scenario{}), ConfigError);
  }

  SECTION("semantic errors name the offending field") {
    std::ofstream(cfg) << R"({"scheme": "ufab", "q": 2, "q_theta": 2})";
    try {
      cli::load_config(cfg.string(), Scenario{});
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("q_theta") != std::string::npos);
    }
    std::ofstream(cfg) << R"({"rates": {"lambda_l": -3}})";
    CHECK_THROWS_AS(cli::load_config(cfg.string(), Scenario{}), ConfigError);
  }

  SECTION("parse errors are reported as config errors") {
    std::ofstream(cfg) << "{nope";
    CHECK_THROWS_AS(cli::load_config(cfg.string(), Scenario{}), ConfigError);
    CHECK_THROWS_AS(cli::load_config("/nonexistent.json", Scenario{}),
                    ConfigError);
  }

  SECTION("sweep block round-trips") {
    std::ofstream(cfg) << R"({"scheme": "uta",
      "rates": {"mu_w": 10, "lambda_l": "0.5*mu_w", "lambda_w": "0.5*mu_w",
                "mu_lu": "mu_w", "mu_s": "mu_w",
                "mu_on": "0.1*mu_w", "mu_off": "0.1*mu_w"},
      "sweep": {"axis": "q", "values": [1, 2, 3],
                "schemes": ["ufa", "uta"]}})";
    const cli::LoadedConfig lc = cli::load_config(cfg.string(), Scenario{});
    REQUIRE(lc.sweep.has_value());
    CHECK(lc.sweep->axis == "q");
    CHECK(lc.sweep->axis_values.size() == 3);
    CHECK(lc.sweep->schemes.size() == 2);
  }
}

TEST_CASE("cli solve prints the analytic probabilities") {
  TempDir tmp;
  const fs::path out = tmp.path / "out.txt";
  REQUIRE(run_cmd("solve --scheme ufa --preset table1 --lambda-l 25", out) ==
          0);
  const std::string text = slurp(out);
  CHECK(text.find("P_b,l = 0.254817") != std::string::npos);
  CHECK(text.find("P_b,w = 0.745183") != std::string::npos);
  CHECK(text.find("# scheme = ufa") != std::string::npos);
  CHECK(text.find("# lambda_l = 25") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  TempDir tmp;
  const fs::path out = tmp.path / "out.txt";
  CHECK(run_cmd("presets", out) == 0);
  CHECK(run_cmd("solve --scheme nope", out) == 2);
  CHECK(run_cmd("solve --preset fig99", out) == 2);
  CHECK(run_cmd("solve --no-such-flag", out) == 2);
  CHECK(run_cmd("", out) == 2);  // a subcommand is required
  // q_theta >= Q is a config error for a strict solve.
  CHECK(run_cmd("solve --scheme ufab --preset table1 --q 2 --q-theta 2",
                out) == 2);
}

TEST_CASE("cli presets listing") {
  TempDir tmp;
  const fs::path out = tmp.path / "out.txt";
  REQUIRE(run_cmd("presets", out) == 0);
  const std::string text = slurp(out);
  for (const char* n : {"table1", "fig4", "fig11", "fig12"})
    CHECK(text.find(n) != std::string::npos);
}

TEST_CASE("cli sweep writes the documented csv and is reproducible") {
  TempDir tmp;
  const fs::path a = tmp.path / "a.csv";
  const fs::path b = tmp.path / "b.csv";
  const fs::path log = tmp.path / "log.txt";
  REQUIRE(run_cmd("sweep --preset fig12 --format csv --out " + a.string(),
                  log) == 0);
  REQUIRE(run_cmd("sweep --preset fig12 --format csv --out " + b.string(),
                  log) == 0);
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));  // byte-identical re-run
  std::istringstream in(ca);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == kCsvHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 10);
}

TEST_CASE("cli simulate is seed-deterministic") {
  TempDir tmp;
  const fs::path a = tmp.path / "a.txt";
  const fs::path b = tmp.path / "b.txt";
  const std::string args =
      "simulate --scheme ufa --preset table1 --lambda-l 25 --sessions 20000 "
      "--seed 7 --out ";
  const fs::path log = tmp.path / "log.txt";
  REQUIRE(run_cmd(args + a.string(), log) == 0);
  REQUIRE(run_cmd(args + b.string(), log) == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("# seed = 7") != std::string::npos);
  CHECK(text.find("# rng = xoshiro256starstar") != std::string::npos);
  CHECK(text.find("ci95") != std::string::npos);
}

TEST_CASE("cli solve from a config file with overrides") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "cfg.json";
  const fs::path out = tmp.path / "out.txt";
  std::ofstream(cfg) << R"({"scheme": "ufa", "q": 2,
    "rates": {"mu_w": 40, "lambda_l": 25, "lambda_w": 5, "mu_lu": 25,
              "mu_s": 1, "mu_on": 0.1, "mu_off": 0.1}})";
  REQUIRE(run_cmd("solve --config " + cfg.string(), out) == 0);
  CHECK(slurp(out).find("P_b,l = 0.254817") != std::string::npos);
  // Inline overrides win over the file.
  REQUIRE(run_cmd("solve --config " + cfg.string() + " --lambda-l 120", out) ==
          0);
  CHECK(slurp(out).find("P_b,l = 0.793288") != std::string::npos);
}

TEST_CASE("cli validate reports per-cell results") {
  TempDir tmp;
  const fs::path out = tmp.path / "out.txt";
  // Analytic-only validation (sessions 0 skips the simulation cells): the
  // stored analytic digits are not reproduced by the solved chain, so the
  // command exits 1 and says which cells differ.
  const int code = run_cmd("validate --sessions 0", out);
  const std::string text = slurp(out);
  CHECK(code == 1);
  CHECK(text.find("# checksum = ok") != std::string::npos);
  CHECK(text.find("validation: FAIL") != std::string::npos);
  CHECK(text.find("error_pct") != std::string::npos);
  CHECK(text.find("FLAGGED") != std::string::npos);
}
