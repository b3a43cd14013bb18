#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "biortho/errors.hpp"
#include "biortho_cli/cli.hpp"

namespace biortho::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Data rows of a CSV written by the tool: skips comment lines and the header.
std::vector<std::vector<std::string>> rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

int exe(const std::string& args) {
  const std::string cmd = std::string(BIORTHO_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() / ("biortho_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  RunConfig config(const std::string& command, const std::string& out) {
    RunConfig c;
    c.command = command;
    c.out = (dir / out).string();
    return c;
  }
};

TEST_F(Cli, EquilibriumCsvForLaguerre) {
  auto cfg = config("eq", "density.csv");
  cfg.grid = 50;
  ASSERT_EQ(run(cfg), kOk);
  std::string text = slurp(cfg.out);
  EXPECT_EQ(text.rfind("# command=eq ", 0), 0u);
  EXPECT_NE(text.find("\nx,psi,regime,a,b,c_or_c0,c1,d1,d2,ell\n"), std::string::npos);
  auto data = rows(cfg.out);
  ASSERT_EQ(data.size(), 50u);
  for (const auto& r : data) {
    ASSERT_EQ(r.size(), 10u);
    EXPECT_EQ(r[2], "HardEdge");
    EXPECT_NEAR(std::stod(r[4]), 5.19615, 1e-5);
    EXPECT_GT(std::stod(r[1]), 0);
  }
}

TEST_F(Cli, CurveForThetaOneIsTheUnitCircle) {
  auto cfg = config("curve", "curve.csv");
  cfg.theta = "1";
  ASSERT_EQ(run(cfg), kOk);
  auto data = rows(cfg.out);
  ASSERT_GT(data.size(), 500u);
  for (const auto& r : data) EXPECT_LE(std::abs(std::hypot(std::stod(r[1]), std::stod(r[2])) - 1), 1e-10);
}

TEST_F(Cli, CdCheckResidualsAreTiny) {
  auto cfg = config("cd-check", "cd.csv");
  cfg.theta = "2/1";
  cfg.weight = "laguerre";
  cfg.n = 5;
  ASSERT_EQ(run(cfg), kOk);
  auto data = rows(cfg.out);
  ASSERT_EQ(data.size(), std::size_t(cfg.points * cfg.n));  // every size n = 1..5 at each point
  for (const auto& r : data) EXPECT_LE(std::stod(r[3]), 1e-16);
}

TEST_F(Cli, PolysRecurrenceKernelAndSample) {
  auto polys = config("polys", "p.csv");
  polys.weight = "laguerre";
  ASSERT_EQ(run(polys), kOk);
  EXPECT_EQ(rows(polys.out).size(), 66u);

  auto rec = config("recurrence", "r.csv");
  rec.theta = "3/2";
  rec.weight = "laguerre";
  ASSERT_EQ(run(rec), kOk);
  for (const auto& r : rows(rec.out)) EXPECT_LE(std::stod(r[4]), 1e-15);

  auto ker = config("kernel", "k.csv");
  ker.grid = 7;
  ASSERT_EQ(run(ker), kOk);
  EXPECT_EQ(rows(ker.out).size(), 49u);

  auto smp = config("sample", "s.csv");
  smp.n = 4;
  smp.sweeps = 200;
  ASSERT_EQ(run(smp), kOk);
  auto data = rows(smp.out);
  EXPECT_EQ(data.size(), 18u);
  EXPECT_EQ(data.front().size(), 5u);
  EXPECT_NE(slurp(smp.out).find("# acceptance_rate="), std::string::npos);
}

TEST_F(Cli, OutputsAreByteIdentical) {
  for (const char* command : {"eq", "sample", "cd-check", "polys"}) {
    auto a = config(command, "a.csv"), b = config(command, "b.csv");
    for (auto* c : {&a, &b}) {
      c->grid = 20;
      c->sweeps = 300;
      c->weight = "laguerre";
      ASSERT_EQ(run(*c), kOk) << command;
    }
    EXPECT_EQ(slurp(a.out), slurp(b.out)) << command;
  }
}

TEST_F(Cli, ValidationReportSchema) {
  auto cfg = config("validate", "v.json");
  ASSERT_EQ(run(cfg), kOk);
  auto report = nlohmann::json::parse(slurp(cfg.out));
  ASSERT_TRUE(report.is_array());
  EXPECT_GE(report.size(), 10u);
  for (const auto& check : report) {
    EXPECT_TRUE(check.contains("check_name"));
    EXPECT_TRUE(check.contains("value"));
    EXPECT_TRUE(check.contains("tolerance"));
    EXPECT_EQ(check.at("status"), "pass") << check.at("check_name");
  }
}

TEST(RunConfig, ValidationAndDefaults) {
  RunConfig cfg;
  cfg.command = "eq";
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.default_output(), "density.csv");
  cfg.command = "cd-check";
  EXPECT_EQ(cfg.default_output(), "cd_check.csv");
  cfg.command = "validate";
  EXPECT_EQ(cfg.default_output(), "validation.json");
  cfg.command = "recurrence";
  cfg.theta = "1.5";
  EXPECT_THROW(cfg.validate(), IrrationalTheta);
  cfg.command = "bogus";
  EXPECT_THROW(cfg.validate(), InvalidConfiguration);
  cfg.command = "eq";
  cfg.theta = "0.5";
  EXPECT_THROW(cfg.validate(), Error);
  cfg.theta = "2";
  cfg.potential = "cubic:1";
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(RunConfig, EchoListsEveryField) {
  RunConfig cfg;
  cfg.command = "sample";
  std::string echo = config_echo(cfg);
  for (const char* key : {"command=sample", "theta=2", "potential=linear:1", "seed=7", "sweeps=20000", "bits=256"}) {
    EXPECT_NE(echo.find(key), std::string::npos) << key;
  }
}

TEST(Executable, ExitCodes) {
  EXPECT_EQ(exe("--help"), kOk);
  EXPECT_EQ(exe(""), kConfigError);
  EXPECT_EQ(exe("eq --bogus 1"), kConfigError);
  EXPECT_EQ(exe("eq --config /nonexistent/config.json"), kConfigError);
  EXPECT_EQ(exe("recurrence --theta 1.7 --out -"), kConfigError);
  EXPECT_EQ(exe("eq --potential polynomial:0 --out -"), kSolverFailure);
  EXPECT_EQ(exe("recurrence --theta 2 --weight laguerre --tol 1e-300 --out -"), kValidationFailure);
  EXPECT_EQ(exe("curve --theta 2 --out -"), kOk);
}

TEST_F(Cli, JsonConfigWithFlagPrecedence) {
  const fs::path cfg = dir / "run.json", out = dir / "eq.csv";
  std::ofstream(cfg) << R"({"command": "eq", "theta": "2", "grid": 7,
                            "potential": {"kind": "quadratic", "tau": 1.0, "rho": -3.0}, "out": ")"
                     << (dir / "ignored.csv").string() << "\"}";
  ASSERT_EQ(exe("--config " + cfg.string() + " --out " + out.string()), kOk);
  EXPECT_FALSE(fs::exists(dir / "ignored.csv"));
  auto data = rows(out);
  ASSERT_EQ(data.size(), 7u);
  EXPECT_EQ(data[0][2], "SoftEdge");
  EXPECT_NE(slurp(out).find("potential=quadratic:1,-3"), std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"grid": 7, "no_such_option": 1})";
  EXPECT_EQ(exe("eq --config " + (dir / "bad.json").string()), kConfigError);
  std::ofstream(dir / "badpot.json") << R"({"potential": {"kind": "linear", "tau": 1}})";
  EXPECT_EQ(exe("eq --config " + (dir / "badpot.json").string()), kConfigError);
}

}  // namespace
}  // namespace biortho::cli
