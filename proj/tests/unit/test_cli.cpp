#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nsfemdg/cli/commands.hpp"
#include "nsfemdg/cli/config.hpp"

namespace nsfemdg::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nsfemdg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("nsfemdg_cli_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str(const std::string& sub = "") const { return (path_ / sub).string(); }

 private:
  fs::path path_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config_text("", "empty");
  EXPECT_EQ(c.params.gamma, 3.5);
  EXPECT_EQ(c.params.a, 1.0);
  EXPECT_EQ(c.params.epsilon, 0.2);
  EXPECT_EQ(c.params.kappa, 0.01);
  EXPECT_EQ(c.params.c, 0.5);
  EXPECT_EQ(c.preset, "stationary");
  EXPECT_EQ(c.n, 2);
  EXPECT_EQ(c.cadence, 1);
}

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse_config_text(
      "# comment line\n"
      "n = 3   # trailing\n"
      "box = 0 0 0 2 1 1\n"
      "  gamma=4\n"
      "\n"
      "preset = bump\n"
      "study_n = 1, 2, 4\n"
      "corrupt_flux_sign = true\n",
      "cfg.txt");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.box.upper, Vec3(2, 1, 1));
  EXPECT_EQ(c.params.gamma, 4.0);
  EXPECT_EQ(c.preset, "bump");
  EXPECT_EQ(c.study_n, (std::vector<int>{1, 2, 4}));
  EXPECT_TRUE(c.corrupt_flux_sign);
}

TEST(Config, OverridesWinOverFile) {
  const RunConfig c = parse_config_text("n = 2\n", "cfg.txt", {{"n", "4"}});
  EXPECT_EQ(c.n, 4);
}

TEST(Config, ErrorsNameTheirSource) {
  auto message = [](const std::string& text, std::vector<std::pair<std::string, std::string>> ov = {}) {
    try {
      parse_config_text(text, "cfg.txt", ov);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("n = 2\nepsilon = 0.1\n").find("epsilon"), std::string::npos);
  EXPECT_NE(message("n = 2\nbogus = 1\n").find("cfg.txt:2"), std::string::npos);
  EXPECT_NE(message("n = two\n").find("cfg.txt:1"), std::string::npos);
  EXPECT_NE(message("", {{"T", "x"}}).find("--T"), std::string::npos);
  EXPECT_FALSE(message("box = 0 0 0 1 1\n").empty());
  EXPECT_FALSE(message("preset = vortex\n").empty());
  EXPECT_FALSE(message("study_n = 2,3\n").empty());
  EXPECT_FALSE(message("n = 0\n").empty());
  EXPECT_FALSE(message("cadence = 0\n").empty());
  EXPECT_FALSE(message("T = -1\n").empty());
  EXPECT_FALSE(message("n 2\n").empty());
  EXPECT_THROW(parse_config("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, WarningsForSmallGamma) {
  const RunConfig c = parse_config_text("gamma = 2\n", "cfg.txt");
  EXPECT_EQ(c.warnings.size(), 1u);
}

TEST(Config, EveryKeyHasAFlag) {
  for (const auto& key : config_keys()) {
    if (key == "output_dir") continue;  // any non-empty path is accepted
    const Outcome o = cli({"run", "--" + key, "definitely not valid"});
    EXPECT_EQ(o.code, kExitConfig) << key;
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--no-such-flag", "1"}).code, kExitConfig);
  const Outcome help = cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("run"), std::string::npos);
  const Outcome eps = cli({"run", "--epsilon", "0.1"});
  EXPECT_EQ(eps.code, kExitConfig);
  EXPECT_NE(eps.err.find("epsilon"), std::string::npos);
}

TEST(Cli, StationaryRun) {
  TempDir dir("stationary");
  const Outcome o = cli({"run", "--n", "2", "--T", "0.5", "--output_dir", dir.str()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto rows = csv_rows(slurp(dir.path() / "diagnostics.csv"));
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(slurp(dir.path() / "diagnostics.csv").substr(0, std::string(kDiagnosticsHeader).size()),
            kDiagnosticsHeader);
  ASSERT_EQ(rows[0].size(), 13u);
  // dt = 0.5 * sqrt(3) / 2, so T = 0.5 takes two steps.
  EXPECT_EQ(rows.size(), 1u + 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 13u);
    EXPECT_EQ(rows[i][0], std::to_string(i - 1));
    EXPECT_EQ(rows[i][2], rows[1][2]);  // mass
    EXPECT_EQ(std::stod(rows[i][8]), 1.0);
  }
  for (int k = 0; k <= 2; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%06d.vtk", k);
    EXPECT_TRUE(fs::exists(dir.path() / name)) << name;
  }
}

TEST(Cli, ZeroFinalTime) {
  TempDir dir("t0");
  const Outcome o = cli({"run", "--preset", "bump", "--T", "0", "--output_dir", dir.str()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(csv_rows(slurp(dir.path() / "diagnostics.csv")).size(), 2u);
  EXPECT_TRUE(fs::exists(dir.path() / "state_000000.vtk"));
  EXPECT_FALSE(fs::exists(dir.path() / "state_000001.vtk"));
}

TEST(Cli, BumpRunEnergyAndCadence) {
  TempDir dir("bump");
  const Outcome o = cli({"run", "--preset", "bump", "--n", "4", "--T", "1.0", "--cadence", "2",
                         "--output_dir", dir.str()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto rows = csv_rows(slurp(dir.path() / "diagnostics.csv"));
  ASSERT_EQ(rows.size(), 1u + 1u + 5u);
  double prev_energy = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double e = std::stod(rows[i][3]) + std::stod(rows[i][4]);
    EXPECT_LE(e, prev_energy * (1.0 + 1e-12));
    prev_energy = e;
    EXPECT_GE(std::stod(rows[i][9]), -1e-10 * e);
    EXPECT_GE(std::stod(rows[i][10]), -1e-12);
  }
  EXPECT_TRUE(fs::exists(dir.path() / "state_000002.vtk"));
  EXPECT_TRUE(fs::exists(dir.path() / "state_000004.vtk"));
  EXPECT_FALSE(fs::exists(dir.path() / "state_000003.vtk"));
}

TEST(Cli, IdenticalConfigGivesIdenticalCsv) {
  TempDir a("det_a");
  TempDir b("det_b");
  const TempDir cfg("det_cfg");
  {
    std::ofstream f(cfg.path() / "run.cfg");
    f << "preset = shear\nn = 3\nT = 0.6\n";
  }
  ASSERT_EQ(cli({"run", "--config", cfg.str("run.cfg"), "--output_dir", a.str()}).code, kExitOk);
  ASSERT_EQ(cli({"run", "--config", cfg.str("run.cfg"), "--output_dir", b.str()}).code, kExitOk);
  EXPECT_EQ(slurp(a.path() / "diagnostics.csv"), slurp(b.path() / "diagnostics.csv"));
  EXPECT_EQ(slurp(a.path() / "state_000001.vtk"), slurp(b.path() / "state_000001.vtk"));
}

TEST(Cli, StepFailureExitsTwoAndNamesStep) {
  TempDir dir("fail");
  const Outcome o = cli({"run", "--preset", "bump", "--newton_max_iter", "1", "--output_dir", dir.str()});
  EXPECT_EQ(o.code, kExitNumerical);
  EXPECT_NE(o.err.find("step failure at step 1"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("alpha="), std::string::npos);
}

TEST(Cli, CheckPassesAndDetectsMutation) {
  const Outcome ok = cli({"check", "--n", "1"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
  EXPECT_NE(ok.out.find("PASS Jacobian"), std::string::npos);

  const Outcome bad = cli({"check", "--n", "1", "--corrupt_flux_sign", "true"});
  EXPECT_EQ(bad.code, kExitNumerical);
  EXPECT_NE(bad.out.find("FAIL continuity"), std::string::npos) << bad.out;
}

TEST(Cli, DefaultCheck) {
  const Outcome ok = cli({"check"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
}

TEST(Cli, StudiesWriteTables) {
  TempDir dir("study");
  const Outcome r = cli({"study", "--study", "rates", "--output_dir", dir.str()});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("PASS rates study"), std::string::npos);
  EXPECT_EQ(csv_rows(slurp(dir.path() / "rates.csv")).size(), 4u);

  const Outcome c = cli({"study", "--study", "cauchy", "--preset", "bump", "--study_n", "1,2,4", "--T", "0.5", "--output_dir", dir.str()});
  EXPECT_EQ(c.code, kExitOk) << c.out;
  EXPECT_EQ(csv_rows(slurp(dir.path() / "cauchy.csv")).size(), 3u);
}

}  // namespace
}  // namespace nsfemdg::cli
