#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gfch/runner.hpp"

namespace gfch {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gfch_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  int run(Command cmd, const std::string& cfg, const std::string& out, std::string mutate = {}) {
    RunOptions o;
    o.config_path = cfg;
    o.out_dir = (dir_ / out).string();
    o.mutate = std::move(mutate);
    log_.str("");
    err_.str("");
    return run_command(cmd, o, log_, err_);
  }

  fs::path dir_;
  std::ostringstream log_, err_;
};

// --- config ---------------------------------------------------------------------

TEST(Fnv1a, ReferenceVectors) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Config, ParsesValuesCommentsAndDefaults) {
  const auto c = RunConfig::from_string(Command::Solve,
                                        "# comment\n"
                                        "model = GfKdV   # trailing\n"
                                        "nu=1.5\n"
                                        "\n"
                                        "grid.n = 128\n");
  EXPECT_EQ(c.str("model"), "GfKdV");
  EXPECT_DOUBLE_EQ(c.real("nu"), 1.5);
  EXPECT_EQ(c.integer("grid.n"), 128);
  EXPECT_EQ(c.integer("p"), 1);
  EXPECT_EQ(c.str("stepper.dt"), "auto");
  EXPECT_EQ(c.explicit_keys().size(), 3u);
}

TEST(Config, SectionsMapToDottedKeys) {
  const auto c = RunConfig::from_string(Command::Converge, "[converge]\nepsilons = 0.2, 0.1 ,0.05\n");
  EXPECT_EQ(c.reals("converge.epsilons"), (std::vector<double>{0.2, 0.1, 0.05}));
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  EXPECT_THROW(RunConfig::from_string(Command::Solve, "grid.size = 3\n"), ConfigError);
  EXPECT_THROW(RunConfig::from_string(Command::Solve, "converge.epsilons = 0.1\n"), ConfigError);
  EXPECT_THROW(RunConfig::from_string(Command::Solve, "p = 1\np = 2\n"), ConfigError);
  const auto c = RunConfig::from_string(Command::Solve, "nu = 1.5x\np = 1.5\n");
  try {
    c.real("nu");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'nu'"), std::string::npos);
  }
  EXPECT_THROW(c.integer("p"), ConfigError);
}

TEST(Config, MissingRequiredListNamesTheKey) {
  const auto c = RunConfig::from_string(Command::Converge, "converge.deltas = 0.2, 0.1, 0.05\n");
  try {
    c.reals("converge.epsilons");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("converge.epsilons"), std::string::npos);
  }
}

TEST(Config, HashIgnoresOutputLocationAndFormatting) {
  auto a = RunConfig::from_string(Command::Solve, "nu = 1.5\noutput.dir = a\n");
  const auto b = RunConfig::from_string(Command::Solve, "# x\n  nu =   1.5\noutput.dir = b\n");
  EXPECT_EQ(a.hash(), b.hash());
  a.set("nu", "2");
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_THROW(a.set("nope", "1"), ConfigError);
}

// --- solve ----------------------------------------------------------------------

TEST_F(Scratch, SolveWritesSnapshotsAndStableManifest) {
  const auto cfg = config("s.cfg", "model = GfCH\ngrid.n = 64\ngrid.length = 40\nprofile.center = 20\nstepper.t_end = 1\n"
                                   "stepper.snapshot_every = 5\n");
  ASSERT_EQ(run(Command::Solve, cfg, "a"), exit_code::kOk) << err_.str();
  ASSERT_EQ(run(Command::Solve, cfg, "b"), exit_code::kOk);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "snapshot_0000.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "snapshots.csv"));
  const auto ma = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(dir_ / "b" / "manifest.json"));
  EXPECT_EQ(ma["config_hash"], mb["config_hash"]);
  EXPECT_EQ(ma["content_hash"], mb["content_hash"]);
  for (const auto& f : ma["files"]) {
    const std::string name = f["name"];
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
    EXPECT_EQ(f["fnv1a64"], hex64(fnv1a64(slurp(dir_ / "a" / name))));
  }
  EXPECT_EQ(ma["config"]["model"], "GfCH");
  // 1 / (0.2 dx) = 8 steps: snapshots at steps 0, 5 and 8.
  EXPECT_EQ(ma["files"].size(), 5u);
  EXPECT_EQ(slurp(dir_ / "a" / "snapshot_0000.csv").substr(0, 8), "x,value\n");
}

TEST_F(Scratch, InvalidModelListsValidNames) {
  const auto cfg = config("s.cfg", "model = Burgers\n");
  EXPECT_EQ(run(Command::Solve, cfg, "o"), exit_code::kConfigError);
  EXPECT_NE(err_.str().find("GfCH"), std::string::npos);
  EXPECT_NE(err_.str().find("Boussinesq"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "manifest.json"));
}

TEST_F(Scratch, ConfigErrorsExitTwo) {
  EXPECT_EQ(run(Command::Solve, (dir_ / "missing.cfg").string(), "o"), exit_code::kConfigError);
  EXPECT_EQ(run(Command::Solve, config("a.cfg", "unknown.key = 1\n"), "o"), exit_code::kConfigError);
  EXPECT_EQ(run(Command::Solve, config("b.cfg", "eps = 2\n"), "o"), exit_code::kConfigError);
  EXPECT_EQ(run(Command::Solve, config("c.cfg", "grid.n = 7\n"), "o"), exit_code::kConfigError);
  EXPECT_EQ(run(Command::Solve, config("d.cfg", "stepper.dt = 5\n"), "o"), exit_code::kConfigError);
  EXPECT_EQ(run(Command::Solve, config("e.cfg", "model = GfKdV\nstepper.scheme = RK4\n"), "o"),
            exit_code::kConfigError);
  EXPECT_EQ(run(Command::Solve, config("f.cfg", "p = 1\n"), "o", "u3s_power"), exit_code::kConfigError);
}

TEST_F(Scratch, BoussinesqEdgeWarningInManifest) {
  // Wide bump in a short box: its tail sits on the edge from the start.
  const auto cfg = config("s.cfg", "model = Boussinesq\ngrid.n = 64\ngrid.length = 40\nprofile.center = 20\n"
                                   "profile.width = 6\nprofile.amplitude = 0.1\nstepper.t_end = 1\n");
  ASSERT_EQ(run(Command::Solve, cfg, "o"), exit_code::kOk) << err_.str();
  const auto m = nlohmann::json::parse(slurp(dir_ / "o" / "manifest.json"));
  ASSERT_EQ(m["warnings"].size(), 1u);
  EXPECT_NE(std::string(m["warnings"][0]).find("box edge"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "o" / "snapshot_0000.csv").substr(0, 8), "x,u,u_t\n");

  const auto quiet = config("q.cfg", "model = Boussinesq\ngrid.n = 256\ngrid.length = 80\nstepper.t_end = 1\n");
  ASSERT_EQ(run(Command::Solve, quiet, "q"), exit_code::kOk);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "q" / "manifest.json"))["warnings"].empty());
}

TEST_F(Scratch, BlowUpExitsThree) {
  // Large negative data drive the improved Boussinesq equation to blow up.
  const auto cfg = config("s.cfg", "model = Boussinesq\ngrid.n = 64\ngrid.length = 40\nprofile.center = 20\n"
                                   "profile.amplitude = -40\nprofile.width = 3\ninitial.velocity = zero\n"
                                   "stepper.dt = 0.01\nstepper.cfl_guard = 1000\nstepper.t_end = 50\n");
  EXPECT_EQ(run(Command::Solve, cfg, "o"), exit_code::kBlowUp) << err_.str();
  EXPECT_NE(err_.str().find("non-finite"), std::string::npos);
}

// --- validate -----------------------------------------------------------------------

TEST_F(Scratch, ValidatePassesAndMutationFails) {
  const auto cfg = config("v.cfg", "validate.powers = 1, 2\nvalidate.orders = 1, 1.5\nvalidate.fields = 5\n");
  ASSERT_EQ(run(Command::Validate, cfg, "ok"), exit_code::kOk) << log_.str();
  const std::string csv = slurp(dir_ / "ok" / "validate.csv");
  for (const char* name : {"order_one", "order_eps", "order_delta", "order_mixed", "order_mixed_s"}) {
    EXPECT_NE(csv.find(std::string(name) + ",p=2 nu=1.5"), std::string::npos) << name;
  }
  EXPECT_EQ(csv.find("FAIL"), std::string::npos);

  EXPECT_EQ(run(Command::Validate, cfg, "bad", "u3s_power"), exit_code::kValidationFailure);
  EXPECT_NE(slurp(dir_ / "bad" / "validate.csv").find("order_mixed,p=1 nu=1,"), std::string::npos);
  EXPECT_NE(log_.str().find("FAIL"), std::string::npos);
  EXPECT_EQ(run(Command::Validate, cfg, "k2", "kappa2"), exit_code::kValidationFailure);
  EXPECT_EQ(run(Command::Validate, cfg, "x", "nonsense"), exit_code::kConfigError);
}

TEST(Mutations, EveryNameChangesTheCoefficients) {
  const HierarchyCoefficients clean;
  EXPECT_EQ(mutated_coefficients("u3s_power").u3s_power, 0.5);
  for (const char* n : {"u1s", "u2s", "u3ss_power", "u3ss_mixed", "u3s_u2", "u3s_u1", "u3s_mixed"}) {
    const auto k = mutated_coefficients(n);
    const bool changed = k.u1s != clean.u1s || k.u2s != clean.u2s || k.u3ss_power != clean.u3ss_power ||
                         k.u3ss_mixed != clean.u3ss_mixed || k.u3s_u2 != clean.u3s_u2 || k.u3s_u1 != clean.u3s_u1 ||
                         k.u3s_mixed != clean.u3s_mixed;
    EXPECT_TRUE(changed) << n;
  }
}

// --- converge ---------------------------------------------------------------------------

TEST_F(Scratch, ConvergeMissingListIsConfigError) {
  EXPECT_EQ(run(Command::Converge, config("c.cfg", "converge.deltas = 0.2, 0.1, 0.05\n"), "o"),
            exit_code::kConfigError);
  EXPECT_NE(err_.str().find("converge.epsilons"), std::string::npos);
  EXPECT_EQ(run(Command::Converge, config("d.cfg", "converge.epsilons = 0.1, 0.2, 0.05\nconverge.deltas = 0.2, 0.1, 0.05\n"), "o"),
            exit_code::kConfigError);
}

TEST_F(Scratch, ConvergeIsByteReproducible) {
  const auto cfg = config("c.cfg", "grid.n = 128\nconverge.epsilons = 0.2, 0.1, 0.05\nconverge.deltas = 0.2, 0.1, 0.05\n"
                                   "converge.courant = 0.1\n");
  ASSERT_EQ(run(Command::Converge, cfg, "a"), exit_code::kOk) << err_.str();
  RunOptions o;
  o.config_path = cfg;
  o.out_dir = (dir_ / "b").string();
  o.threads = 2;
  ASSERT_EQ(run_command(Command::Converge, o, log_, err_), exit_code::kOk);
  for (const char* f : {"converge.csv", "slopes.csv", "converge.dat", "manifest.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const std::string csv = slurp(dir_ / "a" / "converge.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_NE(csv.find("\nGfKdV,"), std::string::npos);
  EXPECT_NE(slurp(dir_ / "a" / "slopes.csv").find("GfCH,eps,"), std::string::npos);
}

TEST(Presets, AllParse) {
  const fs::path dir = GFCH_CONFIG_DIR;
  int seen = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    const Command c = name.rfind("solve", 0) == 0      ? Command::Solve
                      : name.rfind("validate", 0) == 0 ? Command::Validate
                                                       : Command::Converge;
    EXPECT_NO_THROW(RunConfig::from_file(c, e.path().string())) << name;
    ++seen;
  }
  EXPECT_GE(seen, 5);
}

}  // namespace
}  // namespace gfch
