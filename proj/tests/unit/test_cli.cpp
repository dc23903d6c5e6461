#include "commands.hpp"
#include "run_config.hpp"

#include "ewr/errors.hpp"
#include "ewr/field_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ewr;
using namespace ewr::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ewr_cli_" + name);
  fs::remove_all(p);
  return p;
}

// Small, fast protocol: 32^2 over 0.1 nm cropped from 64^2 over 0.2 nm.
RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.grid = {32, 0.1};
  c.cell_nm = 0.1;
  c.count = 3;
  c.drift_step_nm = {0.003125, 0.0};
  c.solver.max_iters = 10;
  c.output_dir = out;
  c.deterministic = true;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EWR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunConfig, DefaultsAreValidAndRoundTrip) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.solver.alpha = 3e-7;
  c.foci_nm = {1.0, 2.0, 3.0};
  c.count = 3;
  RunConfig back;
  back.apply(c.to_kv());
  EXPECT_EQ(back.to_kv().to_string(), c.to_kv().to_string());
  EXPECT_EQ(back.solver.alpha, 3e-7);
  EXPECT_EQ(back.foci(), (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(RunConfig, OverridesAndErrors) {
  RunConfig c;
  c.apply_override("solver.alpha = 0.5");
  c.apply_override("run.deterministic=true");
  EXPECT_EQ(c.solver.alpha, 0.5);
  EXPECT_TRUE(c.deterministic);
  EXPECT_THROW(c.apply_override("solver.nope=1"), ConfigError);
  EXPECT_THROW(c.apply_override("solver.alpha"), ConfigError);
  EXPECT_THROW(c.apply_override("grid.n=1.5"), ConfigError);
  EXPECT_THROW(c.apply_override("run.deterministic=maybe"), ConfigError);
  EXPECT_THROW(c.apply_override("solver.alpha=abc"), ConfigError);
}

TEST(RunConfig, ValidationRejectsInconsistentSettings) {
  auto bad = [](auto edit) {
    RunConfig c;
    edit(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  bad([](RunConfig& c) { c.grid.n = 96; });
  bad([](RunConfig& c) { c.count = 0; });
  bad([](RunConfig& c) { c.foci_nm = {1.0}; });
  bad([](RunConfig& c) { c.wave_kind = "square"; });
  bad([](RunConfig& c) { c.wave_kind = "random"; });
  bad([](RunConfig& c) { c.cell_nm = 0.123; });
  bad([](RunConfig& c) { c.n_focal = 2; });
  bad([](RunConfig& c) { c.optics.lambda_nm = -1.0; });
  bad([](RunConfig& c) { c.solver.armijo_sigma = 2.0; });
}

TEST(Commands, SimulateIsDeterministicAndReconstructWritesArtifacts) {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b"), rec = scratch("rec");
  std::ostringstream log;
  ASSERT_EQ(cmd_simulate(small_config(a), log), kOk);
  ASSERT_EQ(cmd_simulate(small_config(b), log), kOk);
  for (const auto& f : fs::directory_iterator(a)) {
    const fs::path other = b / f.path().filename();
    if (f.path().filename() == "config.cfg") continue;
    EXPECT_EQ(slurp(f.path()), slurp(other)) << f.path();
  }
  EXPECT_TRUE(fs::exists(a / "truth_wave.meta"));

  RunConfig rc = small_config(rec);
  ASSERT_EQ(cmd_reconstruct(rc, a, log), kOk);
  for (const char* name : {"wave.meta", "wave.bin", "wave_real.meta", "translations.csv", "iterations.csv",
                           "result.txt", "config.cfg"})
    EXPECT_TRUE(fs::exists(rec / name)) << name;
  const ComplexField psi = read_complex_field(rec / "wave");
  EXPECT_EQ(psi.spec(), rc.grid);

  rc.grid = {64, 0.2};
  EXPECT_THROW(cmd_reconstruct(rc, a, log), ConfigError);
  for (const auto& p : {a, b, rec}) fs::remove_all(p);
}

TEST(Commands, ProbesReportVerdicts) {
  const fs::path out = scratch("probe");
  RunConfig c = small_config(out);
  std::ostringstream log;
  EXPECT_EQ(cmd_probe("convexity", c, std::nullopt, log), kOk);
  EXPECT_TRUE(fs::exists(out / "convexity.csv"));
  EXPECT_EQ(cmd_probe("invariance", c, std::nullopt, log), kOk);
  EXPECT_EQ(cmd_probe("coercivity", c, std::nullopt, log), kOk);
  c.probe.radial_samples = 50;
  c.probe.oracle_pairs = 5;
  EXPECT_EQ(cmd_probe("factorization", c, std::nullopt, log), kOk);
  c.probe.convexity_rel_tol = 0.0;
  c.probe.widths = {40.0};
  EXPECT_EQ(cmd_probe("convexity", c, std::nullopt, log), kProbeFailure);
  EXPECT_THROW(cmd_probe("nothing", c, std::nullopt, log), ConfigError);
  fs::remove_all(out);
}

TEST(Cli, ExitStatuses) {
  const fs::path out = scratch("exit");
  const std::string base = "--set grid.n=32 --set grid.extent_nm=0.1 --set wave.cell_nm=0.1 --set series.count=2 ";
  EXPECT_EQ(run_cli(base + "-o " + out.string() + " simulate"), 0);
  EXPECT_EQ(run_cli(base + "-o " + (out / "rec").string() + " --set solver.max_iters=3 reconstruct " + out.string()), 0);
  EXPECT_EQ(run_cli(base + "-o " + (out / "rec").string() + " --set solver.max_iters=3 reconstruct --alpha 0 --freeze-translations " + out.string()), 0);
  EXPECT_EQ(run_cli("info " + out.string()), 0);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("--set grid.n=33 simulate"), 2);
  EXPECT_EQ(run_cli("--set nope=1 simulate"), 2);
  EXPECT_EQ(run_cli("-c /nonexistent.cfg simulate"), 3);
  EXPECT_EQ(run_cli(base + "reconstruct /nonexistent"), 3);
  EXPECT_EQ(run_cli(base + "-o " + (out / "p").string() + " --set probe.widths=40 --set probe.convexity_rel_tol=0 probe convexity"), 5);
  EXPECT_EQ(run_cli(base + "-o " + (out / "p").string() + " probe coercivity"), 0);
  fs::remove_all(out);
}
