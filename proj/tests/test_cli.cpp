#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dilatia/cli.hpp"

using namespace dilatia;

namespace {

const std::string kCli = DILATIA_CLI_PATH;
const std::string kSpecs = DILATIA_SPECS_DIR;

struct Result {
  int code;
  std::string out;
};

Result shell(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Result run_in_process(cli::RunConfig rc) {
  std::ostringstream out, err;
  const int code = cli::run(rc, out, err);
  return {code, out.str() + err.str()};
}

}  // namespace

TEST(Cli, CatalogFamilyOnGalleryBallExitsZero) {
  const auto r = shell("verify-family --space gallery:euclidean_ball --family linear_scale");
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema"], "dilatia/1");
  EXPECT_EQ(j["tool_version"], "0.1.0");
  EXPECT_EQ(j["seed"], 20240601u);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["tolerances"].contains("abs_tol"));
  for (const auto& c : j["checks"])
    for (const char* k : {"name", "anchor", "samples", "max_violation", "witness", "pass"})
      EXPECT_TRUE(c.contains(k)) << k;
}

TEST(Cli, RotationFamilyExitsOneOnComposition) {
  const auto r = shell("verify-family --family rotation_scale_family");
  EXPECT_EQ(r.code, 1);
  bool composition_failed = false;
  const Json j = Json::parse(r.out);
  for (const auto& c : j["checks"])
    if (c["name"] == "composition") composition_failed = !c["pass"].get<bool>();
  EXPECT_TRUE(composition_failed);
}

TEST(Cli, OverDiameterConeExitsTwo) {
  EXPECT_EQ(shell("build-cone --space gallery:circle_arc").code, 2);
  EXPECT_EQ(shell("build-cone --space gallery:circle_arc --rescale").code, 0);
}

TEST(Cli, UnsafeDiameterShowsTriangleWitness) {
  const auto r = shell("build-cone --space gallery:circle_arc --allow-unsafe-diameter");
  EXPECT_EQ(r.code, 1);
  const Json j = Json::parse(r.out);
  bool seen = false;
  for (const auto& c : j["checks"])
    if (c["name"] == "metric.triangle") {
      seen = true;
      EXPECT_FALSE(c["pass"].get<bool>());
      EXPECT_TRUE(c["witness"].contains("x"));
    }
  EXPECT_TRUE(seen);
}

TEST(Cli, MalformedSpecExitsTwoWithKey) {
  const auto dir = std::filesystem::temp_directory_path() / "dilatia_cli";
  std::filesystem::create_directories(dir);
  const auto p = (dir / "bad.json").string();
  std::ofstream(p) << R"({"kind":"analytic","catalog":"euclidean","dim":2})";
  cli::RunConfig rc;
  rc.command = "build-cone";
  rc.space = p;
  const auto r = run_in_process(rc);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("'window'"), std::string::npos) << r.out;
  std::ofstream(p) << "{not json";
  EXPECT_EQ(run_in_process(rc).code, 2);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(shell("").code, 2);
  EXPECT_EQ(shell("verify-family").code, 2);
  EXPECT_EQ(shell("verify-family --family no_such_family").code, 2);
  EXPECT_EQ(shell("decompose --action disk_radial_action --epsilon -1").code, 2);
}

TEST(Cli, EveryCommandRuns) {
  EXPECT_EQ(shell("verify-linear --family linear_scale_family").code, 0);
  EXPECT_EQ(shell("verify-linear --family circle_long_way_family").code, 1);
  EXPECT_EQ(shell("decompose --action disk_radial_action --epsilon 1").code, 0);
  EXPECT_EQ(shell("decompose --action fixed_ring_action").code, 1);
  EXPECT_EQ(shell("derive-metric --family truncated_line_family --pairs 200").code, 0);
  EXPECT_EQ(shell("derive-metric --family unbounded_truncated_family").code, 1);
  EXPECT_EQ(shell("group-norm --space gallery:heisenberg --group heisenberg_group --family heisenberg_dilation").code, 0);
  EXPECT_EQ(shell("gallery list").code, 0);
  EXPECT_EQ(shell("verify-family --family " + kSpecs + "/disk_scaling.json").code, 0);
  EXPECT_EQ(shell("verify-family --family " + kSpecs + "/pentagon_cone.json").code, 0);
  EXPECT_EQ(shell("decompose --space " + kSpecs + "/sup_box.json --action radial_scale").code, 0);
}

TEST(Cli, DecomposeReportCarriesSummaries) {
  const Json j = Json::parse(shell("decompose --action disk_radial_action").out);
  EXPECT_TRUE(j["data"].contains("gamma_histogram"));
  EXPECT_TRUE(j["data"].contains("base_sample"));
  EXPECT_LE(j["data"]["residuals"]["max"].get<double>(), 1e-9);
}

TEST(Cli, GalleryListHasDocsAndNegatives) {
  const Json j = Json::parse(shell("gallery list").out);
  bool saw_negative = false;
  for (const auto& e : j["entries"]) {
    EXPECT_FALSE(e["doc"].get<std::string>().empty());
    saw_negative |= e["negative"].get<bool>();
  }
  EXPECT_TRUE(saw_negative);
}

TEST(Cli, SeedFlagEnvAndDeterminism) {
  const std::string args = "verify-family --family offset_scale_family";
  const auto a = shell(args + " --seed 7"), b = shell(args + " --seed 7"), c = shell(args + " --seed 8");
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(Json::parse(a.out)["seed"], 7u);
  const auto e = shell("--version");
  EXPECT_EQ(e.code, 0);
  setenv("DILATIA_SEED", "7", 1);
  const auto env = shell(args);
  unsetenv("DILATIA_SEED");
  EXPECT_EQ(env.out, a.out);
  setenv("DILATIA_SEED", "seven", 1);
  EXPECT_EQ(shell(args).code, 2);
  unsetenv("DILATIA_SEED");
}

TEST(Cli, OutFlagWritesTheReport) {
  const auto p = (std::filesystem::temp_directory_path() / "dilatia_out.json").string();
  std::filesystem::remove(p);
  const auto r = shell("verify-family --family linear_scale_family --out " + p);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), shell("verify-family --family linear_scale_family").out);
}

TEST(Cli, ToleranceOverridesAreRecorded) {
  const Json j = Json::parse(shell("verify-family --family linear_scale_family --tol 1e-6 --exact-tol 1e-10 --pairs 50 --grid 16").out);
  EXPECT_EQ(j["tolerances"]["abs_tol"], 1e-6);
  EXPECT_EQ(j["tolerances"]["exact_tol"], 1e-10);
  EXPECT_EQ(j["tolerances"]["sample_pairs"], 50);
  EXPECT_EQ(j["tolerances"]["grid_size"], 16);
}
