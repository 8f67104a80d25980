#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(SU2FOURIER_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args) {
  const CliRun r = run(args + " --format json");
  EXPECT_EQ(r.code, 0) << args;
  return nlohmann::json::parse(r.out);
}

int count_lines(const std::string& s, const std::string& prefix) {
  std::istringstream is(s);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST(Cli, SelftestQuickPasses) {
  const CliRun r = run("selftest --level quick");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(r.out, "FAIL"), 0);
  EXPECT_GE(count_lines(r.out, "PASS"), 10);
}

TEST(Cli, SelftestFullPrintsAtLeastTwentyInvariants) {
  const CliRun r = run("selftest --level full");
  EXPECT_EQ(r.code, 0);
  EXPECT_GE(count_lines(r.out, "PASS") + count_lines(r.out, "FAIL"), 20);
}

TEST(Cli, SelftestCatchesASignErrorInTheKernelDerivative) {
  const CliRun r = run("selftest --level quick --inject-fault deriv-sign");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL spectral.kernel_identity"), std::string::npos);
}

TEST(Cli, DivergenceAtDegreeZero) {
  const auto j = run_json("divergence --n-list 0 --points 0,0,0");
  ASSERT_EQ(j.size(), 1u);
  EXPECT_NEAR(j[0]["outputs"]["lower_bound"].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_GT(j[0]["outputs"]["lambda_abs"].get<double>(), 0.0);
}

TEST(Cli, DivergenceColumns) {
  const CliRun r = run("divergence --n-list 2 --points 0,0,0");
  ASSERT_EQ(r.code, 0);
  const std::string header = r.out.substr(0, r.out.find('\n'));
  for (const char* col : {"n", "lambda_abs", "lower_bound", "l1_reference", "lip_norm_bound", "ratio_to_2n3"})
    EXPECT_NE(("," + header + ",").find(std::string(",") + col + ","), std::string::npos) << col;
}

TEST(Cli, DivergenceDuplicatePointsAgree) {
  const auto j = run_json("divergence --n-list 8,16 --points \"0.3,1.2,4.0;1.0,2.0,0.5;0.3,1.2,4.0\"");
  ASSERT_EQ(j.size(), 6u);
  for (int b : {0, 3}) {
    EXPECT_EQ(j[b]["outputs"]["lambda_abs"], j[b + 2]["outputs"]["lambda_abs"]);
    EXPECT_NEAR(j[b]["outputs"]["lambda_abs"].get<double>(), j[b + 1]["outputs"]["lambda_abs"].get<double>(), 1e-9);
    EXPECT_EQ(j[b]["parameters"]["point"], "0");
    EXPECT_EQ(j[b + 1]["parameters"]["point"], "1");
  }
}

TEST(Cli, MalformedInputsExitWithTwo) {
  EXPECT_EQ(run("divergence --points 1,2").code, 2);
  EXPECT_EQ(run("divergence --points 0.1,abc,0.3").code, 2);
  EXPECT_EQ(run("divergence --points 0.1,4.0,0.3").code, 2);
  EXPECT_EQ(run("divergence --n-list 3,x").code, 2);
  EXPECT_EQ(run("converge --field nonsense:1").code, 2);
  EXPECT_EQ(run("converge --field lip:1.5").code, 2);
  EXPECT_EQ(run("modulus --field constant --t-min 1").code, 2);
  EXPECT_EQ(run("modulus --field constant --t-min 1.5").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("divergence --format xml").code, 2);
}

TEST(Cli, StrictModeRejectsTinyQuadrature) {
  EXPECT_EQ(run("divergence --n-list 8 --nodes 2").code, 0);
  EXPECT_EQ(run("divergence --n-list 8 --nodes 2 --strict").code, 3);
  EXPECT_EQ(run("converge --field constant --n-max 8 --points 0,0,0 --nodes 4 --strict").code, 3);
  EXPECT_EQ(run("divergence --n-list 8 --strict").code, 0);
}

TEST(Cli, ConvergeOnConstantsAndCharacters) {
  for (const auto& rec : run_json("converge --field constant --n-max 6 --points random:3"))
    EXPECT_LT(rec["outputs"]["abs_error"].get<double>(), 1e-10);
  const auto j = run_json("converge --field character:3 --n-max 8 --points random:3");
  ASSERT_EQ(j.size(), 24u);
  for (const auto& rec : j) {
    const int N = std::stoi(rec["parameters"]["N"].get<std::string>());
    const double err = rec["outputs"]["abs_error"].get<double>();
    if (N >= 3) EXPECT_LT(err, 1e-6) << N;
    else EXPECT_NEAR(rec["outputs"]["partial_sum"].get<double>(), 0.0, 1e-6) << N;
  }
}

TEST(Cli, ConvergeImprovesForAHoelderField) {
  const auto j = run_json("converge --field lip:0.5 --n-max 64 --points random:1 --seed 3");
  ASSERT_EQ(j.size(), 64u);
  const double e8 = j[7]["outputs"]["abs_error"].get<double>();
  const double e64 = j[63]["outputs"]["abs_error"].get<double>();
  EXPECT_LT(e64, e8);
}

TEST(Cli, ModulusOfAConstantIsZero) {
  const auto j = run_json("modulus --field constant --t-min 0.05 --nodes 8");
  ASSERT_GE(j.size(), 2u);
  for (std::size_t i = 0; i + 1 < j.size(); ++i) EXPECT_NEAR(j[i]["outputs"]["omega"].get<double>(), 0.0, 1e-13);
  const auto& dai = j.back();
  EXPECT_EQ(dai["experiment"], "dai_criterion");
  EXPECT_NEAR(dai["outputs"]["estimate"].get<double>(), 0.0, 1e-25);
  EXPECT_EQ(dai["outputs"]["converged"].get<double>(), 1.0);
}

TEST(Cli, ModulusFlagsAHoelderField) {
  const auto j = run_json("modulus --field lip:0.5 --t-min 0.01 --nodes 12");
  EXPECT_EQ(j.back()["outputs"]["converged"].get<double>(), 1.0);
  EXPECT_GE(j.back()["outputs"]["loglog_slope"].get<double>(), 0.4);
}

TEST(Cli, OutputIsDeterministic) {
  const auto dir = std::filesystem::temp_directory_path() / "su2fourier_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  const std::string args = "converge --field witness:4 --n-max 6 --points random:2 --seed 9 --out ";
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string() + " --threads 1").code, 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  EXPECT_EQ(sa.rfind("experiment,", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ThreadCountDoesNotChangeResults) {
  const std::string args = "converge --field lip:0.5 --n-max 4 --points random:1 --nodes 16";
  EXPECT_EQ(run(args + " --threads 1").out, run(args + " --threads 3").out);
}

TEST(Cli, ProfileFieldFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "su2fourier_profile.txt";
  {
    std::ofstream out(path);
    out << "# theta value\n0 1\n1.0 -1\n3.141592653589793 0\n";
  }
  const auto j = run_json("converge --field profile:" + path.string() + " --n-max 4 --points 0,0.5,0");
  EXPECT_EQ(j.size(), 4u);
  EXPECT_NEAR(j[0]["outputs"]["value"].get<double>(), 0.0, 1e-12);
  std::filesystem::remove(path);
  EXPECT_EQ(run("converge --field profile:/nonexistent/file").code, 2);
}
