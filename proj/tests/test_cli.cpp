#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

using json = nlohmann::json;

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + HHREC_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string last_line(const std::string& s) {
  const auto end = s.find_last_not_of('\n');
  const auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hhrec_cli_test_" + name);
}

}  // namespace

TEST(CliGen, CsvK1) {
  const auto r = run("gen --k 1 --a 1 --init 1,1,1 --from 0 --to 8 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("7,393\n8,1093\n"), std::string::npos);
  EXPECT_EQ(r.out.rfind("n,value\n", 0), 0u);
}

TEST(CliGen, BFileK2) {
  const auto r = run("gen --k 2 --a 1 --init 1,1,1,1,1 --to 12 --format bfile");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(last_line(r.out), "12 449");
}

TEST(CliGen, WindowCoversInitAndNegativeIndices) {
  const auto r = run("gen --k 1 --a 1 --init 1,1,1 --from -2 --to -1 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "n,value\n-2,7\n-1,3\n");
}

TEST(CliGen, UsageErrors) {
  EXPECT_EQ(run("gen --k 1 --init 1,2").code, 2);
  EXPECT_EQ(run("gen --k 1 --init 1,2,x").code, 2);
  EXPECT_EQ(run("gen --k 1 --init 1,2,3 --a 0").code, 2);
  EXPECT_EQ(run("gen --k 1 --init 1,2,3 --format xml").code, 2);
  EXPECT_EQ(run("gen --init 1,2,3").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("gen --k 1 --a 1 --init 1,2,3 --to 4 --format bfile").code, 2);  // non-integer values
}

TEST(CliGen, ZeroPivotIsDegenerate) { EXPECT_EQ(run("gen --k 1 --a 1 --init 0,1,1 --to 5").code, 3); }

TEST(CliGen, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST(CliInvariant, AllOnes) {
  const auto r = run("invariant --k 1 --a 1 --init 1,1,1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["K"], "14");
}

TEST(CliInvariant, AllRoutes) {
  const auto r = run("invariant --k 1 --a 1 --init 1,2,3 --all-routes");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["agreement"], true);
  EXPECT_EQ(j["routes"].size(), 6u);
  for (const auto& route : j["routes"]) EXPECT_EQ(route["value"], "32/3");
}

TEST(CliInvariant, AllRoutesUsesShiftedRatio) {
  const auto r = run("invariant --k 2 --a 1 --init 1,1,1,1,1 --all-routes");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["agreement"], true);
  EXPECT_EQ(j["routes"][1]["route"], "ratio_shifted");
  EXPECT_EQ(j["routes"][1]["value"], "28");
}

TEST(CliInvariant, Symbolic) {
  const auto r = run("invariant --k 1 --symbolic");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["P0"], "x0*x2^-1 + 1 + x0^-1*x2");
  EXPECT_EQ(j["P2"], "x1^-1*x2^-1 + x0^-1*x2^-1 + x0^-1*x1^-1");
  const auto routes = json::parse(run("invariant --k 2 --symbolic --all-routes").out);
  EXPECT_EQ(routes["agreement"], true);
}

TEST(CliInvariant, DegenerateNamesRoute) {
  EXPECT_EQ(run("invariant --k 1 --a 1 --init 1,0,1").code, 3);
  EXPECT_EQ(run("invariant --k 1").code, 2);
}

TEST(CliVerify, NumericCampaign) {
  const auto r = run("verify --k 2 --trials 50 --seed 1 --checks all");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("0 fail"), std::string::npos);
}

TEST(CliVerify, SymbolicCampaign) {
  EXPECT_EQ(run("verify --k 1 --symbolic --checks laurent,explicit,first-integral").code, 0);
}

TEST(CliVerify, SymbolicCap) {
  EXPECT_EQ(run("verify --k 3 --symbolic --checks laurent").code, 2);
  EXPECT_EQ(run("verify --k 3 --symbolic --checks laurent", "HH_MAX_SYMBOLIC_K=1").code, 2);
  EXPECT_EQ(run("verify --k 2 --symbolic --checks laurent", "HH_MAX_SYMBOLIC_K=1").code, 2);
  EXPECT_EQ(run("verify --k 2 --symbolic --checks laurent", "HH_MAX_SYMBOLIC_K=2").code, 0);
  EXPECT_EQ(run("verify --k 1 --symbolic --checks laurent", "HH_MAX_SYMBOLIC_K=zero").code, 2);
}

TEST(CliVerify, FaultInjection) {
  const auto r = run("verify --k 1 --trials 3 --seed 9 --checks linear_relation --inject-fault linear_relation --json");
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["summary"]["fail"], 3);
  for (const auto& rec : j["results"]) {
    EXPECT_EQ(rec["status"], "fail");
    EXPECT_TRUE(rec["witness"]["index"].is_number_integer());
  }
}

TEST(CliVerify, JsonReportFileAndDeterminism) {
  const auto path = temp_file("report.json");
  const std::string args = "verify --k 1 --trials 4 --seed 77 --json --no-timing";
  const auto a = run(args + " --output " + path.string());
  const auto b = run(args + " --threads 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::ifstream in(path);
  const auto doc = json::parse(in);
  EXPECT_EQ(doc["config"]["seed"], 77);
  std::filesystem::remove(path);
}

TEST(CliVerify, BadChecks) {
  EXPECT_EQ(run("verify --k 1 --checks nope").code, 2);
  EXPECT_EQ(run("verify --k 1 --checks laurent").code, 2);
  EXPECT_EQ(run("verify --k 1 --trials 0").code, 2);
}

TEST(CliClosedForm, Coeffs) {
  const auto r = run("closed-form --k 1 --a 1 --init 1,1,1 --coeffs");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["triples"][0]["q"], "5/11");
  EXPECT_EQ(j["triples"][0]["r"], "144/143");
  EXPECT_EQ(j["triples"][0]["s"], "-6/13");  // -66/143 in lowest terms
}

TEST(CliClosedForm, Eval) {
  const auto r = run("closed-form --k 1 --a 1 --init 1,1,1 --eval 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"], "7");
  EXPECT_EQ(json::parse(run("closed-form --k 1 --a 1 --init 1,1,1 --eval -2").out)["value"], "7");
}

TEST(CliClosedForm, Errors) {
  EXPECT_EQ(run("closed-form --k 1 --a -8/3 --init 1,1,1 --eval 3").code, 3);  // K = 3
  EXPECT_EQ(run("closed-form --k 1 --a 1 --init 1,1,1").code, 2);
  EXPECT_EQ(run("closed-form --k 1 --a 1 --init 1,1,1 --eval 1 --coeffs").code, 2);
}

TEST(CliDetect, Generated) {
  const auto r = run("detect --gen --k 1 --a 1 --init 1,1,1");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["order"], 6);
  EXPECT_EQ(j["charpoly"], json({"1", "0", "-14", "0", "14", "0", "-1"}));
}

TEST(CliDetect, FromFiles) {
  const auto path = temp_file("const.txt");
  {
    std::ofstream out(path);
    for (int n = 0; n < 10; ++n) out << n << " 5\n";
  }
  const auto r = run("detect --input " + path.string() + " --max-order 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["order"], 1);
  {
    std::ofstream out(path);
    out << "0 1\n1 2\n";
  }
  EXPECT_EQ(run("detect --input " + path.string()).code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run("detect --input /nonexistent/file").code, 2);
  EXPECT_EQ(run("detect").code, 2);
}

TEST(CliDetect, JsonRoundTrip) {
  const auto path = temp_file("seq.json");
  const auto gen = run("gen --k 1 --a 2/3 --init 1,-2,3/5 --from -4 --to 20 --format json --output " + path.string());
  ASSERT_EQ(gen.code, 0);
  const auto r = run("detect --input " + path.string() + " --echo-values");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  std::ifstream in(path);
  const auto original = json::parse(in);
  ASSERT_EQ(j["values"].size(), original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    EXPECT_EQ(j["values"][i]["n"], original[i]["n"]);
    EXPECT_EQ(j["values"][i]["value"], original[i]["value"]);
  }
  EXPECT_EQ(j["order"], 6);
  std::filesystem::remove(path);
}
