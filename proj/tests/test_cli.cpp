#include "rmolp/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <string>
#include <vector>

namespace rmolp {
namespace {

using nlohmann::json;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(RMOLP_DATA_DIR) + "/" + name; }

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("rmolp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

TEST(Cli, RadiusOfFiveRowFile) {
  const CliRun r = run({"radius", data("five_rows.json"), "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json rep = r.report();
  EXPECT_NEAR(rep["radius"]["rho"].get<double>(), 3.0550504633038934, 1e-9);
  EXPECT_EQ(rep["command"], "radius");
  EXPECT_EQ(rep["input_digest"].get<std::string>().size(), 64u);
  EXPECT_FALSE(rep.contains("wall_time_ms"));
}

TEST(Cli, RadiusSingleRowAndErrors) {
  EXPECT_NEAR(run({"radius", data("single_row.json"), "--json"}).report()["radius"]["rho"].get<double>(), 1.0, 1e-9);
  const CliRun infeasible = run({"radius", data("infeasible.json"), "--json"});
  EXPECT_EQ(infeasible.code, kExitInfeasible);
  EXPECT_EQ(infeasible.report()["error"]["code"], "NominalInfeasible");
  EXPECT_EQ(run({"radius", data("positive.json")}).code, kExitPrecondition);
}

TEST(Cli, TimingIsOptIn) {
  const CliRun r = run({"radius", data("five_rows.json"), "--json", "--timing"});
  EXPECT_TRUE(r.report().contains("wall_time_ms"));
}

TEST(Cli, FeasibleBracket) {
  EXPECT_EQ(run({"feasible", data("five_rows.json"), "--alpha", "2.9"}).code, kExitOk);
  EXPECT_EQ(run({"feasible", data("five_rows.json"), "--alpha", "3.2"}).code, kExitNegative);
  EXPECT_EQ(run({"feasible", data("single_row.json"), "--alpha", "0"}).code, kExitOk);
  const CliRun r = run({"feasible", data("five_rows.json"), "--alpha", "2.9", "--json"});
  EXPECT_EQ(r.report()["verdict"], "Feasible");
}

TEST(Cli, CertifyOutcomes) {
  const CliRun ok = run({"certify", data("positive.json"), "--point", "1,1,1.5", "--json", "--oracle", "3"});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(ok.report()["verdict"], "Certified");

  const CliRun neg = run({"certify", data("negative_u.json"), "--point", "1,1,1.5", "--json"});
  EXPECT_EQ(neg.code, kExitPrecondition);
  EXPECT_EQ(neg.report()["error"]["code"], "NegativeU");
  EXPECT_NE(neg.err.find("u in R^m_+"), std::string::npos);

  EXPECT_EQ(run({"certify", data("positive.json"), "--point", "3,3,3"}).code, kExitInfeasible);
  EXPECT_EQ(run({"certify", data("positive.json"), "--point", "1,x,1"}).code, kExitInput);
  EXPECT_EQ(run({"certify", data("positive.json")}).code, kExitInput);
}

TEST(Cli, CertifyRefutesWithWitness) {
  const TempFile f(R"({"m":2,"n":2,"C_bar":[[1,0],[0,1]],"u":[0,0],"v":[0,0],
    "constraints":[{"kind":"polytope","vertices":[[1,0,-5],[0,1,-5]]}]})");
  const CliRun r = run({"certify", f.path(), "--point", "0,0", "--json", "--oracle", "2"});
  EXPECT_EQ(r.code, kExitNegative) << r.err;
  const json rep = r.report();
  EXPECT_EQ(rep["verdict"], "Refuted");
  EXPECT_TRUE(rep["refutation"].contains("witness"));
  EXPECT_EQ(rep["oracle"]["outcome"], "Refuted");
}

TEST(Cli, JsonIsDeterministic) {
  const std::vector<std::string> args = {"certify", data("positive.json"), "--point", "1,1,1.5", "--json"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> radius = {"radius", data("five_rows.json"), "--json"};
  EXPECT_EQ(run(radius).out, run(radius).out);
}

TEST(Cli, VerifyRoundTripAndTampering) {
  const CliRun cert = run({"certify", data("positive.json"), "--point", "1,1,1.5", "--json"});
  ASSERT_EQ(cert.code, kExitOk);
  const TempFile report(cert.out);
  const CliRun ok = run({"verify", data("positive.json"), "--cert", report.path(), "--json"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out << ok.err;

  json tampered = cert.report();
  tampered["certificate"]["nominal"]["lambda"] = {0.7, 0.3};
  const TempFile bad(tampered.dump());
  const CliRun fail = run({"verify", data("positive.json"), "--cert", bad.path(), "--json"});
  EXPECT_EQ(fail.code, kExitNegative);
  EXPECT_EQ(fail.report()["verification"]["first_failure"], "endpoint_equality_nominal");

  // A certificate for a different problem is caught by the digest.
  json shifted = json::parse(std::ifstream(data("positive.json")));
  shifted["v"] = {0, -2, 0};
  const TempFile other_problem(shifted.dump());
  const CliRun other = run({"verify", other_problem.path(), "--cert", report.path(), "--json"});
  EXPECT_EQ(other.code, kExitNegative);
  EXPECT_EQ(other.report()["verification"]["first_failure"], "input_digest");

  const TempFile bare(cert.report()["certificate"].dump());
  EXPECT_EQ(run({"verify", data("positive.json"), "--cert", bare.path()}).code, kExitInput);
  EXPECT_EQ(run({"verify", data("positive.json"), "--cert", bare.path(), "--point", "1,1,1.5"}).code, kExitOk);
  const TempFile junk("{\"certificate\": 3}");
  EXPECT_EQ(run({"verify", data("positive.json"), "--cert", junk.path()}).code, kExitInput);
}

TEST(Cli, VerifyAtMachinePrecisionOnSubgradientCertificate) {
  // Both norm rows are active at the apex of a second-order cone, so the
  // endpoint systems keep a cone block and go through projected gradient.
  const TempFile problem(R"({"m":1,"n":2,"C_bar":[[1,1]],"u":[1],"v":[0.5,0.25],
    "constraints":[
      {"kind":"norm_ball","a_bar":[1,0],"Z":[[1,0],[0,1]],"delta":0.2,"s":2,"b_lo":0,"b_hi":0},
      {"kind":"norm_ball","a_bar":[0,1],"Z":[[1,0],[0,1]],"delta":0.2,"s":2,"b_lo":0,"b_hi":0}]})");
  const CliRun solve = run({"certify", problem.path(), "--point", "0,0", "--json"});
  ASSERT_EQ(solve.code, kExitOk) << solve.out << solve.err;
  const json cert = solve.report()["certificate"];
  ASSERT_EQ(cert["nominal"]["method"], "projected_gradient");
  const TempFile report(solve.out);
  EXPECT_EQ(run({"verify", problem.path(), "--cert", report.path()}).code, kExitOk);
  const CliRun strict = run({"verify", problem.path(), "--cert", report.path(), "--tol", "1e-15", "--json"});
  EXPECT_EQ(strict.code, kExitNegative) << strict.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitInput);
  EXPECT_EQ(run({"solve", data("five_rows.json")}).code, kExitInput);
  EXPECT_EQ(run({"radius", data("five_rows.json"), "--json", "--text"}).code, kExitInput);
  EXPECT_EQ(run({"radius", data("missing.json")}).code, kExitInput);
  EXPECT_EQ(run({"feasible", data("five_rows.json")}).code, kExitInput);
  EXPECT_EQ(run({"certify", data("positive.json"), "--point", "1,1,1.5", "--oracle", "1"}).code, kExitInput);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, ValidationErrorsNameTheConstraint) {
  const TempFile f(R"({"m":1,"n":1,"C_bar":[[1]],"u":[0],"v":[0],
    "constraints":[{"kind":"singleton","a_bar":[1],"b_bar":0},
                   {"kind":"box","a_lo":[2],"a_hi":[1],"b_lo":0,"b_hi":0}]})");
  const CliRun r = run({"certify", f.path(), "--point", "1", "--json"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_EQ(r.report()["error"]["code"], "BadInterval");
  EXPECT_EQ(r.report()["error"]["constraint"], 1);
}

TEST(Cli, TextModeIsDefault) {
  const CliRun r = run({"radius", data("five_rows.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("rho"), std::string::npos);
  EXPECT_THROW(json::parse(r.out), json::parse_error);
}

}  // namespace
}  // namespace rmolp
