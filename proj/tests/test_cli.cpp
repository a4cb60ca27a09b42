#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfprod/cli.hpp"

using namespace cfprod;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cfprod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CFPROD_DATA_DIR) + "/" + name; }

Json json_of(const Run& r) { return Json::parse(r.out); }

}  // namespace

TEST(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"cfp", "--left", data("p4.json")}).code, 1);
  EXPECT_EQ(run_cli({"cfp", "--left", data("p4.json"), "--right", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(run_cli({"bz", "--B", "2", "--z", "x"}).code, 1);
  EXPECT_EQ(run_cli({"bz", "--B", "4", "--z", "1"}).code, 1);
  EXPECT_EQ(run_cli({"cocycles", "--G", "2", "--M", "2", "--degree", "9"}).code, 1);
}

TEST(Cli, HelpExitsWithZero) { EXPECT_EQ(run_cli({"--help"}).code, 0); }

TEST(Cli, MalformedModelReportsPath) {
  const auto path = std::filesystem::temp_directory_path() / "cfprod_bad_model.json";
  std::ofstream(path) << R"({"kind":"premetric_group","invariant_factors":[2],"q":["0"]})";
  const auto r = run_cli({"grade", "--in", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("$.q"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, CfpOfP4WithItself) {
  const auto r = run_cli({"cfp", "--left", data("p4.json"), "--right", data("p4.json"), "--report"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["summary"]["central_charge_index"], 2);
  EXPECT_EQ(j["summary"]["twist_multiset"], Json::parse(R"(["0","1/4","1/4","1/2"])"));
  EXPECT_EQ(j["result"]["kind"], "pointed_category");
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"cfp", "--left", data("su2_4.json"), "--right", data("vec_z4.json")};
  const auto a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json_of(a)["basis"].size(), 5u);
  const auto m1 = run_cli({"mext", "--B", "2", "--z", "1"});
  const auto m2 = run_cli({"--jobs", "2", "mext", "--B", "2", "--z", "1"});
  EXPECT_EQ(m1.out, m2.out);
  EXPECT_EQ(json_of(m1)["count"], 8);
  EXPECT_EQ(json_of(run_cli({"mext", "--B", "2", "--z", "0"}))["count"], 2);
}

TEST(Cli, OutputFileOption) {
  const auto path = std::filesystem::temp_directory_path() / "cfprod_center.json";
  ASSERT_EQ(run_cli({"--out", path.string(), "center", "--B", "2", "--z", "1"}).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto m = parse_model_file(ss.str());
  EXPECT_TRUE(m.is_pointed());
  std::filesystem::remove(path);
}

TEST(Cli, IsoExitCodes) {
  EXPECT_EQ(run_cli({"iso", "--left", data("p4.json"), "--right", data("p4.json")}).code, 0);
  const auto r = run_cli({"iso", "--left", data("toric_code.json"), "--right", data("semion_squared.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(json_of(r)["isomorphic"].get<bool>());
}

TEST(Cli, CapacityExitsWithThree) {
  EXPECT_EQ(run_cli({"cocycles", "--G", "64", "--M", "2", "--degree", "4"}).code, 3);
}

TEST(Cli, MathFailuresExitWithTwo) {
  EXPECT_EQ(run_cli({"cfp", "--left", data("su2_4.json"), "--right", data("su2_4.json")}).code, 2);
  EXPECT_EQ(run_cli({"cfp", "--left", data("p4.json"), "--right", data("toric_code.json")}).code, 1);
}

TEST(Cli, ZestWithDatumGivesZ4) {
  const auto r = run_cli({"zest", "--in", data("vec_z2_rep_z2.json"), "--datum", data("lambda_z2.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = parse_model_file(r.out);
  ASSERT_TRUE(m.is_ring());
  const auto& z = std::get<GradedFusionRing>(m.value);
  std::ifstream in(data("vec_z4.json"));
  std::stringstream ss;
  ss << in.rdbuf();
  const auto v4 = std::get<GradedFusionRing>(parse_model_file(ss.str()).value);
  EXPECT_FALSE(find_ring_isomorphisms(z, v4, false).empty());
}

TEST(Cli, ZestEmitsASolvedDatum) {
  const auto r = run_cli({"zest", "--in", data("su2_4.json"), "--right", data("p4.json"), "--emit-datum"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(parse_model_file(r.out).is_datum());
}

TEST(Cli, TwistsThroughCfp) {
  const auto r = run_cli({"twists", "--left", data("z_svec.json"), "--right", data("p4.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["zested"], Json::parse(R"(["0","1/2","1/8","1/8"])"));
  EXPECT_EQ(j["zested"], j["grade_level"]);
}

TEST(Cli, CondenseTheToricCodeBoson) {
  const auto r = run_cli({"condense", "--in", data("toric_code.json"), "--sub", "[[0,1]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["summary"]["order"], 1);
  EXPECT_EQ(run_cli({"condense", "--in", data("semion_squared.json"), "--sub", "[[1,0]]"}).code, 2);
}

TEST(Cli, CocyclesCounts) {
  const auto r = run_cli({"cocycles", "--G", "2,2", "--M", "2", "--degree", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["classes"], 8);
}

TEST(Cli, VerifyNegativeControlFails) {
  const auto r = run_cli({"verify-paper", "--inject-fault", "--json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(json_of(r)["passed"].get<bool>());
}
