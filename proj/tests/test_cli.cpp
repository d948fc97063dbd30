#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ucvrp/cli.hpp"
#include "ucvrp/solution_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out call(std::vector<std::string> args) {
  args.insert(args.begin(), "ucvrp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = ucvrp::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("ucvrp_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string at(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, SolveThenVerify) {
  ASSERT_EQ(call({"gen", "--seed", "7", "--terminals", "6", "--out", at("in.ucvrp")}).code, 0);
  Out s = call({"solve", "--epsilon", "1/2", at("in.ucvrp"), "--out", at("sol.txt"), "--stats", at("stats.csv"), "--oracle"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NO_THROW(ucvrp::parse_solution_text(slurp(at("sol.txt"))));
  std::string stats = slurp(at("stats.csv"));
  EXPECT_EQ(stats.rfind("# ucvrp-stats 1\ninstance,n,cost,oracle_cost,ratio,", 0), 0u);
  Out v = call({"verify", at("in.ucvrp"), at("sol.txt"), "--local", "--show"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("component 0"), std::string::npos);
}

TEST_F(Cli, VerifyFlagsCapacity) {
  std::ofstream(at("in.ucvrp")) << "ucvrp 1\nv 0 -1 0\nv 1 0 1\nv 2 0 1\nt 1 0.6\nt 2 0.6\n";
  std::ofstream(at("bad.txt")) << "ucvrp-sol 1\ntour 0 dummy=0 : 1 2\n";
  Out v = call({"verify", at("in.ucvrp"), at("bad.txt")});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("capacity of 1"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"solve"}).code, 2);
  EXPECT_EQ(call({"solve", "--bogus", "x"}).code, 2);
  EXPECT_EQ(call({"solve", at("missing.ucvrp")}).code, 2);
  std::ofstream(at("in.ucvrp")) << "ucvrp 1\nv 0 -1 0\nv 1 0 1\nt 1 0.5\n";
  EXPECT_EQ(call({"solve", at("in.ucvrp"), "--epsilon", "0.4"}).code, 2);
  EXPECT_EQ(call({"solve", at("in.ucvrp"), "--override", "delta=1"}).code, 2);
  EXPECT_EQ(call({"solve", at("in.ucvrp"), "--caps", "cfg=0"}).code, 1);
  EXPECT_EQ(call({"gen", "--family", "tree"}).code, 2);
}

TEST_F(Cli, DeterministicOutput) {
  ASSERT_EQ(call({"gen", "--seed", "3", "--terminals", "9", "--out", at("a.ucvrp")}).code, 0);
  ASSERT_EQ(call({"gen", "--seed", "3", "--terminals", "9", "--out", at("b.ucvrp")}).code, 0);
  std::string a = slurp(at("a.ucvrp")), b = slurp(at("b.ucvrp"));
  EXPECT_EQ(a.substr(a.find('\n')), b.substr(b.find('\n')));
  Out s1 = call({"solve", at("a.ucvrp")});
  Out s2 = call({"solve", at("a.ucvrp")});
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_NE(a.find("# ucvrp gen --seed 3 --terminals 9"), std::string::npos);
}

TEST_F(Cli, GenFamiliesAndReduce) {
  Out p = call({"gen", "--family", "path", "--sizes", "0.6,0.6,0.4,0.4"});
  ASSERT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("t 4 0.4"), std::string::npos);
  EXPECT_EQ(call({"gen", "--family", "star", "--terminals", "5", "--out", at("s.ucvrp")}).code, 0);
  ASSERT_EQ(call({"gen", "--seed", "2", "--terminals", "10", "--reduce", "--out", at("r.ucvrp")}).code, 0);
  EXPECT_TRUE(fs::exists(at("r.ucvrp.origin")));
  EXPECT_EQ(call({"solve", at("r.ucvrp")}).code, 0);
}

TEST_F(Cli, BenchCsv) {
  ASSERT_EQ(call({"gen", "--count", "3", "--terminals", "5", "--out", at("suite")}).code, 0);
  Out b = call({"bench", "--dir", at("suite"), "--out", at("report.csv")});
  ASSERT_EQ(b.code, 0) << b.err;
  std::string csv = slurp(at("report.csv"));
  EXPECT_EQ(csv.rfind("instance,n,solver,cost,ratio_vs_exact,wall_ms\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 3);
  EXPECT_NE(b.out.find("mean_ratio solve"), std::string::npos);
}
