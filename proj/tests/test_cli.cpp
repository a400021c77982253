#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ripchirp/cli.hpp"

using namespace ripchirp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path("cli_test_out") / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(SetSpec, Grammar) {
  EXPECT_EQ(cli::parse_set_spec("0,1,2"), (std::vector<u64>{0, 1, 2}));
  EXPECT_EQ(cli::parse_set_spec("1..4"), (std::vector<u64>{1, 2, 3, 4}));
  EXPECT_EQ(cli::parse_set_spec("1..3,7"), (std::vector<u64>{1, 2, 3, 7}));
  EXPECT_THROW(cli::parse_set_spec("3..1"), cli::UsageError);
  EXPECT_THROW(cli::parse_set_spec("a,b"), cli::UsageError);
  EXPECT_THROW(cli::parse_set_spec(""), cli::UsageError);
  const auto g = cli::parse_generator("M=4,r=3");
  EXPECT_EQ(g.M, 4u);
  EXPECT_EQ(g.r, 3u);
  EXPECT_THROW(cli::parse_generator("M=4"), cli::UsageError);
}

TEST_F(CliTest, SetSpecFromFile) {
  std::ofstream(path("set.txt")) << "1 2\n5..7\n";
  EXPECT_EQ(cli::parse_set_spec("@" + path("set.txt")), (std::vector<u64>{1, 2, 5, 6, 7}));
}

TEST(CliParams, SingleM) {
  const auto r = run({"params", "--m", "7586", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["m"].get<int>(), 7586);
  EXPECT_NEAR(j["gamma"].get<double>(), 9.1812207450079008e-06, 1e-15);
  EXPECT_GE(j["eps1"].get<double>(), 1.631e-7);
  EXPECT_NEAR(j["eps"].get<double>(), 3.2621143e-7, 1e-13);
  EXPECT_TRUE(j["feasible_gamma"].get<bool>());
  EXPECT_TRUE(j["feasible_eps"].get<bool>());
}

TEST(CliParams, Optimize) {
  const auto r = run({"params", "--optimize", "--m-min", "100", "--m-max", "20000", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["best"]["m"].get<int>(), 7586);
  EXPECT_EQ(j["sweep"].size(), 9951u);
}

TEST(CliParams, ExitCodes) {
  EXPECT_EQ(run({"params", "--m", "101"}).code, cli::kUsage);
  EXPECT_EQ(run({"params"}).code, cli::kUsage);
  EXPECT_EQ(run({"params", "--m", "abc"}).code, cli::kUsage);
  EXPECT_EQ(run({"params", "--bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"params", "--optimize", "--m-min", "100", "--m-max", "3000"}).code, cli::kNoFeasible);
  EXPECT_EQ(run({"params", "--m", "100"}).code, cli::kNoFeasible);
  EXPECT_EQ(run({}).code, cli::kUsage);
}

TEST(CliParams, TableOutput) {
  const auto r = run({"params", "--m", "7586"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gamma"), std::string::npos);
  EXPECT_EQ(r.out.find('{'), std::string::npos);
}

TEST_F(CliTest, BuildToyMatrix) {
  const auto r = run({"build", "--p", "101", "--m", "2", "--N", "24", "--out", path("toy.chirp")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("|A|    3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("|B|    8"), std::string::npos);
  const auto m = std::get<ComplexMatrix>(load_chirp1(path("toy.chirp")));
  EXPECT_EQ(m.rows(), 101u);
  EXPECT_EQ(m.cols(), 24u);
  EXPECT_TRUE(fs::exists(path("toy.chirp") + ".manifest.json"));

  ASSERT_EQ(run({"build", "--p", "101", "--m", "2", "--N", "24", "--real", "--out", path("toy_real.chirp")}).code, 0);
  const auto real = std::get<RealMatrix>(load_chirp1(path("toy_real.chirp")));
  EXPECT_EQ(real.rows(), 202u);
  EXPECT_EQ(real.cols(), 48u);
}

TEST_F(CliTest, BuildErrors) {
  EXPECT_EQ(run({"build", "--p", "101", "--m", "2", "--N", "25", "--out", path("x.chirp")}).code, cli::kCapacity);
  EXPECT_EQ(run({"build", "--p", "5", "--m", "2", "--N", "1", "--out", path("x.chirp")}).code, cli::kDegenerate);
  EXPECT_EQ(run({"build", "--p", "100", "--m", "2", "--N", "1", "--out", path("x.chirp")}).code, cli::kUsage);
  EXPECT_EQ(run({"build", "--m", "2", "--N", "1", "--out", path("x.chirp")}).code, cli::kUsage);
}

TEST_F(CliTest, BuildFromOrder) {
  const auto r = run({"build", "--k", "100", "--eps", "0", "--m", "2", "--N", "10", "--out", path("k.chirp")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("p      10007"), std::string::npos) << r.out;
  EXPECT_EQ(std::get<ComplexMatrix>(load_chirp1(path("k.chirp"))).rows(), 10007u);
}

TEST_F(CliTest, RicExhaustiveAndSampled) {
  ASSERT_EQ(run({"build", "--p", "101", "--m", "2", "--N", "24", "--out", path("toy.chirp")}).code, 0);
  const auto ex = run({"ric", "--matrix", path("toy.chirp"), "--k", "2", "--mode", "exhaustive", "--json"});
  ASSERT_EQ(ex.code, 0) << ex.err;
  const auto j = Json::parse(ex.out);
  EXPECT_NEAR(j["delta_lower"].get<double>(), 1 / std::sqrt(101.0), 1e-9);
  EXPECT_EQ(j["method"], "exhaustive");
  EXPECT_TRUE(j["seed"].is_null());

  const auto big = run({"ric", "--matrix", path("toy.chirp"), "--k", "20", "--mode", "exhaustive", "--json"});
  ASSERT_EQ(big.code, 0);
  EXPECT_EQ(Json::parse(big.out)["supports_examined"].get<int>(), 10626);

  const std::vector<std::string> sample = {"ric", "--matrix", path("toy.chirp"), "--k", "3", "--mode", "sample",
                                           "--trials", "1000", "--seed", "7", "--json"};
  const auto s1 = run(sample), s2 = run(sample);
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_EQ(Json::parse(s1.out)["seed"].get<int>(), 7);
}

TEST_F(CliTest, RicWorkersDoNotChangeOutput) {
  ASSERT_EQ(run({"build", "--p", "101", "--m", "2", "--N", "24", "--out", path("toy.chirp")}).code, 0);
  for (const std::string mode : {"exhaustive", "sample"}) {
    ASSERT_EQ(run({"ric", "--matrix", path("toy.chirp"), "--k", "3", "--mode", mode, "--seed", "5", "--workers", "1",
                   "--out", path("w1.json")})
                  .code,
              0);
    ASSERT_EQ(run({"ric", "--matrix", path("toy.chirp"), "--k", "3", "--mode", mode, "--seed", "5", "--workers", "4",
                   "--out", path("w4.json")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("w1.json")), slurp(path("w4.json"))) << mode;
  }
}

TEST_F(CliTest, RicTooManySupports) {
  ASSERT_EQ(run({"build", "--p", "101", "--m", "2", "--N", "24", "--real", "--out", path("r.chirp")}).code, 0);
  EXPECT_EQ(run({"ric", "--matrix", path("r.chirp"), "--k", "10"}).code, cli::kTooManySupports);
  EXPECT_EQ(run({"ric", "--matrix", path("missing.chirp"), "--k", "2"}).code, cli::kFailure);
}

TEST(CliAddcomb, EnergyDiffsetPropc) {
  const auto e = run({"addcomb", "energy", "--p", "7", "--A", "0,1,2", "--B", "0,1,2"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.out, "19\n");
  const auto d = run({"addcomb", "diffset", "--p", "7", "--A", "0,1", "--B", "0,2", "--json"});
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(Json::parse(d.out)["elements"], Json::parse("[0,1,5,6]"));
  const auto pc = run({"addcomb", "propc", "--p", "101", "--A", "1..10", "--B", "1..10", "--c0", "0.3333333333", "--json"});
  ASSERT_EQ(pc.code, 0) << pc.err;
  EXPECT_EQ(Json::parse(pc.out)["lhs"].get<int>(), 2504);
  EXPECT_EQ(run({"addcomb", "propc", "--p", "101", "--A", "1..10", "--B", "0..3"}).code, cli::kSetPrecondition);
  EXPECT_EQ(run({"addcomb", "propc", "--p", "101", "--A", "1..2", "--B", "1..3"}).code, cli::kSetPrecondition);
  EXPECT_EQ(run({"addcomb", "energy", "--p", "8", "--A", "1", "--B", "1"}).code, cli::kUsage);
  EXPECT_EQ(run({"addcomb"}).code, cli::kUsage);
}

TEST(CliAddcomb, EssTable) {
  const auto r = run({"addcomb", "ess", "--p", "4001", "--B-gen", "M=4,r=3", "--samples", "200", "--size", "60",
                      "--seed", "1", "--c5", "0.443341845210593", "--gamma", "0.0374784976685811", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 200u);
  EXPECT_DOUBLE_EQ(j["max_ratio"].get<double>(), 0.32488888888888889);
  EXPECT_TRUE(j["all_within_bound"].get<bool>());
  EXPECT_EQ(run({"addcomb", "ess", "--p", "4001", "--samples", "2", "--size", "3"}).code, cli::kUsage);
}

TEST(CliAddcomb, Bsg) {
  const auto r = run({"addcomb", "bsg", "--p", "101", "--A", "0..7", "--budget", "1", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["witness"]["difference_size"].get<int>(), 15);
  const auto none = run({"addcomb", "bsg", "--p", "101", "--A", "0,1,3,7,20,50", "--c1", "0.01", "--c4", "0.01",
                         "--mode", "random", "--budget", "50", "--seed", "3", "--json"});
  ASSERT_EQ(none.code, 0);
  EXPECT_TRUE(Json::parse(none.out)["witness"].is_null());
}

TEST_F(CliTest, ManifestsReplayByteIdentically) {
  ASSERT_EQ(run({"build", "--p", "101", "--m", "2", "--N", "24", "--out", path("toy.chirp")}).code, 0);
  const std::vector<std::vector<std::string>> commands = {
      {"params", "--m", "7586", "--out", path("params.json")},
      {"params", "--optimize", "--m-min", "7000", "--m-max", "8000", "--out", path("opt.json")},
      {"ric", "--matrix", path("toy.chirp"), "--k", "3", "--mode", "sample", "--trials", "200", "--seed", "11",
       "--workers", "3", "--out", path("ric.json")},
      {"addcomb", "energy", "--p", "7", "--A", "0..2", "--B", "0,1,2", "--out", path("energy.json")},
      {"addcomb", "ess", "--p", "4001", "--B-gen", "M=4,r=3", "--samples", "5", "--size", "60", "--seed", "2",
       "--out", path("ess.json")},
      {"addcomb", "bsg", "--p", "101", "--A", "0..5", "--out", path("bsg.json")},
  };
  for (const auto& cmd : commands) {
    const std::string out = cmd.back();
    ASSERT_EQ(run(cmd).code, 0) << out;
    const auto manifest = Json::parse(slurp(out + ".manifest.json"));
    EXPECT_EQ(manifest["tool_version"], cli::kToolVersion);
    EXPECT_EQ(manifest["outputs"][0], out);
    ASSERT_EQ(run({"replay", "--manifest", out + ".manifest.json", "--out", out + ".replayed"}).code, 0) << out;
    EXPECT_EQ(slurp(out), slurp(out + ".replayed")) << out;
  }
  // the matrix file replays too
  ASSERT_EQ(run({"replay", "--manifest", path("toy.chirp") + ".manifest.json", "--out", path("toy2.chirp")}).code, 0);
  EXPECT_EQ(slurp(path("toy.chirp")), slurp(path("toy2.chirp")));
  const auto ric_manifest = Json::parse(slurp(path("ric.json") + ".manifest.json"));
  EXPECT_EQ(ric_manifest["seed"].get<int>(), 11);
  EXPECT_EQ(ric_manifest["inputs"]["--k"], "3");
}
