#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "exnet/cli.hpp"
#include "oracles.hpp"

namespace exnet::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "exnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("exnet_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv(kLimitEnv);
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv(kLimitEnv);
  }

  std::string write(const std::string& name, const std::string& text) {
    auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string write_graph(const std::string& name, const ExchangeGraph& g) { return write(name, format_graph(g)); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, CheckBackbone) {
  auto r = call({"check", write_graph("g.json", backbone_graph())});
  EXPECT_EQ(r.code, kAffirmative);
  auto j = Json::parse(r.out);
  EXPECT_TRUE(j["successful"].get<bool>());
  EXPECT_EQ(j["method"], "topological");
}

TEST_F(CliTest, CheckBackbonePlusOneLink) {
  auto r = call({"check", write_graph("g.json", backbone_graph().with_links({{0, 1}}))});
  EXPECT_EQ(r.code, kNegative);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["structure"]["failing_components"][0]["reason"], "not-complete-bipartite");
}

TEST_F(CliTest, CheckMalformedJson) {
  auto r = call({"check", write("bad.json", "{\"buyers\": [")});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;
  EXPECT_EQ(call({"check", path("missing.json")}).code, kUsageError);
  EXPECT_EQ(call({"frobnicate"}).code, kUsageError);
  EXPECT_EQ(call({}).code, kUsageError);
}

TEST_F(CliTest, EnumerateSinglePair) {
  auto g = ExchangeGraph({{"b", Quantity(2)}}, {{"s", Quantity(2)}}, {{0, 0}});
  auto r = call({"enumerate", write_graph("g.json", g)});
  EXPECT_EQ(r.code, kAffirmative);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["infeasible_fraction"], "0/1");
  EXPECT_FALSE(j["estimated"].get<bool>());
}

TEST_F(CliTest, EnumerateStar) {
  auto r = call({"enumerate", write_graph("g.json", star_instance(2, Quantity(1), Quantity(1)))});
  EXPECT_EQ(r.code, kNegative);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["infeasible_fraction"], format_pq(enumerate_sessions(star_instance(2, Quantity(1), Quantity(1))).infeasible_fraction));
  EXPECT_NE(j["infeasible_fraction"], "0/1");
}

TEST_F(CliTest, EnumerateLimit) {
  std::vector<Buyer> b;
  std::vector<Seller> s;
  std::vector<Link> links;
  for (std::size_t i = 0; i < 13; ++i) {
    b.push_back({"b" + std::to_string(i), Quantity(1)});
    s.push_back({"s" + std::to_string(i), Quantity(1)});
    links.push_back({i, i});
  }
  auto file = write_graph("big.json", ExchangeGraph(b, s, links));
  EXPECT_EQ(call({"enumerate", file}).code, kResourceLimit);

  auto sampled = call({"enumerate", file, "--sample", "100", "--seed", "4"});
  EXPECT_EQ(sampled.code, kAffirmative);
  EXPECT_TRUE(Json::parse(sampled.out)["estimated"].get<bool>());

  EXPECT_EQ(call({"enumerate", file, "--limit", "13"}).code, kAffirmative);
  ::setenv(kLimitEnv, "13", 1);
  EXPECT_EQ(call({"enumerate", file}).code, kAffirmative);
  EXPECT_EQ(call({"enumerate", file, "--limit", "12"}).code, kResourceLimit);
  ::setenv(kLimitEnv, "lots", 1);
  EXPECT_EQ(call({"enumerate", file}).code, kUsageError);
}

TEST_F(CliTest, FeasibleAndWitness) {
  auto star = write_graph("star.json", star_instance(2, Quantity(1), Quantity(1)));
  auto f = call({"feasible", star});
  EXPECT_EQ(f.code, kAffirmative);
  EXPECT_EQ(Json::parse(f.out)["allocation"]["transactions"][0][0], "1/1");

  ExchangeGraph lone({{"b1", Quantity(1)}, {"b2", Quantity(1)}}, {{"s1", Quantity(2)}}, {{0, 0}});
  EXPECT_EQ(call({"feasible", write_graph("lone.json", lone)}).code, kNegative);

  auto w = call({"witness", star});
  EXPECT_EQ(w.code, kNegative);
  auto j = Json::parse(w.out);
  auto order = ordering_from_json(j["witness"]);
  EXPECT_FALSE(run_session(star_instance(2, Quantity(1), Quantity(1)), order).feasible);
  EXPECT_FALSE(j["outcome"]["feasible"].get<bool>());

  auto none = call({"witness", write_graph("bb.json", backbone_graph())});
  EXPECT_EQ(none.code, kAffirmative);
  EXPECT_TRUE(Json::parse(none.out)["witness"].is_null());
}

TEST_F(CliTest, GenStarWithReserveIsSuccessful) {
  auto out = path("star.json");
  EXPECT_EQ(call({"gen-star", "--buyers", "3", "--demand", "1", "--reserve", "2", "--output", out}).code, kAffirmative);
  auto g = load_graph(out);
  EXPECT_EQ(g.sellers()[0].supply, Quantity(3));
  auto r = call({"check", out});
  EXPECT_EQ(r.code, kAffirmative) << r.out;
  EXPECT_EQ(Json::parse(r.out)["method"], "enumeration");
}

TEST_F(CliTest, GenStarThenMaxUnmet) {
  auto gen = call({"gen-star", "--buyers", "3", "--demand", "1", "--reserve", "0"});
  ASSERT_EQ(gen.code, kAffirmative);
  EXPECT_EQ(parse_graph(gen.out), star_instance(3, Quantity(1), Quantity(1)));
  auto r = call({"max-unmet", write("star.json", gen.out)});
  EXPECT_EQ(r.code, kNegative);
  EXPECT_EQ(Json::parse(r.out)["value"], "1/1");
  EXPECT_EQ(call({"gen-star", "--buyers", "1"}).code, kUsageError);
  EXPECT_EQ(call({"gen-star", "--buyers", "3", "--demand", "x"}).code, kUsageError);
}

TEST_F(CliTest, OutputMatchesLibrary) {
  auto g = star_instance(3, Quantity(1), Quantity(1));
  auto file = write_graph("g.json", g);
  EXPECT_EQ(call({"enumerate", file}).out, summary_to_json(enumerate_sessions(g)).dump(2) + "\n");
  EXPECT_EQ(call({"check", file}).out, verdict_to_json(decide_success(g), g).dump(2) + "\n");
}

TEST_F(CliTest, ExperimentDefaultsReportTwoLinkCounts) {
  auto csv = path("e.csv"), json = path("e.json");
  auto r = call({"experiment", "--k-min", "1", "--k-max", "2", "--csv", csv, "--json", json, "--jobs", "2"});
  EXPECT_EQ(r.code, kAffirmative) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["per_k"][1]["k"], 2);
  EXPECT_EQ(j["per_k"][1]["graphs"], 28);
  EXPECT_EQ(j["per_k"][1]["successful"], 1);
  EXPECT_NE(r.err.find("k=2: 1 successful of 28"), std::string::npos);
  EXPECT_TRUE(fs::exists(csv));
  EXPECT_TRUE(fs::exists(json));
}

TEST_F(CliTest, ExperimentFromConfig) {
  auto csv = path("c.csv"), json = path("c.json");
  auto cfg = write("cfg.json", R"({"profile":"unit","k_min":0,"k_max":1,"output":{"csv":")" + csv +
                                    R"(","json":")" + json + R"("}})");
  auto r = call({"experiment", "--config", cfg});
  EXPECT_EQ(r.code, kAffirmative) << r.err;
  EXPECT_EQ(Json::parse(r.out)["rows"], 9);
  EXPECT_EQ(call({"experiment", "--config", write("bad.json", "{")}).code, kUsageError);
}

// The real binary: exit codes and stdout-only payloads.
TEST_F(CliTest, BinaryExitCodes) {
  auto good = write_graph("bb.json", backbone_graph());
  auto bad = write_graph("bb1.json", backbone_graph().with_links({{0, 1}}));
  auto status = [&](const std::string& args) {
    std::string cmd = std::string(EXNET_CLI_PATH) + " " + args + " > " + path("out.txt") + " 2> " + path("err.txt");
    int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("check " + good), 0);
  EXPECT_EQ(status("check " + bad), 1);
  EXPECT_EQ(status("check " + write("broken.json", "nope")), 2);
  EXPECT_EQ(status("enumerate " + good), 0);
  std::ifstream in(path("out.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_TRUE(Json::accept(ss.str())) << ss.str();
}

}  // namespace
}  // namespace exnet::cli
