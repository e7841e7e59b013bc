#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commavg/cli/commands.hpp"

using namespace commavg;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "commavg");
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "commavg_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = temp_dir() / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

const char* kIdentity = R"({
  "space": { "weights": ["1/3", "1/3", "1/3"] },
  "group": { "kind": "free_abelian", "rank": 1 },
  "actions": { "T": { "generators": [[0, 1, 2]] }, "S": { "generators": [[0, 1, 2]] } },
  "observables": { "a": [1, 2, 3], "b": ["1/2", -1, 0.25] }
})";

} // namespace

TEST(Cli, AverageIdentitySystemZeroDeviation) {
  auto path = write_temp("identity.json", kIdentity);
  auto r = run({"average", path, "--f1", "a", "--f2", "b", "--f3", "a", "--stages", "1,3,9"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  for (const auto& row : j["tables"]["stages"]) EXPECT_EQ(row["deviation"], 0.0);
  EXPECT_EQ(j["limits"]["L"], json::array({0.5, -4.0, 2.25}));
}

TEST(Cli, AverageFlipSample) {
  auto r = run({"average", "samples/flip.json", "--f1", "chi", "--f2", "chi", "--f3", "chi", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["limits"]["L"], json::array({"1", "-1"}));
  for (const auto& row : j["tables"]["stages"]) EXPECT_EQ(row["deviation"], 0.0);
  EXPECT_EQ(j["parameters"]["mode"], "exact");
}

TEST(Cli, UnknownObservable) {
  auto r = run({"average", "samples/flip.json", "--f1", "chi", "--f2", "nope", "--f3", "chi"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown observable"), std::string::npos);
}

TEST(Cli, AverageCsvHasStageAndLimitTables) {
  auto r = run({"average", "samples/flip.json", "--f1", "ind0", "--f2", "one", "--f3", "ind0", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# stages\nn,phi_size,psi_size,deviation\n"), std::string::npos);
  EXPECT_NE(r.out.find("# limit\nx,L\n"), std::string::npos);
}

TEST(Cli, BoundsFlipIndicator) {
  auto r = run({"bounds", "samples/flip.json", "--f", "ind0", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["bounds"][0]["left"], "1/8");
  EXPECT_EQ(j["bounds"][0]["right"], "1/16");
  EXPECT_EQ(j["bounds"][1]["left"], "1/4");
  EXPECT_EQ(j["bounds"][1]["right"], "1/4");
  EXPECT_EQ(j["summary"]["all_hold"], true);
}

TEST(Cli, BoundsConstantOne) {
  auto r = run({"bounds", "samples/flip.json", "--f", "one"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  for (const auto& b : j["bounds"]) {
    EXPECT_EQ(b["left"], 1.0);
    EXPECT_EQ(b["right"], 1.0);
    EXPECT_EQ(b["holds"], true);
  }
}

TEST(Cli, BoundsRejectNegativeEntries) {
  auto r = run({"bounds", "samples/flip.json", "--f", "dented"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("negative entries at indices 1"), std::string::npos);
}

TEST(Cli, ValidationFailuresExitTwo) {
  auto bad = write_temp("bad.json", R"({ "space": { "weights": [0.5, 0.6] } })");
  auto r = run({"average", bad, "--f1", "a", "--f2", "a", "--f3", "a"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("space.weights"), std::string::npos);
  EXPECT_EQ(run({"average", "does/not/exist.json", "--f1", "a", "--f2", "a", "--f3", "a"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"scan", "samples/full.grid", "--format", "xml"}).code, 2);
}

TEST(Cli, ScanFullGrid) {
  auto r = run({"scan", "samples/full.grid", "--sub", "4,4,12,12", "--range", "-3,-3,4,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["summary"]["good_count"], 49);
  EXPECT_EQ(j["summary"]["shift_count"], 49);
  EXPECT_EQ(j["summary"]["syndeticity"], 1);
}

TEST(Cli, ScanLatticeDefaultsAndCsv) {
  auto r = run({"scan", "samples/lattice_even.grid", "--epsilon", "0.001"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["summary"]["syndeticity"], 2);
  EXPECT_EQ(j["summary"]["delta"], 0.25);
  auto csv = run({"scan", "samples/lattice_even.grid", "--format", "csv", "--range", "0,0,2,2", "--sub", "0,0,46,46"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_NE(csv.out.find("g,h,density,good\n0,0,0.25,true\n0,1,0.0,false\n"), std::string::npos);
}

TEST(Cli, PartitionExamples) {
  std::string constant = "CACOLOR 1 3 2\n" + std::string(27, '\x02');
  auto path = write_temp("constant.color", constant);
  auto r = run({"partition", path});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["summary"]["found"], true);
  EXPECT_EQ(j["summary"]["color"], 2);
  EXPECT_EQ(j["summary"]["base"], json::array({0, 0, 0}));
  EXPECT_EQ(j["summary"]["shifts"], json::array({1, 1, 1}));
  auto parity = json::parse(run({"partition", "samples/parity.color"}).out);
  EXPECT_EQ(parity["summary"]["shifts"], json::array({2, 2, 2}));
  EXPECT_EQ(parity["summary"]["verified"], true);
}

TEST(Cli, ExampleWritesValidSystem) {
  auto path = (temp_dir() / "example.json").string();
  auto r = run({"example", "--p", "2", "--q", "2", "--r", "2", "--tau", "1,0", "--sigma", "0,0", "-o", path});
  ASSERT_EQ(r.code, 0) << r.err;
  auto sys = io::parse_system_text<Rational>(io::read_file(path));
  EXPECT_EQ(sys.pair.points(), 8u);
  cli::Options o;
  o.tau = "1,0";
  o.sigma = "0,0";
  EXPECT_EQ(sys, cli::example_system(o));
  EXPECT_EQ(run({"example", "--p", "2", "--tau", "5,0"}).code, 2);
}

TEST(Cli, CheckPassesOnSamples) {
  for (const char* file : {"samples/flip.json", "samples/rotation_z2.json", "samples/klein_table.json"}) {
    auto r = run({"check", file, "--seed", "5", "--trials", "3"});
    EXPECT_EQ(r.code, 0) << file << "\n" << r.out << r.err;
  }
  auto exact = run({"check", "samples/rotation_z2.json", "--exact", "--trials", "2"});
  EXPECT_EQ(exact.code, 0) << exact.out;
  EXPECT_EQ(run({"check", "samples/klein_table.json", "--exact"}).code, 2);
}

TEST(Cli, DeterministicReports) {
  std::vector<std::vector<std::string>> commands = {
      {"check", "samples/rotation_z2.json", "--seed", "9", "--trials", "2", "--omit-timings"},
      {"average", "samples/rotation_z2.json", "--f1", "u", "--f2", "v", "--f3", "w", "--omit-timings"},
      {"scan", "samples/lattice_even.grid", "--omit-timings"},
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(json::parse(a.out).count("timings"), 0u);
  }
  auto with = json::parse(run({"average", "samples/flip.json", "--f1", "chi", "--f2", "chi", "--f3", "chi"}).out);
  EXPECT_TRUE(with.contains("timings"));
}

TEST(Cli, OutputFile) {
  auto path = (temp_dir() / "report.json").string();
  auto r = run({"bounds", "samples/flip.json", "--f", "ind0", "-o", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(io::read_file(path))["command"], "bounds");
}
