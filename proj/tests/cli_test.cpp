#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "relprop/cli.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using relprop::testing::corpus_path;
using relprop::testing::read_file;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run relprop_run(std::vector<std::string> args) {
  std::vector<const char *> argv{"relprop"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = relprop::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("relprop_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out() const { return dir_.string(); }
  std::string path(const std::string &name) const { return (dir_ / name).string(); }
  std::string write(const std::string &name, const std::string &text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  fs::path dir_;
};

} // namespace

TEST_F(Cli, TransformWritesWrapper) {
  auto r = relprop_run({"transform", corpus_path("max_abs.mc"), "-o", out(),
                        "--emit-provenance"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto text = read_file(path("max_abs.transformed.mc"));
  EXPECT_NE(text.find("relational_wrapper_1"), std::string::npos);
  auto prov = json::parse(read_file(path("max_abs.provenance.json")));
  EXPECT_FALSE(prov.empty());
}

TEST_F(Cli, DiagnosticsExitTwo) {
  EXPECT_EQ(relprop_run({"transform", path("missing.mc"), "-o", out()}).code, 2);
  auto bad = write("bad.mc", "int f(int x) { return x +; }");
  auto r = relprop_run({"prove", bad, "-o", out()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(relprop_run({"frobnicate"}).code, 2);
}

TEST_F(Cli, ProveExitCodes) {
  EXPECT_EQ(relprop_run({"prove", corpus_path("max_abs.mc"), "-o", out()}).code, 0);
  auto r = relprop_run({"prove", corpus_path("neg_monotone.mc"), "-o", out(), "--json"});
  EXPECT_EQ(r.code, 1);
  auto doc = json::parse(read_file(path("neg_monotone.prove.json")));
  EXPECT_FALSE(doc["vcs"].empty());
}

TEST_F(Cli, StrictTurnsUnknownIntoFailure) {
  auto src = write("weak.mc", R"(
    /*@ requires n >= 0;
        ensures \result == n; */
    int f(int n) {
      int i = 0;
      /*@ loop invariant 0 <= i; */
      while (i < n) { i = i + 1; }
      return i;
    })");
  EXPECT_EQ(relprop_run({"prove", src, "-o", out(), "--bound", "4"}).code, 0);
  EXPECT_EQ(relprop_run({"prove", src, "-o", out(), "--bound", "4", "--strict"}).code, 3);
}

TEST_F(Cli, AssumeLemmasAddsHypothesis) {
  auto src = corpus_path("crypt_decrypt.mc");
  auto hyps = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"prove", src, "-o", out(), "--emit-smt"};
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(relprop_run(args).code, 0);
    auto doc = json::parse(read_file(path("crypt_decrypt.vcs.json")));
    for (const auto &v : doc["vcs"])
      if (v["name"] == "run__assert_1")
        return v["hypotheses"].get<std::vector<std::string>>();
    return std::vector<std::string>{};
  };
  auto with = hyps({"--assume-lemmas"});
  EXPECT_NE(std::find(with.begin(), with.end(), "Relational_lemma_1"), with.end());
  EXPECT_TRUE(fs::exists(path("run__assert_1.smt2")));
}

TEST_F(Cli, TestThenCheck) {
  auto flawed = corpus_path("comparators/sign_flawed.mc");
  auto r = relprop_run({"test", flawed, "-o", out(), "--budget", "1"});
  EXPECT_EQ(r.code, 1) << r.out;
  auto cex = path("sign_flawed__P1.cex.json");
  ASSERT_TRUE(fs::exists(cex));
  auto doc = json::parse(read_file(cex));
  EXPECT_EQ(doc["property"], "P1");
  EXPECT_EQ(doc["assignment"]["x"], doc["assignment"]["y"]);

  EXPECT_EQ(relprop_run({"check", flawed, cex}).code, 1);
  // The same vector passes against the repaired comparator.
  EXPECT_EQ(relprop_run({"check", corpus_path("comparators/sign_fixed.mc"), cex}).code, 0);
}

TEST_F(Cli, SeedIsDeterministic) {
  // Only large inputs falsify this, so the exhaustive pass at bound 1 finds
  // nothing and the vector comes from the seeded random search.
  auto src = write("small.mc", R"(
    /*@ assigns \result \from x;
        relational Small:
          \forall int x;
            \callset(\call(id, x, id1), \call(id, x, id2)) ==>
              \callresult(id1) + \callresult(id2) < 2000;
    */
    int id(int x) { return x; })");
  std::string first;
  for (int i = 0; i < 2; ++i) {
    auto r = relprop_run({"test", src, "-o", out(), "--bound", "1", "--budget", "5",
                          "--seed", "42"});
    EXPECT_EQ(r.code, 1) << r.out;
    auto text = read_file(path("small__Small.cex.json"));
    if (i == 0)
      first = text;
    else
      EXPECT_EQ(text, first);
  }
  auto doc = json::parse(first);
  EXPECT_EQ(doc["seed"], 42);
  EXPECT_EQ(doc["strategy"], "random");
  EXPECT_GE(doc["assignment"]["x"].get<int>(), 1000);
}

TEST_F(Cli, SkipProved) {
  auto src = corpus_path("comparators/sign_fixed.mc");
  ASSERT_EQ(relprop_run({"prove", src, "-o", out()}).code, 0);
  auto r = relprop_run({"test", src, "-o", out(), "--skip-proved"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("skipped"), std::string::npos) << r.out;
}

TEST_F(Cli, CheckVectorFiles) {
  auto src = corpus_path("neg_monotone.mc");
  EXPECT_EQ(relprop_run({"check", src, write("empty.json", "[]")}).code, 0);
  EXPECT_EQ(relprop_run({"check", src, write("broken.json", "{\"property\": ")}).code, 2);
  auto ok = write("ok.json", R"({"property": "Monotone", "assignment": {"x1": 2, "x2": 2}})");
  EXPECT_EQ(relprop_run({"check", src, ok}).code, 0);
}
