// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "props.hpp"
#include "relprop/cli.hpp"
#include "relprop/dynamic.hpp"
#include "relprop/selfcomp.hpp"
#include "relprop/vcgen.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace relprop;
using relprop::testing::corpus_path;
using relprop::testing::load_corpus;
using relprop::testing::parse_or_die;
using relprop::testing::read_file;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &why) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + why;
    }
  }
};

struct Cli {
  int code;
  std::string out, err;
};

Cli relprop_run(const std::vector<std::string> &args) {
  std::vector<const char *> argv{"relprop"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

const VerificationCondition &wrapper_vc(const std::vector<VerificationCondition> &vcs,
                                        const WrapperInfo &w) {
  for (const auto &vc : vcs)
    if (vc.provenance.function == w.function && vc.provenance.kind == "assert")
      return vc;
  throw std::runtime_error("no wrapper VC for " + w.clause);
}

std::optional<std::string> run_solver(const std::string &smt_file) {
  if (std::system("command -v z3 >/dev/null 2>&1") != 0)
    return std::nullopt;
  std::string cmd = "z3 -T:20 " + smt_file + " 2>&1";
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return std::nullopt;
  std::string out;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe))
    out += buf;
  pclose(pipe);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
    out.pop_back();
  return out;
}

const std::vector<std::string> kComparators = {"sign", "tolerance", "near_swap", "magnitude",
                                               "lex", "diff"};

std::string flawed_file(const std::string &base) {
  return "comparators/" + (base == "diff" ? std::string("diff_wrap") : base) + "_flawed.mc";
}
std::string fixed_file(const std::string &base) { return "comparators/" + base + "_fixed.mc"; }

class Acceptance {
public:
  explicit Acceptance(fs::path dir) : dir_(std::move(dir)) {}

  int run() {
    report("AC1", "golden transformations", ac1());
    report("AC2", "max/abs identity", ac2());
    report("AC3", "side-effect monotonicity", ac3());
    report("AC4", "pointer monotonicity", ac4());
    report("AC5", "comparator benchmark", ac5());
    report("AC6", "counterexample replay", ac6());
    report("AC7", "lemma use", ac7());
    report("AC8", "self-exclusion", ac8());
    report("AC9", "property-based suites", ac9());
    std::cout << (failed_ ? "acceptance: FAILED\n" : "acceptance: all criteria met\n");
    return failed_ ? 1 : 0;
  }

private:
  fs::path dir_;
  bool failed_ = false;
  std::vector<std::pair<std::string, std::string>> emitted_;  // program, cex file

  void report(const std::string &id, const std::string &what, const Verdict &v) {
    failed_ |= !v.pass;
    std::cout << id << " " << (v.pass ? "PASS" : "FAIL") << "  " << what << ": " << v.detail
              << std::endl;
  }

  template <class F> static Verdict guarded(F &&f) {
    try {
      return f();
    } catch (const std::exception &e) {
      Verdict v;
      v.require(false, std::string("exception: ") + e.what());
      return v;
    }
  }

  Verdict ac1() {
    return guarded([&] {
      Verdict v;
      auto t = std::chrono::steady_clock::now();
      int matched = 0;
      for (const char *name : {"max_abs", "global_monotone", "pointer_monotone",
                               "fact_inline"}) {
        auto tp = transform(load_corpus(std::string(name) + ".mc"));
        Program want = parse_or_die(read_file(corpus_path("golden/" + std::string(name) +
                                                          ".expected.mc")));
        bool same = tp.program == want;
        matched += same;
        v.require(same, std::string(name) + " differs from its golden");
      }
      double s = seconds_since(t);
      v.require(s < 1.0, "took " + fmt(s));
      v.detail = std::to_string(matched) + "/4 ASTs match, " + fmt(s) +
                 (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac2() {
    return guarded([&] {
      Verdict v;
      auto t = std::chrono::steady_clock::now();
      // Oracle: the identity itself over the 289 pairs.
      int oracle_bad = 0;
      for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b)
          oracle_bad += std::max(a, b) != (a + b + std::abs(a - b)) / 2;
      v.require(oracle_bad == 0, "oracle found violations");

      fs::path out = dir_ / "ac2";
      auto r = relprop_run({"prove", corpus_path("max_abs.mc"), "--bound", "8", "-o",
                            out.string(), "--emit-smt"});
      auto doc = json::parse(read_file((out / "max_abs.prove.json").string()));
      std::string status = doc["properties"][0]["status"];
      v.require(r.code == 0, "exit " + std::to_string(r.code));
      v.require(status == "Valid", "R1 is " + status);
      double s = seconds_since(t);
      v.require(s < 5.0, "took " + fmt(s));
      std::string solver = "no SMT solver on PATH";
      auto answer = run_solver((out / "relational_wrapper_1__Rpp.smt2").string());
      if (answer) {
        solver = "z3 says " + *answer;
        v.require(*answer == "unsat", "solver answered " + *answer);
      }
      v.detail = "R1 " + status + " at bound 8 (289 assignments), exit " +
                 std::to_string(r.code) + ", " + solver + ", " + fmt(s) +
                 (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac3() {
    return guarded([&] {
      Verdict v;
      auto t = std::chrono::steady_clock::now();
      auto tp = transform(load_corpus("global_monotone.mc"));
      auto vcs = vcs_for(tp);
      auto b = check_bounded(wrapper_vc(vcs, tp.wrappers.at(0)), 8);
      v.require(b.status == Status::Valid, std::string("wrapper VC ") + to_string(b.status));
      auto suite = props::global_monotone_oracle(1000, 31, RELPROP_CORPUS_DIR);
      v.require(suite.ok() && suite.cases >= 1000, suite.first_failure);
      double s = seconds_since(t);
      v.require(s < 10.0, "took " + fmt(s));
      v.detail = std::string("wrapper VC ") + to_string(b.status) + ", oracle agreement " +
                 std::to_string(suite.cases - suite.failures) + "/" +
                 std::to_string(suite.cases) + ", " + fmt(s) +
                 (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac4() {
    return guarded([&] {
      Verdict v;
      auto t = std::chrono::steady_clock::now();
      auto tp = transform(load_corpus("pointer_monotone.mc"));
      auto vcs = vcs_for(tp);
      auto b = check_bounded(wrapper_vc(vcs, tp.wrappers.at(0)), 8);
      v.require(b.status == Status::Valid, std::string("wrapper VC ") + to_string(b.status));
      auto suite = props::pointer_cells_distinct(1000, 41, RELPROP_CORPUS_DIR);
      v.require(suite.ok() && suite.cases >= 1000, suite.first_failure);
      double s = seconds_since(t);
      v.require(s < 10.0, "took " + fmt(s));
      v.detail = std::string("wrapper VC ") + to_string(b.status) + ", distinct cells on " +
                 std::to_string(suite.cases - suite.failures) + "/" +
                 std::to_string(suite.cases) + " inputs, " + fmt(s) +
                 (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  // `test` with its default budget on every flawed entry, `prove` on every
  // fixed one.
  Verdict ac5() {
    return guarded([&] {
      Verdict v;
      int entries = 0, flawed_found = 0, fixed_proved = 0;
      double slowest = 0;
      for (const auto &base : kComparators) {
        std::string flawed = corpus_path(flawed_file(base));
        std::string fixed = corpus_path(fixed_file(base));
        entries += 2;
        fs::path out = dir_ / "ac5" / base;
        auto r = relprop_run({"test", flawed, "-o", out.string(), "--json"});
        auto doc = json::parse(r.out);
        bool found = false;
        for (const auto &p : doc["files"][0]["properties"]) {
          if (p["result"] != "counterexample")
            continue;
          found = true;
          emitted_.push_back({flawed, p["file"]});
          slowest = std::max(slowest, p.value("seconds", 0.0));
        }
        v.require(found && r.code == 1, flawed_file(base) + " yielded no counterexample");
        flawed_found += found;

        fs::path pout = dir_ / "ac5" / (base + "_prove");
        auto pr = relprop_run({"prove", fixed, "--bound", "8", "-o", pout.string(), "--json"});
        auto pdoc = json::parse(pr.out);
        int valid = 0, total = 0;
        for (const auto &p : pdoc["files"][0]["properties"]) {
          ++total;
          valid += p["status"] == "Valid";
        }
        bool ok = pr.code == 0 && total == 3 && valid == 3;
        v.require(ok, fixed_file(base) + ": " + std::to_string(valid) + "/" +
                          std::to_string(total) + " Valid");
        fixed_proved += ok;
      }
      v.require(entries >= 8, "only " + std::to_string(entries) + " entries");
      v.detail = std::to_string(entries) + " entries; flawed with counterexample " +
                 std::to_string(flawed_found) + "/" + std::to_string(kComparators.size()) +
                 " (slowest " + fmt(slowest) + " of a 30 s budget); fixed proved " +
                 std::to_string(fixed_proved) + "/" + std::to_string(kComparators.size()) +
                 (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac6() {
    return guarded([&] {
      Verdict v;
      int failing = 0;
      for (const auto &[program, cex] : emitted_) {
        auto r = relprop_run({"check", program, cex, "--json"});
        auto doc = json::parse(r.out);
        bool all_fail = r.code == 1 && !doc["reports"].empty();
        for (const auto &rep : doc["reports"])
          all_fail &= rep["outcome"] == "fail";
        failing += all_fail;
        v.require(all_fail, fs::path(cex).filename().string() + " did not replay as a failure");
      }
      v.require(!emitted_.empty(), "no counterexamples to replay");
      v.detail = std::to_string(failing) + "/" + std::to_string(emitted_.size()) +
                 " counterexamples replay as fail" + (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac7() {
    return guarded([&] {
      Verdict v;
      auto tp = transform(load_corpus("crypt_decrypt.mc"));
      const std::string lemma = tp.wrappers.at(0).lemma;
      auto find = [](const std::vector<VerificationCondition> &vcs) {
        for (const auto &vc : vcs)
          if (vc.name == "run__assert_1")
            return vc;
        throw std::runtime_error("no client assertion VC");
      };
      auto without = check_bounded(find(vcs_for(tp)), 8).status;
      auto with = check_bounded(find(vcs_for(tp, {lemma})), 8).status;
      v.require(without == Status::Unknown,
                std::string("without the lemma: ") + to_string(without));
      v.require(with == Status::Valid, std::string("with the lemma: ") + to_string(with));
      v.detail = std::string("client assertion ") + to_string(without) + " without " + lemma +
                 ", " + to_string(with) + " with it" + (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac8() {
    return guarded([&] {
      Verdict v;
      int sets = 0, checked = 0, violations = 0;
      for (const auto &e : fs::recursive_directory_iterator(RELPROP_CORPUS_DIR)) {
        if (e.path().extension() != ".mc" || e.path().string().find("golden") != std::string::npos)
          continue;
        auto tp = transform(parse_or_die(read_file(e.path().string())));
        std::set<std::string> all;
        for (const auto &w : tp.wrappers)
          all.insert(w.lemma);
        ++sets;
        for (const auto &vc : vcs_for(tp, all)) {
          const WrapperInfo *w = tp.wrapper_for_function(vc.provenance.function);
          if (!w)
            continue;
          ++checked;
          for (const auto &h : vc.hypotheses)
            if (h.name == w->lemma) {
              ++violations;
              v.require(false, vc.name + " assumes " + h.name);
            }
        }
      }
      v.detail = std::to_string(violations) + " violations over " + std::to_string(checked) +
                 " wrapper VCs in " + std::to_string(sets) + " programs" +
                 (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }

  Verdict ac9() {
    return guarded([&] {
      Verdict v;
      std::vector<props::SuiteResult> suites = {
          props::parser_round_trip(1000, 91),
          props::selfcomp_equivalence(1000, 92),
          props::wp_substitution(1000, 93),
          props::bounded_interpreter_agreement(1000, 94),
      };
      std::string summary;
      for (const auto &s : suites) {
        v.require(s.cases >= 1000, s.name + " ran " + std::to_string(s.cases) + " cases");
        v.require(s.ok(), s.name + ": " + s.first_failure);
        summary += (summary.empty() ? "" : ", ") + s.name + " " + std::to_string(s.failures) +
                   "/" + std::to_string(s.cases) + " failing (" + s.note + ")";
      }
      v.detail = summary + (v.detail.empty() ? "" : "; " + v.detail);
      return v;
    });
  }
};

} // namespace

int main() {
  std::random_device rd;
  fs::path dir = fs::temp_directory_path() / ("relprop_acceptance_" + std::to_string(rd()));
  fs::create_directories(dir);
  int code = Acceptance(dir).run();
  fs::remove_all(dir);
  return code;
}
