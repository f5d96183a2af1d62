#include "relprop/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relprop/dynamic.hpp"
#include "relprop/parser.hpp"
#include "relprop/selfcomp.hpp"
#include "relprop/validate.hpp"
#include "relprop/vcgen.hpp"

namespace relprop {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::int64_t bound = 8;
  double budget = 30;
  std::uint64_t seed = 0;
  bool assume_lemmas = false;
  bool strict = false;
  bool skip_proved = false;
  bool emit_provenance = false;
  bool emit_smt = false;
  bool json = false;
};

struct Failure {
  int code;
};

class Driver {
public:
  Driver(const Config &cfg, std::ostream &out, std::ostream &err)
      : cfg_(cfg), out_(out), err_(err) {}

  int transform_cmd() {
    json files = json::array();
    for (const auto &in : programs()) {
      auto tp = load(in);
      fs::path dst = out_dir() / (stem(in) + ".transformed.mc");
      write(dst, pretty_print(tp.program));
      json f = {{"input", in}, {"output", dst.string()}};
      if (cfg_.emit_provenance) {
        fs::path prov = out_dir() / (stem(in) + ".provenance.json");
        write(prov, provenance_json(tp));
        f["provenance"] = prov.string();
      }
      if (!cfg_.json)
        out_ << in << " -> " << dst.string() << " (" << plural(tp.wrappers.size(), "wrapper")
             << ")\n";
      files.push_back(f);
    }
    if (cfg_.json)
      out_ << json{{"files", files}, {"exit", 0}}.dump(2) << "\n";
    return kExitOk;
  }

  int prove_cmd() {
    int code = kExitOk;
    json files = json::array();
    for (const auto &in : programs()) {
      auto tp = load(in);
      ProveOptions opts;
      opts.bounded.bound = cfg_.bound;
      opts.bounded.seconds = cfg_.budget;
      opts.assume_lemmas = cfg_.assume_lemmas;
      std::vector<VcOutcome> res;
      try {
        res = prove(tp, opts);
      } catch (const Error &e) {
        diag(in, e);
        throw Failure{kExitDiagnostics};
      }

      json vcs = json::array();
      bool any_cex = false, wrappers_valid = true, any_unknown = false;
      for (const auto &o : res) {
        bool wrapper = tp.wrapper_for_function(o.vc.provenance.function) != nullptr;
        any_cex |= o.status == Status::Counterexample;
        any_unknown |= o.status == Status::Unknown;
        if (wrapper && o.status != Status::Valid)
          wrappers_valid = false;
        json v = {{"name", o.vc.name},
                  {"function", o.vc.provenance.function},
                  {"assertion", o.vc.provenance.assertion},
                  {"kind", o.vc.provenance.kind},
                  {"clause", o.vc.provenance.clause},
                  {"status", to_string(o.status)},
                  {"note", o.note}};
        json hyps = json::array();
        for (const auto &h : o.vc.hypotheses)
          hyps.push_back(h.name);
        v["hypotheses"] = hyps;
        if (!o.assignment.empty())
          v["assignment"] = o.assignment;
        if (cfg_.emit_smt) {
          fs::path smt = out_dir() / (o.vc.name + ".smt2");
          write(smt, emit_smtlib(o.vc));
          v["smt"] = smt.string();
        }
        vcs.push_back(v);
      }
      json props = json::array();
      for (const auto &w : tp.wrappers)
        props.push_back({{"property", w.clause},
                         {"owner", w.owner},
                         {"wrapper", w.function},
                         {"status", to_string(wrapper_status(res, w))}});

      json doc = {{"input", in}, {"bound", cfg_.bound}, {"properties", props}, {"vcs", vcs}};
      write(out_dir() / (stem(in) + ".prove.json"), doc.dump(2) + "\n");
      if (cfg_.emit_smt)
        write(out_dir() / (stem(in) + ".vcs.json"), json{{"vcs", vcs}}.dump(2) + "\n");
      files.push_back(doc);

      int c = any_cex                              ? kExitCounterexample
              : !wrappers_valid                    ? kExitUnproved
              : (cfg_.strict && any_unknown)       ? kExitUnproved
                                                   : kExitOk;
      code = worst(code, c);
      if (!cfg_.json)
        print_prove(in, tp, res);
    }
    if (cfg_.json)
      out_ << json{{"files", files}, {"exit", code}}.dump(2) << "\n";
    return code;
  }

  int test_cmd() {
    int code = kExitOk;
    json files = json::array();
    for (const auto &in : programs()) {
      auto tp = load(in);
      std::map<std::string, std::string> proved = prior_proof(in);
      json props = json::array();
      std::vector<std::array<std::string, 3>> rows;
      for (const auto &w : tp.wrappers) {
        json p = {{"property", w.clause}, {"wrapper", w.function}};
        std::string proof = proved.count(w.clause) ? proved[w.clause] : "-";
        std::string gen;
        if (cfg_.skip_proved && proof == "Valid") {
          p["result"] = "skipped";
          gen = "skipped (proved)";
        } else {
          auto started = std::chrono::steady_clock::now();
          auto r = search(tp, w);
          p["tried"] = r.tried;
          p["seconds"] =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
          if (r.result.counterexample) {
            fs::path cex = out_dir() / (stem(in) + "__" + w.clause + ".cex.json");
            write(cex, counterexample_json(w.clause, w.function, *r.result.counterexample,
                                           r.strategy));
            p["result"] = "counterexample";
            p["strategy"] = r.strategy.kind == Strategy::Kind::Exhaustive ? "exhaustive"
                                                                         : "random";
            p["assignment"] = r.result.counterexample->values;
            p["file"] = cex.string();
            gen = "counterexample (" + p["strategy"].get<std::string>() + ", " +
                  plural(r.tried, "vector") + ") " +
                  assignment_text(r.result.counterexample->values);
            code = kExitCounterexample;
          } else {
            p["result"] = "timeout";
            gen = "timeout (" + plural(r.tried, "vector") + ")";
          }
        }
        rows.push_back({w.clause, proof, gen});
        props.push_back(p);
      }
      files.push_back({{"input", in}, {"properties", props}});
      if (!cfg_.json)
        print_table(in, rows);
    }
    if (cfg_.json)
      out_ << json{{"files", files}, {"exit", code}}.dump(2) << "\n";
    return code;
  }

  int check_cmd() {
    std::vector<std::string> progs, vectors;
    for (const auto &in : cfg_.inputs)
      (fs::path(in).extension() == ".json" ? vectors : progs).push_back(in);
    if (progs.size() != 1) {
      err_ << "error: check expects exactly one MiniC program\n";
      return kExitDiagnostics;
    }
    const std::string &in = progs[0];
    auto tp = load(in);
    if (vectors.empty() && fs::exists(out_dir())) {
      std::string prefix = stem(in) + "__";
      for (const auto &e : fs::directory_iterator(out_dir())) {
        std::string name = e.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && name.size() > 9 &&
            name.substr(name.size() - 9) == ".cex.json")
          vectors.push_back(e.path().string());
      }
      std::sort(vectors.begin(), vectors.end());
    }
    std::vector<PropertyVector> pvs;
    for (const auto &v : vectors) {
      try {
        auto part = parse_counterexamples(read(v));
        pvs.insert(pvs.end(), part.begin(), part.end());
      } catch (const Error &e) {
        err_ << v << ": error: " << e.what() << "\n";
        return kExitDiagnostics;
      }
    }
    auto reports = runtime_check(tp, pvs);
    int code = kExitOk;
    json reps = json::array();
    for (const auto &r : reports) {
      if (r.outcome != Outcome::Pass)
        code = kExitCounterexample;
      json j = {{"property", r.property},
                {"wrapper", r.wrapper},
                {"outcome", to_string(r.outcome)},
                {"assertion", r.assertion},
                {"message", r.message},
                {"assignment", r.input.values}};
      json trace = json::array();
      for (const auto &[label, snap] : r.trace)
        trace.push_back({{"label", label}, {"state", snap.vars}});
      j["trace"] = trace;
      reps.push_back(j);
      if (!cfg_.json)
        out_ << std::left << std::setw(12) << r.property << " " << std::setw(6)
             << to_string(r.outcome) << " " << assignment_text(r.input.values)
             << (r.message.empty() ? "" : "  " + r.message) << "\n";
    }
    if (!cfg_.json)
      out_ << plural(reports.size(), "vector") << " replayed\n";
    if (cfg_.json)
      out_ << json{{"input", in}, {"reports", reps}, {"exit", code}}.dump(2) << "\n";
    return code;
  }

private:
  const Config &cfg_;
  std::ostream &out_;
  std::ostream &err_;

  static int worst(int a, int b) {
    auto rank = [](int c) { return c == kExitCounterexample ? 2 : c == kExitUnproved ? 1 : 0; };
    return rank(b) > rank(a) ? b : a;
  }

  std::vector<std::string> programs() const { return cfg_.inputs; }

  fs::path out_dir() const {
    fs::path p(cfg_.out_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    return p;
  }

  static std::string stem(const std::string &in) { return fs::path(in).stem().string(); }

  std::string read(const std::string &path) const {
    std::ifstream f(path);
    if (!f) {
      err_ << path << ": error: cannot open file\n";
      throw Failure{kExitDiagnostics};
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  void write(const fs::path &path, const std::string &text) const {
    std::ofstream f(path);
    if (!f) {
      err_ << path.string() << ": error: cannot write file\n";
      throw Failure{kExitDiagnostics};
    }
    f << text;
  }

  void diag(const std::string &in, const Error &e) const {
    if (e.span().start_line > 0)
      err_ << e.span() << ": error: " << e.what() << "\n";
    else
      err_ << in << ": error: " << e.what() << "\n";
  }

  TransformedProgram load(const std::string &in) const {
    std::string text = read(in);
    auto parsed = parse_program(text, in);
    if (!parsed.ok()) {
      for (const auto &d : parsed.diagnostics)
        err_ << d << "\n";
      throw Failure{kExitDiagnostics};
    }
    Diagnostics ds = validate(*parsed.program);
    if (has_errors(ds)) {
      for (const auto &d : ds)
        err_ << d << "\n";
      throw Failure{kExitDiagnostics};
    }
    try {
      return transform(*parsed.program);
    } catch (const Error &e) {
      diag(in, e);
      throw Failure{kExitDiagnostics};
    }
  }

  static Status wrapper_status(const std::vector<VcOutcome> &res, const WrapperInfo &w) {
    bool all = true;
    for (const auto &o : res) {
      if (o.vc.provenance.function != w.function)
        continue;
      if (o.status == Status::Counterexample)
        return Status::Counterexample;
      all &= o.status == Status::Valid;
    }
    return all ? Status::Valid : Status::Unknown;
  }

  static std::string plural(std::uint64_t n, const std::string &word) {
    return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
  }

  static std::string assignment_text(const std::map<std::string, std::int64_t> &a) {
    std::string s = "{";
    for (const auto &[k, v] : a)
      s += (s.size() > 1 ? ", " : "") + k + "=" + std::to_string(v);
    return s + "}";
  }

  void print_table(const std::string &in, const std::vector<std::array<std::string, 3>> &rows) {
    std::size_t w0 = 8, w1 = 14;
    for (const auto &r : rows) {
      w0 = std::max(w0, r[0].size());
      w1 = std::max(w1, r[1].size());
    }
    out_ << in << "\n";
    out_ << "  " << std::left << std::setw(static_cast<int>(w0)) << "Property" << "  "
         << std::setw(static_cast<int>(w1)) << "Proof" << "  Counterexample-generation\n";
    for (const auto &r : rows)
      out_ << "  " << std::setw(static_cast<int>(w0)) << r[0] << "  "
           << std::setw(static_cast<int>(w1)) << r[1] << "  " << r[2] << "\n";
  }

  void print_prove(const std::string &in, const TransformedProgram &tp,
                   const std::vector<VcOutcome> &res) {
    std::vector<std::array<std::string, 3>> rows;
    for (const auto &w : tp.wrappers) {
      Status s = wrapper_status(res, w);
      std::string proof = to_string(s);
      for (const auto &o : res)
        if (o.vc.provenance.function == w.function && o.status == Status::Counterexample) {
          proof += " " + assignment_text(o.assignment);
          break;
        }
      rows.push_back({w.clause, proof, "-"});
    }
    print_table(in, rows);
    for (const auto &o : res) {
      if (tp.wrapper_for_function(o.vc.provenance.function))
        continue;
      out_ << "  vc " << std::left << std::setw(40) << o.vc.name << " " << to_string(o.status);
      if (o.status == Status::Counterexample)
        out_ << " " << assignment_text(o.assignment);
      out_ << "\n";
    }
  }

  std::map<std::string, std::string> prior_proof(const std::string &in) const {
    std::map<std::string, std::string> out;
    fs::path p = fs::path(cfg_.out_dir) / (stem(in) + ".prove.json");
    std::ifstream f(p);
    if (!f)
      return out;
    try {
      auto j = nlohmann::json::parse(f);
      for (const auto &prop : j.at("properties"))
        out[prop.at("property").get<std::string>()] = prop.at("status").get<std::string>();
    } catch (const nlohmann::json::exception &) {
      err_ << p.string() << ": warning: ignoring unreadable proof record\n";
      out.clear();
    }
    return out;
  }

  struct Search {
    SearchResult result;
    Strategy strategy;
    std::uint64_t tried = 0;
  };

  // Exhaustive search over [-bound, bound] when the space is small enough,
  // then random vectors for the rest of the budget.
  Search search(const TransformedProgram &tp, const WrapperInfo &w) const {
    auto start = std::chrono::steady_clock::now();
    Search s;
    std::size_t slots = input_slots(tp, w).size();
    double space = 1;
    for (std::size_t i = 0; i < slots; ++i)
      space *= static_cast<double>(2 * cfg_.bound + 1);
    if (space <= 1e6) {
      s.strategy.kind = Strategy::Kind::Exhaustive;
      s.strategy.bound = cfg_.bound;
      s.strategy.seed = cfg_.seed;
      s.result = find_counterexample(tp, w, s.strategy, cfg_.budget);
      s.tried += s.result.tried;
      if (s.result.counterexample || s.result.timed_out)
        return s;
    }
    std::chrono::duration<double> used = std::chrono::steady_clock::now() - start;
    s.strategy.kind = Strategy::Kind::Random;
    s.strategy.bound = cfg_.bound;
    s.strategy.seed = cfg_.seed;
    double left = std::max(0.001, cfg_.budget - used.count());
    s.result = find_counterexample(tp, w, s.strategy, left);
    s.tried += s.result.tried;
    return s;
  }
};

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Relational property verification for MiniC programs", "relprop"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("inputs", cfg.inputs, "MiniC programs")->required();
    sub->add_option("-o", cfg.out_dir, "Output directory");
    sub->add_flag("--json", cfg.json, "Print results as JSON");
  };
  auto *transform = app.add_subcommand("transform", "Write the self-composed program");
  add_common(transform);
  transform->add_flag("--emit-provenance", cfg.emit_provenance, "Write a provenance sidecar");

  auto *prove = app.add_subcommand("prove", "Generate and check verification conditions");
  add_common(prove);
  prove->add_option("--bound", cfg.bound, "Bounded checker domain [-N, N]")
      ->check(CLI::PositiveNumber);
  prove->add_option("--budget", cfg.budget, "Seconds per verification condition")
      ->check(CLI::Range(1.0, 1e9));
  prove->add_flag("--assume-lemmas", cfg.assume_lemmas, "Admit every relational lemma");
  prove->add_flag("--strict", cfg.strict, "Fail on any Unknown verification condition");
  prove->add_flag("--emit-smt", cfg.emit_smt, "Write one SMT-LIB script per VC");

  auto *test = app.add_subcommand("test", "Search for counterexamples by execution");
  add_common(test);
  test->add_option("--bound", cfg.bound, "Exhaustive search range [-N, N]")
      ->check(CLI::PositiveNumber);
  test->add_option("--budget", cfg.budget, "Seconds per property")->check(CLI::Range(1.0, 1e9));
  test->add_option("--seed", cfg.seed, "Random search seed");
  test->add_flag("--skip-proved", cfg.skip_proved, "Skip properties a prior prove run proved");

  auto *check = app.add_subcommand("check", "Replay counterexample vectors at run time");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    std::ostringstream o, r;
    int code = app.exit(e, o, r);
    err << r.str() << o.str();
    return code == 0 ? kExitOk : kExitDiagnostics;
  }

  Driver d(cfg, out, err);
  try {
    if (*transform)
      return d.transform_cmd();
    if (*prove)
      return d.prove_cmd();
    if (*test)
      return d.test_cmd();
    return d.check_cmd();
  } catch (const Failure &f) {
    return f.code;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitDiagnostics;
  }
}

} // namespace relprop
