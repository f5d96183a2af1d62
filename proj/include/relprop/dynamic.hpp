#pragma once
// Concrete execution of MiniC: a checked 64-bit interpreter with labeled
// snapshots, runtime checking of wrapper assertions and counterexample search.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relprop/ast.hpp"
#include "relprop/selfcomp.hpp"

namespace relprop {

class RuntimeError : public Error {
public:
  using Error::Error;
};
class DivisionByZero : public RuntimeError {
public:
  using RuntimeError::RuntimeError;
};
class Overflow : public RuntimeError {
public:
  using RuntimeError::RuntimeError;
};
class FuelExhausted : public RuntimeError {
public:
  using RuntimeError::RuntimeError;
};
/// Quantifiers and other annotations that cannot be decided at run time.
class NotExecutable : public RuntimeError {
public:
  using RuntimeError::RuntimeError;
};

struct Snapshot {
  std::map<std::string, std::int64_t> vars;  // globals and the locals in scope
  std::vector<std::int64_t> heap;
};

struct State {
  std::map<std::string, std::int64_t> globals;
  std::vector<std::int64_t> heap;  // pointer values are indices into heap
  std::map<std::string, Snapshot> snapshots;

  std::int64_t alloc(std::int64_t contents) {
    heap.push_back(contents);
    return static_cast<std::int64_t>(heap.size() - 1);
  }
};

class AssertViolated : public RuntimeError {
public:
  AssertViolated(std::string id, Snapshot at, SourceSpan span)
      : RuntimeError("assertion " + id + " violated", std::move(span)), id_(std::move(id)),
        at_(std::move(at)) {}
  const std::string &id() const { return id_; }
  const Snapshot &state() const { return at_; }

private:
  std::string id_;
  Snapshot at_;
};

struct Execution {
  std::optional<std::int64_t> value;
  State state;
};

constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Big-step evaluation of `fn`. Pointer arguments are heap indices. Logic
/// symbols linked to a pure function are evaluated by running that function.
Execution interpret(const FunctionDef &fn, const Program &program,
                    const std::vector<std::int64_t> &args, State state,
                    std::uint64_t fuel = kDefaultFuel);

/// Values keyed by wrapper int formal `x`, pointer cell `*p` or duplicated
/// global `g_id`; the same names the bounded checker uses in assignments.
struct InputVector {
  std::map<std::string, std::int64_t> values;
  bool operator==(const InputVector &) const = default;
};

/// The input slots of a wrapper, in a fixed order: int formals, pointer cells,
/// then globals the wrapper touches, sorted.
std::vector<std::string> input_slots(const TransformedProgram &tp, const WrapperInfo &w);

enum class Outcome { Pass, Fail, Error };
const char *to_string(Outcome o);

struct CheckReport {
  std::string property;  // clause name
  std::string wrapper;
  Outcome outcome = Outcome::Pass;
  bool precondition_met = true;  // false: the vector is outside the wrapper's requires
  std::string assertion;         // failing assertion id
  std::string message;
  InputVector input;
  std::map<std::string, std::int64_t> cells;  // pointer formal -> heap cell
  std::vector<std::pair<std::string, Snapshot>> trace;  // Pre, then Here at the end
  double seconds = 0;
};

CheckReport run_wrapper(const TransformedProgram &tp, const WrapperInfo &w,
                        const InputVector &input, std::uint64_t fuel = kDefaultFuel);

struct Strategy {
  enum class Kind { Exhaustive, Random } kind = Kind::Exhaustive;
  std::int64_t bound = 8;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;  // Random: 0 for "until the budget runs out"
};

struct SearchResult {
  std::optional<InputVector> counterexample;
  std::uint64_t tried = 0;
  bool exhausted = false;  // Exhaustive: every vector in range was tried
  bool timed_out = false;
};

SearchResult find_counterexample(const TransformedProgram &tp, const WrapperInfo &w,
                                 const Strategy &strategy, double budget_seconds);

struct PropertyVector {
  std::string property;  // clause or wrapper name
  InputVector input;
};

std::vector<CheckReport> runtime_check(const TransformedProgram &tp,
                                       const std::vector<PropertyVector> &vectors);

/// `{property, assignment, seed, strategy}` plus the wrapper name and bound.
std::string counterexample_json(const std::string &property, const std::string &wrapper,
                                const InputVector &input, const Strategy &strategy);
/// Accepts a single object or an array of them. Throws Error when malformed.
std::vector<PropertyVector> parse_counterexamples(const std::string &json);

const WrapperInfo *find_property(const TransformedProgram &tp, const std::string &property);

} // namespace relprop
