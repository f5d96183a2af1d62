#pragma once
// Randomized property suites shared by the unit tests and the acceptance run.

#include <cstdint>
#include <string>

namespace relprop::props {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  std::string note;  // how the cases were distributed

  bool ok() const { return failures == 0; }
};

/// parse(pretty_print(p)) == p on generated programs.
SuiteResult parser_round_trip(int cases, std::uint64_t seed);

/// The wrapper's verdict on an input equals the clause evaluated over
/// separate runs of each call on its own copy of the state.
SuiteResult selfcomp_equivalence(int cases, std::uint64_t seed);

/// wp(s, Q) holds in a state iff running s from it passes every assertion
/// and ends in a state satisfying Q.
SuiteResult wp_substitution(int cases, std::uint64_t seed);

/// A bounded counterexample fails when run; a bounded Valid verdict is never
/// contradicted by a run inside the bound.
SuiteResult bounded_interpreter_agreement(int cases, std::uint64_t seed);

/// The global monotonicity wrapper against a direct restatement of its calls.
SuiteResult global_monotone_oracle(int cases, std::uint64_t seed, const std::string &corpus);

/// Every call of the pointer monotonicity wrapper gets its own heap cell.
SuiteResult pointer_cells_distinct(int cases, std::uint64_t seed, const std::string &corpus);

} // namespace relprop::props
