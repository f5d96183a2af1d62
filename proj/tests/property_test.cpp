#include <gtest/gtest.h>

#include <iostream>

#include "props.hpp"

using namespace relprop::props;

namespace {

constexpr int kCases = 1000;

void expect_clean(const SuiteResult &r) {
  EXPECT_GE(r.cases, kCases) << r.name;
  EXPECT_EQ(r.failures, 0) << r.name << ": " << r.first_failure;
  std::cout << "[ suite    ] " << r.name << ": " << r.cases << " cases, " << r.note << "\n";
}

} // namespace

TEST(Property, ParserRoundTrip) { expect_clean(parser_round_trip(kCases, 1)); }

TEST(Property, SelfCompositionEquivalence) { expect_clean(selfcomp_equivalence(kCases, 2)); }

TEST(Property, WpSubstitution) { expect_clean(wp_substitution(kCases, 3)); }

TEST(Property, BoundedInterpreterAgreement) {
  expect_clean(bounded_interpreter_agreement(kCases, 4));
}

TEST(Property, GlobalMonotoneOracle) {
  expect_clean(global_monotone_oracle(kCases, 5, RELPROP_CORPUS_DIR));
}

TEST(Property, PointerCellsDistinct) {
  expect_clean(pointer_cells_distinct(kCases, 6, RELPROP_CORPUS_DIR));
}
