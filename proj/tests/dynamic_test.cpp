#include <gtest/gtest.h>

#include <array>
#include <optional>

#include "relprop/dynamic.hpp"
#include "relprop/selfcomp.hpp"
#include "test_util.hpp"

using namespace relprop;
using relprop::testing::load_corpus;
using relprop::testing::parse_or_die;

namespace {

InputVector vec(std::map<std::string, std::int64_t> m) { return InputVector{std::move(m)}; }

const WrapperInfo &wrapper(const TransformedProgram &tp, const std::string &clause) {
  const WrapperInfo *w = find_property(tp, clause);
  if (!w)
    throw std::runtime_error("no property " + clause);
  return *w;
}

} // namespace

TEST(Interp, GlobalIncrement) {
  Program p = load_corpus("global_monotone.mc");
  State st;
  st.globals["y"] = 5;
  auto r = interpret(*p.find_function("h"), p, {}, st);
  EXPECT_EQ(r.state.globals.at("y"), 15);
  EXPECT_FALSE(r.value);
}

TEST(Interp, PointerIncrement) {
  Program p = load_corpus("pointer_monotone.mc");
  State st;
  auto cell = st.alloc(3);
  auto r = interpret(*p.find_function("k"), p, {cell}, st);
  EXPECT_EQ(r.state.heap.at(static_cast<std::size_t>(cell)), 4);
}

TEST(Interp, MaxAndRecursion) {
  Program p = load_corpus("max_abs.mc");
  EXPECT_EQ(interpret(*p.find_function("max"), p, {3, 5}, {}).value, 5);
  EXPECT_EQ(interpret(*p.find_function("max"), p, {-2, -9}, {}).value, -2);
  Program f = load_corpus("fact_inline.mc");
  EXPECT_EQ(interpret(*f.find_function("fact"), f, {5}, {}).value, 120);
}

TEST(Interp, RuntimeErrors) {
  Program p = parse_or_die(R"(
    int quot(int a, int b) { return a / b; }
    int big(int a) { return a * a * a * a * a; }
    int spin(int a) {
      /*@ loop invariant \true; */
      while (1) { a = a + 0; }
      return a;
    }
    int bad(int a) {
      /*@ assert low: a < 0; */
      return a;
    })");
  EXPECT_EQ(interpret(*p.find_function("quot"), p, {-7, 2}, {}).value, -3);
  EXPECT_THROW(interpret(*p.find_function("quot"), p, {1, 0}, {}), DivisionByZero);
  EXPECT_THROW(interpret(*p.find_function("big"), p, {1 << 20}, {}), Overflow);
  EXPECT_THROW(interpret(*p.find_function("spin"), p, {0}, {}, 1000), FuelExhausted);
  try {
    interpret(*p.find_function("bad"), p, {4}, {});
    FAIL() << "no violation";
  } catch (const AssertViolated &e) {
    EXPECT_EQ(e.id(), "low");
    EXPECT_EQ(e.state().vars.at("a"), 4);
  }
}

TEST(Interp, LoopInvariantIsChecked) {
  Program p = parse_or_die(R"(
    int f(int n) {
      int i = 0;
      /*@ loop invariant i <= 3; */
      while (i < n) { i = i + 1; }
      return i;
    })");
  EXPECT_EQ(interpret(*p.find_function("f"), p, {3}, {}).value, 3);
  EXPECT_THROW(interpret(*p.find_function("f"), p, {5}, {}), AssertViolated);
}

TEST(RunWrapper, GlobalMonotone) {
  auto tp = transform(load_corpus("global_monotone.mc"));
  const auto &w = wrapper(tp, "R1");
  EXPECT_EQ(input_slots(tp, w), (std::vector<std::string>{"y_id1", "y_id2"}));
  for (auto in : {vec({{"y_id1", 1}, {"y_id2", 2}}), vec({{"y_id1", 2}, {"y_id2", 1}})}) {
    auto r = run_wrapper(tp, w, in);
    EXPECT_EQ(r.outcome, Outcome::Pass) << r.message;
  }
}

TEST(RunWrapper, NegationFails) {
  auto tp = transform(load_corpus("neg_monotone.mc"));
  auto r = run_wrapper(tp, wrapper(tp, "Monotone"), vec({{"x1", 0}, {"x2", 1}}));
  EXPECT_EQ(r.outcome, Outcome::Fail);
  EXPECT_EQ(r.property, "Monotone");
  EXPECT_EQ(r.input, vec({{"x1", 0}, {"x2", 1}}));
  EXPECT_FALSE(r.assertion.empty());
}

TEST(RunWrapper, DivisionByZeroIsAnError) {
  auto tp = transform(parse_or_die(R"(
    /*@ assigns \result \from a, b;
        relational Q:
          \forall int a, b;
            \callset(\call(quot, a, b, id1), \call(quot, a, b, id2)) ==>
              \callresult(id1) == \callresult(id2);
    */
    int quot(int a, int b) { return a / b; })"));
  const auto &w = wrapper(tp, "Q");
  EXPECT_EQ(run_wrapper(tp, w, vec({{"a", 4}, {"b", 2}})).outcome, Outcome::Pass);
  auto r = run_wrapper(tp, w, vec({{"a", 4}, {"b", 0}}));
  EXPECT_EQ(r.outcome, Outcome::Error);
  EXPECT_NE(r.message.find("division"), std::string::npos) << r.message;
}

TEST(RunWrapper, PreconditionOutsideRange) {
  auto tp = transform(load_corpus("fact_inline.mc"));
  const auto &w = wrapper(tp, "R1");
  auto r = run_wrapper(tp, w, vec({{"n", -3}}));
  EXPECT_FALSE(r.precondition_met);
  EXPECT_EQ(r.outcome, Outcome::Pass);
  EXPECT_TRUE(run_wrapper(tp, w, vec({{"n", 4}})).precondition_met);
}

TEST(RunWrapper, PointerCellsAreDistinct) {
  auto tp = transform(load_corpus("pointer_monotone.mc"));
  auto r = run_wrapper(tp, wrapper(tp, "R1"), vec({{"*y_id1", 7}, {"*y_id2", 7}}));
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_NE(r.cells.begin()->second, r.cells.rbegin()->second);
}

TEST(Search, ExhaustiveFindsTie) {
  // Oracle: P1 fails exactly when x == y for this comparator.
  auto cmp = [](long x, long y) { return x >= y ? 1 : -1; };
  auto tp = transform(load_corpus("comparators/sign_flawed.mc"));
  Strategy s;
  s.bound = 3;
  auto r = find_counterexample(tp, wrapper(tp, "P1"), s, 10);
  ASSERT_TRUE(r.counterexample);
  auto x = r.counterexample->values.at("x"), y = r.counterexample->values.at("y");
  EXPECT_NE(cmp(x, y), -cmp(y, x));
  EXPECT_EQ(x, y);
  EXPECT_EQ(x, -3);  // first in lexicographic order
}

TEST(Search, ExhaustiveAgreesWithOracle) {
  // Oracle: the near-swap comparator restated in C++, and the first failing
  // vector of P2 in lexicographic order over [-4, 4]^3.
  auto cmp = [](long x, long y) {
    if (x > y + 1)
      return 1;
    if (y > x + 1)
      return -1;
    return x > y ? -1 : (x < y ? 1 : 0);
  };
  std::optional<std::array<long, 3>> first;
  for (long x = -4; x <= 4 && !first; ++x)
    for (long y = -4; y <= 4 && !first; ++y)
      for (long z = -4; z <= 4 && !first; ++z)
        if (cmp(x, y) > 0 && cmp(y, z) > 0 && !(cmp(x, z) > 0))
          first = std::array<long, 3>{x, y, z};
  ASSERT_TRUE(first);

  auto tp = transform(load_corpus("comparators/near_swap_flawed.mc"));
  const auto &w = wrapper(tp, "P2");
  EXPECT_EQ(input_slots(tp, w), (std::vector<std::string>{"x", "y", "z"}));
  Strategy s;
  s.bound = 4;
  auto r = find_counterexample(tp, w, s, 10);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(*r.counterexample, vec({{"x", (*first)[0]}, {"y", (*first)[1]}, {"z", (*first)[2]}}));
}

TEST(Search, ExhaustiveFindsNoneForIdentity) {
  auto tp = transform(load_corpus("max_abs.mc"));
  Strategy s;
  auto r = find_counterexample(tp, wrapper(tp, "R1"), s, 30);
  EXPECT_FALSE(r.counterexample);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.tried, 17u * 17u);
}

TEST(Search, RandomIsReproducible) {
  auto tp = transform(load_corpus("comparators/diff_wrap_flawed.mc"));
  const auto &w = wrapper(tp, "P1");
  Strategy s;
  s.kind = Strategy::Kind::Random;
  s.seed = 7;
  s.trials = 2000;
  auto a = find_counterexample(tp, w, s, 30);
  auto b = find_counterexample(tp, w, s, 30);
  EXPECT_EQ(a.tried, b.tried);
  EXPECT_EQ(a.counterexample, b.counterexample);
}

TEST(Replay, EmptyAndRoundTrip) {
  auto tp = transform(load_corpus("neg_monotone.mc"));
  EXPECT_TRUE(runtime_check(tp, {}).empty());

  Strategy s;
  auto text = counterexample_json("Monotone", "relational_wrapper_1",
                                  vec({{"x1", 0}, {"x2", 1}}), s);
  auto vs = parse_counterexamples(text);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].property, "Monotone");
  EXPECT_EQ(vs[0].input, vec({{"x1", 0}, {"x2", 1}}));
  auto reps = runtime_check(tp, vs);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].outcome, Outcome::Fail);

  EXPECT_EQ(parse_counterexamples("[" + text + "," + text + "]").size(), 2u);
  EXPECT_THROW(parse_counterexamples("{\"property\": 3}"), Error);
  EXPECT_THROW(parse_counterexamples("not json"), Error);
}

TEST(Replay, UnknownPropertyIsAnError) {
  auto tp = transform(load_corpus("neg_monotone.mc"));
  auto reps = runtime_check(tp, {{"Nope", vec({})}});
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].outcome, Outcome::Error);
}
