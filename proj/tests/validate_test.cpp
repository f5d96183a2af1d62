#include <gtest/gtest.h>

#include "relprop/validate.hpp"
#include "test_util.hpp"

using namespace relprop;
using relprop::testing::load_corpus;
using relprop::testing::parse_or_die;

namespace {

std::string dump(const Diagnostics &ds) {
  std::ostringstream os;
  for (const auto &d : ds)
    os << d << "\n";
  return os.str();
}

MemFootprint fp(std::set<Loc> w, std::set<Loc> r) { return {std::move(w), std::move(r)}; }

} // namespace

TEST(Validate, CorpusProgramsAreWellFormed) {
  for (const char *name : {"max_abs.mc", "global_monotone.mc",
                           "pointer_monotone.mc"}) {
    auto ds = validate(load_corpus(name));
    EXPECT_TRUE(ds.empty()) << name << "\n" << dump(ds);
  }
}

TEST(Validate, DanglingCallIdGivesOneDiagnostic) {
  auto p = parse_or_die(R"(
/*@ assigns \result \from x;
    relational R1: \forall int a; \callset(\call(f, a, id1)) ==> \callresult(id3) == a;
*/
int f(int x) { return x; }
)");
  auto ds = validate(p);
  ASSERT_EQ(ds.size(), 1u) << dump(ds);
  EXPECT_NE(ds[0].message.find("id3"), std::string::npos);
  EXPECT_TRUE(ds[0].span.valid());
}

TEST(Validate, MissingAssignsGivesOneDiagnostic) {
  auto p = parse_or_die(R"(
int g;
void bump(void) { g = g + 1; }
/*@ relational R1: \callset(\call(bump, id1), \call(bump, id2)) ==>
      \at(g, Pre_id1) < \at(g, Pre_id2) ==> \at(g, Post_id1) < \at(g, Post_id2);
*/
void client(void) { bump(); }
)");
  auto ds = validate(p);
  ASSERT_EQ(ds.size(), 1u) << dump(ds);
  EXPECT_NE(ds[0].message.find("assigns"), std::string::npos);
}

TEST(Validate, UndeclaredPartialCoverageIsReported) {
  auto p = parse_or_die(R"(
int g; int h;
/*@ assigns g \from g; */
void bump(void) { g = g + h; }
/*@ relational R1: \callset(\call(bump, id1)) ==> \at(g, Post_id1) == \at(g, Post_id1); */
void client(void) { bump(); }
)");
  EXPECT_THROW(footprint_of(*p.find_function("bump"), p), MissingAssigns);
  EXPECT_EQ(validate(p).size(), 1u);
}

TEST(Validate, RejectsAssortedIllFormedPrograms) {
  struct Case {
    const char *what;
    const char *text;
  };
  const Case cases[] = {
      {"undeclared var", "int f(int x) { return z; }"},
      {"float literal", "int f(int x) { return 1.5; }"},
      {"void returns value", "void f(int x) { return x; }"},
      {"duplicate local", "int f(int x) { int a = 1; int a = 2; return a; }"},
      {"pointer as value", "int f(int *p) { int q = 0; return p; }"},
      {"deref non pointer", "int f(int x) { return *x; }"},
      {"call arity", "int g(int x) { return x; } int f(int x) { int r; r = g(x, x); return r; }"},
      {"result outside ensures", "/*@ requires \\result > 0; */ int f(int x) { return x; }"},
      {"bare global in pred",
       "int g;\n/*@ assigns g \\from g;\n relational R1: \\callset(\\call(f, id1)) ==> g == 0; */\n"
       "void f(void) { g = 0; }"},
      {"callresult of void",
       "int g;\n/*@ assigns g \\from g;\n relational R1: \\callset(\\call(f, id1)) ==> \\callresult(id1) == 0; */\n"
       "void f(void) { g = 0; }"},
      {"duplicate ids",
       "/*@ relational R1: \\forall int a; \\callset(\\call(f, a, id1), \\call(f, a, id1)) ==> \\true; */\n"
       "int f(int x) { return x; }"},
      {"call arg uses non binder",
       "/*@ relational R1: \\forall int a; \\callset(\\call(f, b, id1)) ==> \\true; */\n"
       "int f(int x) { return x; }"},
      {"callee declared later",
       "/*@ relational R1: \\forall int a; \\callset(\\call(g, a, id1)) ==> \\true; */\n"
       "int f(int x) { return x; }\nint g(int x) { return x; }"},
      {"callpure of impure",
       "int c;\n/*@ assigns c \\from c; */ int g(int x) { c = x; return x; }\n"
       "/*@ relational R1: \\forall int a; \\callset(\\call(f, a, id1)) ==> \\callresult(id1) == \\callpure(g, a); */\n"
       "int f(int x) { return x; }"},
      {"call label in ordinary ensures",
       "int g;\n/*@ assigns g \\from g; ensures \\at(g, Pre_id1) == 0; */ void f(void) { g = 0; }"},
      {"duplicate clause name",
       "/*@ relational R1: \\forall int a; \\callset(\\call(f, a, id1)) ==> \\true;\n"
       "    relational R1: \\forall int a; \\callset(\\call(f, a, id1)) ==> \\true; */\n"
       "int f(int x) { return x; }"},
  };
  for (const auto &c : cases) {
    auto r = parse_program(c.text);
    if (!r.ok())
      continue; // a parse-level rejection is fine too
    EXPECT_FALSE(validate(*r.program).empty()) << c.what;
  }
}

TEST(Footprint, CorpusFunctions) {
  auto p5 = load_corpus("global_monotone.mc");
  EXPECT_EQ(footprint_of(*p5.find_function("h"), p5),
            fp({Loc::global("y")}, {Loc::global("y")}));
  auto p6 = load_corpus("pointer_monotone.mc");
  EXPECT_EQ(footprint_of(*p6.find_function("k"), p6),
            fp({Loc::deref("y")}, {Loc::deref("y")}));
  auto p2 = load_corpus("max_abs.mc");
  EXPECT_EQ(footprint_of(*p2.find_function("max"), p2), MemFootprint{});
  EXPECT_TRUE(is_pure(*p2.find_function("max"), p2));
  EXPECT_FALSE(is_pure(*p5.find_function("h"), p5));
}

TEST(Footprint, CalleeFootprintsAreUnionedWithPointerMapping) {
  auto p = parse_or_die(R"(
int g;
/*@ assigns *q \from *q; */
void inc(int *q) { *q = *q + 1; }
/*@ assigns g \from g; assigns *a \from *a; */
void both(int *a) { inc(a); g = g + 1; }
)");
  EXPECT_EQ(footprint_of(*p.find_function("both"), p),
            fp({Loc::global("g"), Loc::deref("a")}, {Loc::global("g"), Loc::deref("a")}));
}

TEST(Footprint, IdempotentAndMonotoneUnderAddedClauses) {
  auto base = parse_or_die(R"(
int g;
/*@ assigns g \from g; */
void h(void) { g = g + 1; }
)");
  const auto &h = *base.find_function("h");
  auto f1 = footprint_of(h, base);
  EXPECT_EQ(f1, footprint_of(h, base));

  auto more = parse_or_die(R"(
int g; int u;
/*@ assigns g \from g; assigns u \from g; */
void h(void) { g = g + 1; }
)");
  auto f2 = footprint_of(*more.find_function("h"), more);
  for (const auto &l : f1.writes)
    EXPECT_TRUE(f2.writes.count(l));
  for (const auto &l : f1.reads)
    EXPECT_TRUE(f2.reads.count(l));
  EXPECT_TRUE(f2.writes.count(Loc::global("u")));
}
