#include <gtest/gtest.h>

#include "relprop/selfcomp.hpp"
#include "test_util.hpp"

using namespace relprop;
using relprop::testing::load_corpus;
using relprop::testing::parse_or_die;
using relprop::testing::read_file;

namespace {

const RelationalClause &only_clause(const Program &p, const std::string &fn) {
  return p.find_function(fn)->contract.relational.at(0);
}

std::string print_stmts(const std::vector<StmtPtr> &v) {
  std::string out;
  for (const auto &s : v)
    out += print_stmt(s) + "\n";
  return out;
}

std::string golden_path(const std::string &name) {
  return relprop::testing::corpus_path("golden/" + name + ".expected.mc");
}

void expect_same_program(const Program &got, const std::string &expected_text) {
  Program want = parse_or_die(expected_text);
  EXPECT_TRUE(got == want) << "got:\n" << pretty_print(got) << "\nwant:\n" << pretty_print(want);
}

} // namespace

// Expected output of the pure max/abs example, written by hand.
TEST(Selfcomp, PureClauseGolden) {
  auto tp = transform(load_corpus("max_abs.mc"));
  expect_same_program(tp.program, read_file(golden_path("max_abs")));
}

// Global side effect, state-parameterized predicate.
TEST(Selfcomp, GlobalClauseGolden) {
  auto tp = transform(load_corpus("global_monotone.mc"));
  expect_same_program(tp.program, read_file(golden_path("global_monotone")));
}

// Pointer side effect, labeled predicate with a reads footprint. Each call
// gets its own pointer formal, `y_id1` and `y_id2`.
TEST(Selfcomp, PointerClauseGolden) {
  auto tp = transform(load_corpus("pointer_monotone.mc"));
  expect_same_program(tp.program, read_file(golden_path("pointer_monotone")));
}

TEST(Selfcomp, RenamingsDuplicateOnlyTheFootprint) {
  auto p5 = load_corpus("global_monotone.mc");
  auto r5 = make_renamings(only_clause(p5, "h"), p5);
  ASSERT_EQ(r5.size(), 2u);
  EXPECT_EQ(r5[0].state.at(Loc::global("y")), "y_id1");
  EXPECT_EQ(r5[1].state.at(Loc::global("y")), "y_id2");
  EXPECT_EQ(r5[0].locals.at("a"), "a_1");
  EXPECT_EQ(r5[1].locals.at("a"), "a_2");
  EXPECT_FALSE(r5[0].result.has_value());

  auto p6 = load_corpus("pointer_monotone.mc");
  auto r6 = make_renamings(only_clause(p6, "k"), p6);
  EXPECT_EQ(r6[0].state.at(Loc::deref("y")), "y_id1");
  EXPECT_EQ(r6[1].state.at(Loc::deref("y")), "y_id2");
  EXPECT_EQ(r6[0].state.size(), 1u);

  auto p2 = load_corpus("max_abs.mc");
  auto r2 = make_renamings(only_clause(p2, "max"), p2);
  EXPECT_TRUE(r2[0].state.empty());
  EXPECT_TRUE(r2[1].state.empty());
  EXPECT_EQ(*r2[0].result, "ret_id1");
  EXPECT_EQ(*r2[1].result, "ret_id2");
}

TEST(Selfcomp, RenamingAvoidsExistingNames) {
  auto p = parse_or_die(R"(
int g; int g_id1;
/*@ assigns g \from g;
    relational R1: \forall int a_1; \callset(\call(f, a_1, id1)) ==> \at(g, Post_id1) >= 0; */
void f(int a) { int ret_id1 = a; g = ret_id1; }
)");
  auto rs = make_renamings(only_clause(p, "f"), p);
  EXPECT_EQ(rs[0].state.at(Loc::global("g")), "g_id1_");
  EXPECT_EQ(rs[0].locals.at("a"), "a_1_");
  EXPECT_NE(rs[0].locals.at("ret_id1"), "ret_id1");
  auto tp = transform(p);
  EXPECT_TRUE(validate(tp.program).empty()) << pretty_print(tp.program);
}

TEST(Selfcomp, InlineCallExamples) {
  auto p5 = load_corpus("global_monotone.mc");
  const auto &c5 = only_clause(p5, "h");
  auto r5 = make_renamings(c5, p5);
  EXPECT_EQ(print_stmts(inline_call(c5.callset[0], r5[0], p5, 1)),
            "int a_1 = 10;\ny_id1 = y_id1 + a_1;\n");

  auto p6 = load_corpus("pointer_monotone.mc");
  const auto &c6 = only_clause(p6, "k");
  auto r6 = make_renamings(c6, p6);
  EXPECT_EQ(print_stmts(inline_call(c6.callset[0], r6[0], p6, 1)),
            "*y_id1 = *y_id1 + 1;\n");
}

TEST(Selfcomp, RecursiveCallBecomesOpaqueAtDepth) {
  auto p = load_corpus("fact_inline.mc");
  const auto &c = only_clause(p, "fact");
  auto rs = make_renamings(c, p);

  auto count_apps = [](const std::vector<StmtPtr> &v) {
    int apps = 0;
    for (const auto &s : v)
      visit_exprs(s, [&](const ExprPtr &e) {
        visit(e, [&](const Expr &x) { apps += x.kind == ExprKind::App && x.text == "fact_acsl"; });
      });
    return apps;
  };
  auto count_mults = [](const std::vector<StmtPtr> &v) {
    int n = 0;
    for (const auto &s : v)
      visit(s, [&](const Stmt &st) {
        n += st.kind == StmtKind::Assign && st.expr->kind == ExprKind::Binary &&
             st.expr->binop == BinOp::Mul;
      });
    return n;
  };
  auto d1 = inline_call(c.callset[0], rs[0], p, 1);
  EXPECT_EQ(count_apps(d1), 1);
  EXPECT_EQ(count_mults(d1), 1);
  auto d2 = inline_call(c.callset[0], rs[0], p, 2);
  EXPECT_EQ(count_apps(d2), 1);
  EXPECT_EQ(count_mults(d2), 2);
  auto d3 = inline_call(c.callset[0], rs[0], p, 3);
  EXPECT_EQ(count_mults(d3), 3);
  for (const auto &s : d1)
    visit(s, [](const Stmt &st) { EXPECT_NE(st.kind, StmtKind::Call); });
}

TEST(Selfcomp, SideEffectingRecursionAtDepthIsAnError) {
  auto p = parse_or_die(R"(
int g;
/*@ assigns g \from g;
    relational R1: \forall int n; \callset(\call(f, n, id1)) ==> \at(g, Post_id1) >= \at(g, Pre_id1); */
void f(int n) { if (n > 0) { g = g + 1; f(n - 1); } }
)");
  EXPECT_THROW(transform(p), TransformError);
}

TEST(Selfcomp, TranslatePredExamples) {
  auto p5 = load_corpus("global_monotone.mc");
  const auto &c5 = only_clause(p5, "h");
  auto r5 = make_renamings(c5, p5);
  EXPECT_EQ(print_expr(translate_pred(c5.pred, r5, p5)),
            "\\at(y_id1, Pre) < \\at(y_id2, Pre) ==> \\at(y_id1, Here) < \\at(y_id2, Here)");

  auto p2 = load_corpus("max_abs.mc");
  const auto &c2 = only_clause(p2, "max");
  auto r2 = make_renamings(c2, p2);
  EXPECT_EQ(print_expr(translate_pred(c2.pred, r2, p2)),
            "ret_id1 == (x1 + y1 + ret_id2) / 2");
  EXPECT_EQ(print_expr(translate_pred(mk::bool_lit(true), r2, p2)), "\\true");
  EXPECT_EQ(print_expr(translate_pred(parse_expr("\\callpure(abs, x1) >= 0"), r2, p2)),
            "abs_acsl(x1) >= 0");
}

TEST(Selfcomp, SingleCallWrapperHasNoSeparation) {
  auto p = parse_or_die(R"(
/*@ assigns *q \from *q;
    relational R1: \callset(\call(inc, id1)) ==> \at(*q, Post_id1) == \at(*q, Pre_id1) + 1; */
void inc(int *q) { *q = *q + 1; }
)");
  auto w = build_wrapper(only_clause(p, "inc"), p);
  EXPECT_TRUE(w.contract.requires_.empty());
  ASSERT_EQ(w.formals.size(), 1u);
  EXPECT_EQ(w.formals[0].type, Type::IntPtr);
  EXPECT_EQ(w.body->stmts.back()->kind, StmtKind::Assert);
  EXPECT_EQ(w.body->stmts.back()->name, "Rpp");
}

TEST(Selfcomp, ClauseFreeProgramIsUnchanged) {
  auto p = parse_or_die("int g;\nint f(int x) { return x + g; }\n");
  EXPECT_TRUE(transform(p).program == p);
}

TEST(Selfcomp, DeterministicAndValidOnCorpus) {
  for (const char *name : {"max_abs.mc", "global_monotone.mc",
                           "pointer_monotone.mc", "crypt_decrypt.mc",
                           "fact_inline.mc"}) {
    auto p = load_corpus(name);
    auto a = pretty_print(transform(p).program);
    auto b = pretty_print(transform(p).program);
    EXPECT_EQ(a, b) << name;
    auto tp = transform(p);
    auto ds = validate(tp.program);
    EXPECT_TRUE(ds.empty()) << name << "\n" << (ds.empty() ? "" : ds[0].message);
    EXPECT_TRUE(parse_or_die(a) == tp.program) << name;
  }
}

TEST(Selfcomp, CallFragmentsAreWriteDisjoint) {
  for (const char *name : {"max_abs.mc", "global_monotone.mc",
                           "pointer_monotone.mc", "crypt_decrypt.mc",
                           "fact_inline.mc"}) {
    auto p = load_corpus(name);
    for (const auto *f : p.functions())
      for (const auto &rc : f->contract.relational) {
        auto rs = make_renamings(rc, p);
        std::vector<std::set<std::string>> touched;
        for (std::size_t i = 0; i < rs.size(); ++i) {
          std::set<std::string> vars;
          for (const auto &s : inline_call(rc.callset[i], rs[i], p, rc.callset[i].inlining))
            visit(s, [&](const Stmt &st) {
              if (st.kind == StmtKind::Decl || st.kind == StmtKind::Assign)
                vars.insert(st.deref_target ? "*" + st.name : st.name);
            });
          if (rs[i].result)
            vars.insert(*rs[i].result);
          touched.push_back(vars);
        }
        for (std::size_t i = 0; i < touched.size(); ++i)
          for (std::size_t j = i + 1; j < touched.size(); ++j)
            for (const auto &v : touched[i])
              EXPECT_FALSE(touched[j].count(v)) << name << " " << v;
      }
  }
}

TEST(Selfcomp, ClientProgramGetsTheLemma) {
  auto tp = transform(load_corpus("crypt_decrypt.mc"));
  ASSERT_EQ(tp.wrappers.size(), 1u);
  EXPECT_EQ(tp.wrappers[0].clause, "R3");
  EXPECT_NE(tp.program.find_lemma("Relational_lemma_1"), nullptr);
  EXPECT_NE(tp.program.find_function("run"), nullptr);
  EXPECT_NE(provenance_json(tp).find("\"R3\""), std::string::npos);
}

TEST(Selfcomp, LogicSymbolsDeclaredOnceAcrossClauses) {
  auto p = parse_or_die(R"(
/*@ assigns \result \from x;
    relational R1: \forall int a; \callset(\call(f, a, id1)) ==> \callresult(id1) >= a;
    relational R2: \forall int a, b; \callset(\call(f, a, id1), \call(f, b, id2)) ==>
                     a <= b ==> \callresult(id1) <= \callresult(id2);
*/
int f(int x) { if (x < 0) return 0; return x + 1; }
)");
  auto tp = transform(p);
  int decls = 0;
  for (const auto *a : tp.program.axiomatics())
    decls += static_cast<int>(a->decls.size());
  EXPECT_EQ(decls, 1);
  EXPECT_EQ(tp.program.find_function("f")->contract.behaviors.size(), 1u);
  EXPECT_EQ(tp.wrappers.size(), 2u);
  EXPECT_TRUE(validate(tp.program).empty());
}

// Second call unfolded twice; the innermost recursive call becomes the logic
// counterpart.
TEST(Selfcomp, FactorialUnfoldingGolden) {
  auto tp = transform(load_corpus("fact_inline.mc"));
  expect_same_program(tp.program, read_file(golden_path("fact_inline")));
}
