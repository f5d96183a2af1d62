#pragma once
// MiniC abstract syntax: program expressions, logic terms/predicates,
// statements, contracts with relational clauses, and generated axiomatics.
//
// Expressions and statements are immutable and shared through
// shared_ptr<const T>. Structural equality ignores source spans.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relprop/diagnostic.hpp"

namespace relprop {

enum class Type { Int, IntPtr, Void };

std::string to_string(Type t);

struct Binder {
  std::string name;
  Type type = Type::Int;
  bool operator==(const Binder &) const = default;
};

enum class ExprKind {
  IntLit,
  FloatLit,   // parsed, rejected by validate
  BoolLit,
  Var,
  Deref,      // *p, text = p
  Result,     // \result
  Unary,
  Binary,
  Ite,        // c ? a : b
  At,         // \at(args[0], text); \old(e) is At with label "Old"
  CallResult, // \callresult(text)
  CallPure,   // \callpure(inlining, text, args)
  App,        // logic application text{labels}(args)
  Quant,      // \forall / \exists binders; args[0]
  Separated,  // \separated(args[0], args[1])
};

enum class UnOp { Neg, Not };

enum class BinOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };

enum class Quantifier { Forall, Exists };

const char *to_string(BinOp op);
bool is_comparison(BinOp op);
bool is_arith(BinOp op);
bool is_logical(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  std::int64_t value = 0;
  std::string text;
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  Quantifier quant = Quantifier::Forall;
  int inlining = 1;
  std::vector<ExprPtr> args;
  std::vector<std::string> labels;
  std::vector<Binder> binders;
  SourceSpan span;
};

bool operator==(const Expr &a, const Expr &b);
bool equal(const ExprPtr &a, const ExprPtr &b);

namespace mk {
ExprPtr int_lit(std::int64_t v, SourceSpan s = {});
ExprPtr float_lit(std::string spelling, SourceSpan s = {});
ExprPtr bool_lit(bool v, SourceSpan s = {});
ExprPtr var(std::string name, SourceSpan s = {});
ExprPtr deref(std::string ptr, SourceSpan s = {});
ExprPtr result(SourceSpan s = {});
ExprPtr unary(UnOp op, ExprPtr e, SourceSpan s = {});
ExprPtr neg(ExprPtr e);
ExprPtr lnot(ExprPtr e);
ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b, SourceSpan s = {});
ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b, SourceSpan s = {});
ExprPtr at(ExprPtr e, std::string label, SourceSpan s = {});
ExprPtr call_result(std::string id, SourceSpan s = {});
ExprPtr call_pure(int inlining, std::string fn, std::vector<ExprPtr> args,
                  SourceSpan s = {});
ExprPtr app(std::string fn, std::vector<ExprPtr> args,
            std::vector<std::string> labels = {}, SourceSpan s = {});
ExprPtr quant(Quantifier q, std::vector<Binder> binders, ExprPtr body,
              SourceSpan s = {});
ExprPtr separated(ExprPtr p, ExprPtr q, SourceSpan s = {});
/// Right-nested implication chain h1 ==> h2 ==> ... ==> concl.
ExprPtr implies_chain(const std::vector<ExprPtr> &hyps, ExprPtr concl);
ExprPtr conj(const std::vector<ExprPtr> &parts);
} // namespace mk

/// Rebuilds `e` bottom-up; `f` is applied to each node after its children.
/// Returning nullptr from `pre` continues the default traversal; a non-null
/// result replaces the node without descending.
ExprPtr rewrite(const ExprPtr &e,
                const std::function<ExprPtr(const ExprPtr &)> &pre);

void visit(const ExprPtr &e, const std::function<void(const Expr &)> &f);

// ---------------------------------------------------------------------------
// Statements

enum class StmtKind { Skip, Decl, Assign, Call, If, While, Block, Return, Assert };

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Skip;
  // Decl: variable; Assign: target (pointer name when deref_target);
  // Call: left-hand side (empty for a void call); Assert: label (optional).
  std::string name;
  bool deref_target = false;
  Type type = Type::Int;
  std::string callee;
  std::vector<ExprPtr> args;
  ExprPtr expr;  // Decl init, Assign rhs, If/While condition, Return value, Assert predicate
  std::vector<StmtPtr> stmts;  // Block
  StmtPtr then_branch;
  StmtPtr else_branch;
  StmtPtr body;  // While
  std::vector<ExprPtr> invariants;
  ExprPtr variant;
  SourceSpan span;
};

bool operator==(const Stmt &a, const Stmt &b);
bool equal(const StmtPtr &a, const StmtPtr &b);

namespace mk {
StmtPtr skip();
StmtPtr decl(std::string name, ExprPtr init = nullptr, Type t = Type::Int);
StmtPtr assign(std::string target, ExprPtr rhs);
StmtPtr assign_deref(std::string ptr, ExprPtr rhs);
StmtPtr call(std::string lhs, std::string callee, std::vector<ExprPtr> args);
StmtPtr if_(ExprPtr c, StmtPtr t, StmtPtr e = nullptr);
StmtPtr while_(ExprPtr c, StmtPtr body, std::vector<ExprPtr> inv = {},
               ExprPtr variant = nullptr);
StmtPtr block(std::vector<StmtPtr> stmts);
StmtPtr ret(ExprPtr e = nullptr);
StmtPtr assert_(std::string label, ExprPtr pred);
} // namespace mk

// ---------------------------------------------------------------------------
// Contracts

struct Loc {
  enum class Kind { Global, Formal, Deref, Result, Nothing };
  Kind kind = Kind::Nothing;
  std::string name;

  static Loc global(std::string n) { return {Kind::Global, std::move(n)}; }
  static Loc formal(std::string n) { return {Kind::Formal, std::move(n)}; }
  static Loc deref(std::string n) { return {Kind::Deref, std::move(n)}; }
  static Loc result() { return {Kind::Result, {}}; }
  static Loc nothing() { return {Kind::Nothing, {}}; }

  /// Global or Deref: the locations that make up the memory state.
  bool is_state() const { return kind == Kind::Global || kind == Kind::Deref; }
  std::string str() const;

  bool operator==(const Loc &) const = default;
  auto operator<=>(const Loc &) const = default;
};

struct AssignsClause {
  Loc written;
  std::vector<Loc> from;
  bool has_from = false;
  bool operator==(const AssignsClause &) const = default;
};

struct CallSpec {
  int inlining = 1;
  std::string callee;
  std::vector<ExprPtr> args;
  std::string call_id;
  SourceSpan span;
};

struct RelationalClause {
  std::string name;
  std::vector<Binder> binders;
  std::vector<CallSpec> callset;
  ExprPtr pred;
  SourceSpan span;

  const CallSpec *find_call(const std::string &id) const;
};

struct Behavior {
  std::string name;
  std::vector<ExprPtr> ensures;
};

struct Contract {
  std::vector<ExprPtr> requires_;
  std::vector<ExprPtr> ensures;
  std::vector<AssignsClause> assigns;
  std::vector<RelationalClause> relational;
  std::vector<Behavior> behaviors;

  bool empty() const {
    return requires_.empty() && ensures.empty() && assigns.empty() &&
           relational.empty() && behaviors.empty();
  }
};

bool operator==(const CallSpec &a, const CallSpec &b);
bool operator==(const RelationalClause &a, const RelationalClause &b);
bool operator==(const Behavior &a, const Behavior &b);
bool operator==(const Contract &a, const Contract &b);

struct FunctionDef {
  std::string name;
  Type ret = Type::Void;
  std::vector<Binder> formals;
  StmtPtr body;  // null for a prototype
  Contract contract;
  SourceSpan span;

  const Binder *find_formal(const std::string &n) const;
};

bool operator==(const FunctionDef &a, const FunctionDef &b);

struct GlobalDecl {
  std::string name;
  Type type = Type::Int;
  ExprPtr init;
  SourceSpan span;
};

bool operator==(const GlobalDecl &a, const GlobalDecl &b);

/// `predicate name{labels}(params) reads ...;` or `logic int name(params);`
struct LogicDecl {
  std::string name;
  std::vector<std::string> labels;
  std::vector<Binder> params;
  std::optional<Type> result;  // nullopt: predicate
  std::vector<ExprPtr> reads;

  bool is_predicate() const { return !result.has_value(); }
};

struct Lemma {
  std::string name;
  std::vector<std::string> labels;
  ExprPtr body;
};

struct Axiomatic {
  std::string name;
  std::vector<LogicDecl> decls;
  std::vector<Lemma> lemmas;
  SourceSpan span;
};

bool operator==(const LogicDecl &a, const LogicDecl &b);
bool operator==(const Lemma &a, const Lemma &b);
bool operator==(const Axiomatic &a, const Axiomatic &b);

using Decl = std::variant<GlobalDecl, FunctionDef, Axiomatic>;

struct Program {
  std::vector<Decl> decls;

  std::vector<const GlobalDecl *> globals() const;
  std::vector<const FunctionDef *> functions() const;
  std::vector<const Axiomatic *> axiomatics() const;
  const FunctionDef *find_function(const std::string &name) const;
  const GlobalDecl *find_global(const std::string &name) const;
  const LogicDecl *find_logic(const std::string &name) const;
  const Lemma *find_lemma(const std::string &name) const;

  bool operator==(const Program &) const = default;
};

// ---------------------------------------------------------------------------
// Statement utilities

/// Calls `f` on every statement, pre-order.
void visit(const StmtPtr &s, const std::function<void(const Stmt &)> &f);

/// Calls `f` on every expression directly held by the statement tree
/// (conditions, right-hand sides, call arguments, annotations).
void visit_exprs(const StmtPtr &s, const std::function<void(const ExprPtr &)> &f);

bool contains_return(const StmtPtr &s);

} // namespace relprop
