#include "relprop/ast.hpp"

#include <algorithm>

namespace relprop {

std::ostream &operator<<(std::ostream &os, const SourceSpan &span) {
  if (!span.file.empty())
    os << span.file << ":";
  return os << span.start_line << ":" << span.start_col;
}

std::ostream &operator<<(std::ostream &os, const Diagnostic &d) {
  os << d.span << ": " << (d.severity == Severity::Error ? "error" : "warning")
     << ": " << d.message;
  return os;
}

bool has_errors(const Diagnostics &diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic &d) {
    return d.severity == Severity::Error;
  });
}

std::string to_string(Type t) {
  switch (t) {
  case Type::Int:
    return "int";
  case Type::IntPtr:
    return "int *";
  case Type::Void:
    return "void";
  }
  return "?";
}

const char *to_string(BinOp op) {
  switch (op) {
  case BinOp::Add: return "+";
  case BinOp::Sub: return "-";
  case BinOp::Mul: return "*";
  case BinOp::Div: return "/";
  case BinOp::Eq: return "==";
  case BinOp::Ne: return "!=";
  case BinOp::Lt: return "<";
  case BinOp::Le: return "<=";
  case BinOp::Gt: return ">";
  case BinOp::Ge: return ">=";
  case BinOp::And: return "&&";
  case BinOp::Or: return "||";
  case BinOp::Implies: return "==>";
  }
  return "?";
}

bool is_comparison(BinOp op) {
  return op == BinOp::Eq || op == BinOp::Ne || op == BinOp::Lt ||
         op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge;
}

bool is_arith(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul ||
         op == BinOp::Div;
}

bool is_logical(BinOp op) {
  return op == BinOp::And || op == BinOp::Or || op == BinOp::Implies;
}

bool operator==(const Expr &a, const Expr &b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case ExprKind::IntLit:
  case ExprKind::BoolLit:
    return a.value == b.value;
  case ExprKind::FloatLit:
  case ExprKind::Var:
  case ExprKind::Deref:
  case ExprKind::CallResult:
    return a.text == b.text;
  case ExprKind::Result:
    return true;
  case ExprKind::Unary:
    if (a.unop != b.unop)
      return false;
    break;
  case ExprKind::Binary:
    if (a.binop != b.binop)
      return false;
    break;
  case ExprKind::Ite:
  case ExprKind::Separated:
    break;
  case ExprKind::At:
    if (a.text != b.text)
      return false;
    break;
  case ExprKind::CallPure:
    if (a.text != b.text || a.inlining != b.inlining)
      return false;
    break;
  case ExprKind::App:
    if (a.text != b.text || a.labels != b.labels)
      return false;
    break;
  case ExprKind::Quant:
    if (a.quant != b.quant || a.binders != b.binders)
      return false;
    break;
  }
  if (a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(a.args[i], b.args[i]))
      return false;
  return true;
}

bool equal(const ExprPtr &a, const ExprPtr &b) {
  if (a == b)
    return true;
  if (!a || !b)
    return false;
  return *a == *b;
}

namespace mk {

namespace {
std::shared_ptr<Expr> node(ExprKind k, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = std::move(s);
  return e;
}
} // namespace

ExprPtr int_lit(std::int64_t v, SourceSpan s) {
  auto e = node(ExprKind::IntLit, std::move(s));
  e->value = v;
  return e;
}

ExprPtr float_lit(std::string spelling, SourceSpan s) {
  auto e = node(ExprKind::FloatLit, std::move(s));
  e->text = std::move(spelling);
  return e;
}

ExprPtr bool_lit(bool v, SourceSpan s) {
  auto e = node(ExprKind::BoolLit, std::move(s));
  e->value = v ? 1 : 0;
  return e;
}

ExprPtr var(std::string name, SourceSpan s) {
  auto e = node(ExprKind::Var, std::move(s));
  e->text = std::move(name);
  return e;
}

ExprPtr deref(std::string ptr, SourceSpan s) {
  auto e = node(ExprKind::Deref, std::move(s));
  e->text = std::move(ptr);
  return e;
}

ExprPtr result(SourceSpan s) { return node(ExprKind::Result, std::move(s)); }

ExprPtr unary(UnOp op, ExprPtr a, SourceSpan s) {
  auto e = node(ExprKind::Unary, std::move(s));
  e->unop = op;
  e->args = {std::move(a)};
  return e;
}

ExprPtr neg(ExprPtr e) { return unary(UnOp::Neg, std::move(e)); }
ExprPtr lnot(ExprPtr e) { return unary(UnOp::Not, std::move(e)); }

ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b, SourceSpan s) {
  auto e = node(ExprKind::Binary, std::move(s));
  e->binop = op;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b, SourceSpan s) {
  auto e = node(ExprKind::Ite, std::move(s));
  e->args = {std::move(c), std::move(a), std::move(b)};
  return e;
}

ExprPtr at(ExprPtr a, std::string label, SourceSpan s) {
  auto e = node(ExprKind::At, std::move(s));
  e->text = std::move(label);
  e->args = {std::move(a)};
  return e;
}

ExprPtr call_result(std::string id, SourceSpan s) {
  auto e = node(ExprKind::CallResult, std::move(s));
  e->text = std::move(id);
  return e;
}

ExprPtr call_pure(int inlining, std::string fn, std::vector<ExprPtr> args,
                  SourceSpan s) {
  auto e = node(ExprKind::CallPure, std::move(s));
  e->inlining = inlining;
  e->text = std::move(fn);
  e->args = std::move(args);
  return e;
}

ExprPtr app(std::string fn, std::vector<ExprPtr> args,
            std::vector<std::string> labels, SourceSpan s) {
  auto e = node(ExprKind::App, std::move(s));
  e->text = std::move(fn);
  e->args = std::move(args);
  e->labels = std::move(labels);
  return e;
}

ExprPtr quant(Quantifier q, std::vector<Binder> binders, ExprPtr body,
              SourceSpan s) {
  auto e = node(ExprKind::Quant, std::move(s));
  e->quant = q;
  e->binders = std::move(binders);
  e->args = {std::move(body)};
  return e;
}

ExprPtr separated(ExprPtr p, ExprPtr q, SourceSpan s) {
  auto e = node(ExprKind::Separated, std::move(s));
  e->args = {std::move(p), std::move(q)};
  return e;
}

ExprPtr implies_chain(const std::vector<ExprPtr> &hyps, ExprPtr concl) {
  ExprPtr out = std::move(concl);
  for (auto it = hyps.rbegin(); it != hyps.rend(); ++it)
    out = binary(BinOp::Implies, *it, out);
  return out;
}

ExprPtr conj(const std::vector<ExprPtr> &parts) {
  if (parts.empty())
    return bool_lit(true);
  ExprPtr out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it)
    out = binary(BinOp::And, *it, out);
  return out;
}

} // namespace mk

ExprPtr rewrite(const ExprPtr &e,
                const std::function<ExprPtr(const ExprPtr &)> &pre) {
  if (!e)
    return e;
  if (auto r = pre(e))
    return r;
  if (e->args.empty())
    return e;
  bool changed = false;
  std::vector<ExprPtr> out;
  out.reserve(e->args.size());
  for (const auto &a : e->args) {
    out.push_back(rewrite(a, pre));
    changed |= out.back() != a;
  }
  if (!changed)
    return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->args = std::move(out);
  return copy;
}

void visit(const ExprPtr &e, const std::function<void(const Expr &)> &f) {
  if (!e)
    return;
  f(*e);
  for (const auto &a : e->args)
    visit(a, f);
}

// ---------------------------------------------------------------------------

namespace {
bool equal_exprs(const std::vector<ExprPtr> &a, const std::vector<ExprPtr> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i]))
      return false;
  return true;
}
} // namespace

bool operator==(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.name != b.name || a.deref_target != b.deref_target ||
      a.callee != b.callee)
    return false;
  if (a.kind == StmtKind::Decl && a.type != b.type)
    return false;
  if (!equal_exprs(a.args, b.args) || !equal(a.expr, b.expr))
    return false;
  if (a.stmts.size() != b.stmts.size())
    return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!equal(a.stmts[i], b.stmts[i]))
      return false;
  return equal(a.then_branch, b.then_branch) &&
         equal(a.else_branch, b.else_branch) && equal(a.body, b.body) &&
         equal_exprs(a.invariants, b.invariants) && equal(a.variant, b.variant);
}

bool equal(const StmtPtr &a, const StmtPtr &b) {
  if (a == b)
    return true;
  if (!a || !b)
    return false;
  return *a == *b;
}

namespace mk {

namespace {
std::shared_ptr<Stmt> snode(StmtKind k) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  return s;
}
} // namespace

StmtPtr skip() { return snode(StmtKind::Skip); }

StmtPtr decl(std::string name, ExprPtr init, Type t) {
  auto s = snode(StmtKind::Decl);
  s->name = std::move(name);
  s->expr = std::move(init);
  s->type = t;
  return s;
}

StmtPtr assign(std::string target, ExprPtr rhs) {
  auto s = snode(StmtKind::Assign);
  s->name = std::move(target);
  s->expr = std::move(rhs);
  return s;
}

StmtPtr assign_deref(std::string ptr, ExprPtr rhs) {
  auto s = snode(StmtKind::Assign);
  s->name = std::move(ptr);
  s->deref_target = true;
  s->expr = std::move(rhs);
  return s;
}

StmtPtr call(std::string lhs, std::string callee, std::vector<ExprPtr> args) {
  auto s = snode(StmtKind::Call);
  s->name = std::move(lhs);
  s->callee = std::move(callee);
  s->args = std::move(args);
  return s;
}

StmtPtr if_(ExprPtr c, StmtPtr t, StmtPtr e) {
  auto s = snode(StmtKind::If);
  s->expr = std::move(c);
  s->then_branch = std::move(t);
  s->else_branch = std::move(e);
  return s;
}

StmtPtr while_(ExprPtr c, StmtPtr body, std::vector<ExprPtr> inv,
               ExprPtr variant) {
  auto s = snode(StmtKind::While);
  s->expr = std::move(c);
  s->body = std::move(body);
  s->invariants = std::move(inv);
  s->variant = std::move(variant);
  return s;
}

StmtPtr block(std::vector<StmtPtr> stmts) {
  auto s = snode(StmtKind::Block);
  s->stmts = std::move(stmts);
  return s;
}

StmtPtr ret(ExprPtr e) {
  auto s = snode(StmtKind::Return);
  s->expr = std::move(e);
  return s;
}

StmtPtr assert_(std::string label, ExprPtr pred) {
  auto s = snode(StmtKind::Assert);
  s->name = std::move(label);
  s->expr = std::move(pred);
  return s;
}

} // namespace mk

// ---------------------------------------------------------------------------

std::string Loc::str() const {
  switch (kind) {
  case Kind::Global:
  case Kind::Formal:
    return name;
  case Kind::Deref:
    return "*" + name;
  case Kind::Result:
    return "\\result";
  case Kind::Nothing:
    return "\\nothing";
  }
  return "?";
}

const CallSpec *RelationalClause::find_call(const std::string &id) const {
  for (const auto &c : callset)
    if (c.call_id == id)
      return &c;
  return nullptr;
}

bool operator==(const CallSpec &a, const CallSpec &b) {
  return a.inlining == b.inlining && a.callee == b.callee &&
         a.call_id == b.call_id && equal_exprs(a.args, b.args);
}

bool operator==(const RelationalClause &a, const RelationalClause &b) {
  return a.name == b.name && a.binders == b.binders && a.callset == b.callset &&
         equal(a.pred, b.pred);
}

bool operator==(const Behavior &a, const Behavior &b) {
  return a.name == b.name && equal_exprs(a.ensures, b.ensures);
}

bool operator==(const Contract &a, const Contract &b) {
  return equal_exprs(a.requires_, b.requires_) &&
         equal_exprs(a.ensures, b.ensures) && a.assigns == b.assigns &&
         a.relational == b.relational && a.behaviors == b.behaviors;
}

const Binder *FunctionDef::find_formal(const std::string &n) const {
  for (const auto &f : formals)
    if (f.name == n)
      return &f;
  return nullptr;
}

bool operator==(const FunctionDef &a, const FunctionDef &b) {
  return a.name == b.name && a.ret == b.ret && a.formals == b.formals &&
         equal(a.body, b.body) && a.contract == b.contract;
}

bool operator==(const GlobalDecl &a, const GlobalDecl &b) {
  return a.name == b.name && a.type == b.type && equal(a.init, b.init);
}

bool operator==(const LogicDecl &a, const LogicDecl &b) {
  return a.name == b.name && a.labels == b.labels && a.params == b.params &&
         a.result == b.result && equal_exprs(a.reads, b.reads);
}

bool operator==(const Lemma &a, const Lemma &b) {
  return a.name == b.name && a.labels == b.labels && equal(a.body, b.body);
}

bool operator==(const Axiomatic &a, const Axiomatic &b) {
  return a.name == b.name && a.decls == b.decls && a.lemmas == b.lemmas;
}

std::vector<const GlobalDecl *> Program::globals() const {
  std::vector<const GlobalDecl *> out;
  for (const auto &d : decls)
    if (auto *g = std::get_if<GlobalDecl>(&d))
      out.push_back(g);
  return out;
}

std::vector<const FunctionDef *> Program::functions() const {
  std::vector<const FunctionDef *> out;
  for (const auto &d : decls)
    if (auto *f = std::get_if<FunctionDef>(&d))
      out.push_back(f);
  return out;
}

std::vector<const Axiomatic *> Program::axiomatics() const {
  std::vector<const Axiomatic *> out;
  for (const auto &d : decls)
    if (auto *a = std::get_if<Axiomatic>(&d))
      out.push_back(a);
  return out;
}

const FunctionDef *Program::find_function(const std::string &name) const {
  for (const auto &d : decls)
    if (auto *f = std::get_if<FunctionDef>(&d); f && f->name == name)
      return f;
  return nullptr;
}

const GlobalDecl *Program::find_global(const std::string &name) const {
  for (const auto &d : decls)
    if (auto *g = std::get_if<GlobalDecl>(&d); g && g->name == name)
      return g;
  return nullptr;
}

const LogicDecl *Program::find_logic(const std::string &name) const {
  for (const auto &d : decls)
    if (auto *a = std::get_if<Axiomatic>(&d))
      for (const auto &l : a->decls)
        if (l.name == name)
          return &l;
  return nullptr;
}

const Lemma *Program::find_lemma(const std::string &name) const {
  for (const auto &d : decls)
    if (auto *a = std::get_if<Axiomatic>(&d))
      for (const auto &l : a->lemmas)
        if (l.name == name)
          return &l;
  return nullptr;
}

void visit(const StmtPtr &s, const std::function<void(const Stmt &)> &f) {
  if (!s)
    return;
  f(*s);
  for (const auto &c : s->stmts)
    visit(c, f);
  visit(s->then_branch, f);
  visit(s->else_branch, f);
  visit(s->body, f);
}

void visit_exprs(const StmtPtr &s,
                 const std::function<void(const ExprPtr &)> &f) {
  visit(s, [&](const Stmt &st) {
    if (st.expr)
      f(st.expr);
    for (const auto &a : st.args)
      f(a);
    for (const auto &i : st.invariants)
      f(i);
    if (st.variant)
      f(st.variant);
  });
}

bool contains_return(const StmtPtr &s) {
  bool found = false;
  visit(s, [&](const Stmt &st) { found |= st.kind == StmtKind::Return; });
  return found;
}

} // namespace relprop
