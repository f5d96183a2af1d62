#include "relprop/vcgen.hpp"

#include "relprop/validate.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <regex>
#include <sstream>

namespace relprop {

const char *to_string(Status s) {
  switch (s) {
  case Status::Valid:
    return "Valid";
  case Status::Counterexample:
    return "Counterexample";
  case Status::Unknown:
    return "Unknown";
  }
  return "?";
}

namespace {

const std::string kResult = "\\result";

bool is_link_behavior(const Behavior &b) { return b.name.rfind("Relational_behavior_", 0) == 0; }

FormulaPtr to_bool(FormulaPtr f) {
  if (is_bool_sorted(*f))
    return f;
  return fm::bin(FKind::Ne, f, fm::int_(0));
}

FormulaPtr to_int(FormulaPtr f) {
  if (!is_bool_sorted(*f))
    return f;
  return fm::ite(f, fm::int_(1), fm::int_(0));
}

FKind binop_kind(BinOp op) {
  switch (op) {
  case BinOp::Add: return FKind::Add;
  case BinOp::Sub: return FKind::Sub;
  case BinOp::Mul: return FKind::Mul;
  case BinOp::Div: return FKind::Div;
  case BinOp::Eq: return FKind::Eq;
  case BinOp::Ne: return FKind::Ne;
  case BinOp::Lt: return FKind::Lt;
  case BinOp::Le: return FKind::Le;
  case BinOp::Gt: return FKind::Gt;
  case BinOp::Ge: return FKind::Ge;
  case BinOp::And: return FKind::And;
  case BinOp::Or: return FKind::Or;
  case BinOp::Implies: return FKind::Implies;
  }
  return FKind::Add;
}

struct Translator {
  const Program &prog;
  const FunctionDef *fn = nullptr;
  bool formals_pre = false;  // formals denote pre-state values (postconditions)
  bool pre = false;          // inside \at(., Pre) or \old
  std::string label;         // inside \at(., L) for a non built-in label L

  Translator(const Program &p, const FunctionDef *f = nullptr, bool fpre = false)
      : prog(p), fn(f), formals_pre(fpre) {}

  FormulaPtr state_var(const std::string &name) const {
    if (pre)
      return fm::var(name, true);
    if (!label.empty())
      return fm::var(name + "@" + label);
    return fm::var(name);
  }

  FormulaPtr operator()(const ExprPtr &e) const {
    switch (e->kind) {
    case ExprKind::IntLit:
      return fm::int_(e->value);
    case ExprKind::BoolLit:
      return fm::bool_(e->value != 0);
    case ExprKind::FloatLit:
      throw Error("floating-point literal in a formula", e->span);
    case ExprKind::Var: {
      bool formal = fn && fn->find_formal(e->text);
      if (formal && formals_pre)
        return fm::var(e->text, true);
      return state_var(e->text);
    }
    case ExprKind::Deref:
      return state_var("*" + e->text);
    case ExprKind::Result:
      return fm::var(kResult);
    case ExprKind::Unary:
      if (e->unop == UnOp::Neg)
        return fm::neg(to_int((*this)(e->args[0])));
      return fm::not_(to_bool((*this)(e->args[0])));
    case ExprKind::Binary: {
      FKind k = binop_kind(e->binop);
      auto a = (*this)(e->args[0]);
      auto b = (*this)(e->args[1]);
      if (k == FKind::And || k == FKind::Or || k == FKind::Implies)
        return fm::bin(k, to_bool(a), to_bool(b));
      return fm::bin(k, to_int(a), to_int(b));
    }
    case ExprKind::Ite: {
      auto c = to_bool((*this)(e->args[0]));
      auto a = (*this)(e->args[1]);
      auto b = (*this)(e->args[2]);
      if (is_bool_sorted(*a) && is_bool_sorted(*b))
        return fm::and_(fm::implies(c, a), fm::implies(fm::not_(c), b));
      return fm::ite(c, to_int(a), to_int(b));
    }
    case ExprKind::At: {
      Translator inner = *this;
      const std::string &l = e->text;
      if (l == "Pre" || l == "Old") {
        inner.pre = true;
        inner.label.clear();
      } else if (l == "Here" || l == "Post") {
        // current state
      } else {
        inner.pre = false;
        inner.label = l;
      }
      return inner(e->args[0]);
    }
    case ExprKind::CallResult:
    case ExprKind::CallPure:
      throw Error("relational construct outside a relational clause", e->span);
    case ExprKind::App:
      return app(e);
    case ExprKind::Quant: {
      Translator inner = *this;
      std::vector<std::string> ints;
      std::vector<std::string> ptrs;
      for (const auto &b : e->binders)
        (b.type == Type::IntPtr ? ptrs : ints).push_back(b.name);
      auto body = to_bool(inner(e->args[0]));
      // Cells of quantified pointers become quantified integers.
      for (const auto &v : free_vars(body))
        for (const auto &p : ptrs)
          if (v == "*" + p || v.rfind("*" + p + "@", 0) == 0)
            ints.push_back(v);
      return fm::quant(e->quant == Quantifier::Forall ? FKind::Forall : FKind::Exists, ints,
                       body);
    }
    case ExprKind::Separated:
      return fm::bool_(e->args[0]->text != e->args[1]->text);
    }
    return fm::truth();
  }

  FormulaPtr app(const ExprPtr &e) const {
    const LogicDecl *d = prog.find_logic(e->text);
    if (!d)
      throw Error("unknown logic symbol '" + e->text + "'", e->span);
    std::vector<FormulaPtr> args;
    std::map<std::string, std::string> ptr_arg;
    for (std::size_t i = 0; i < d->params.size() && i < e->args.size(); ++i) {
      if (d->params[i].type == Type::IntPtr)
        ptr_arg[d->params[i].name] = e->args[i]->text;
      else
        args.push_back(to_int((*this)(e->args[i])));
    }
    if (!d->labels.empty()) {
      std::map<std::string, std::string> lab;
      for (std::size_t i = 0; i < d->labels.size() && i < e->labels.size(); ++i)
        lab[d->labels[i]] = e->labels[i];
      for (const auto &r : d->reads) {
        ExprPtr inst = rewrite(r, [&](const ExprPtr &x) -> ExprPtr {
          if (x->kind == ExprKind::Deref)
            if (auto it = ptr_arg.find(x->text); it != ptr_arg.end())
              return mk::deref(it->second);
          if (x->kind == ExprKind::At)
            if (auto it = lab.find(x->text); it != lab.end()) {
              ExprPtr inner = rewrite(x->args[0], [&](const ExprPtr &y) -> ExprPtr {
                if (y->kind == ExprKind::Deref)
                  if (auto p = ptr_arg.find(y->text); p != ptr_arg.end())
                    return mk::deref(p->second);
                return nullptr;
              });
              return mk::at(inner, it->second);
            }
          return nullptr;
        });
        Translator plain = *this;
        plain.pre = false;
        plain.label.clear();
        args.push_back(to_int(plain(inst)));
      }
    }
    return fm::app(e->text, std::move(args), d->is_predicate());
  }
};

// Maps each variable occurrence (pre or current) through `f`; a null result
// keeps the variable. Bound variables are left alone.
FormulaPtr map_vars(const FormulaPtr &f,
                    const std::function<FormulaPtr(const Formula &)> &g,
                    std::set<std::string> bound = {}) {
  switch (f->kind) {
  case FKind::Int:
  case FKind::Bool:
    return f;
  case FKind::Var: {
    if (!f->pre && bound.count(f->name))
      return f;
    auto r = g(*f);
    return r ? r : f;
  }
  case FKind::Forall:
  case FKind::Exists: {
    auto inner = bound;
    inner.insert(f->binders.begin(), f->binders.end());
    return fm::quant(f->kind, f->binders, map_vars(f->args[0], g, inner));
  }
  default: {
    std::vector<FormulaPtr> args;
    for (const auto &a : f->args)
      args.push_back(map_vars(a, g, bound));
    switch (f->kind) {
    case FKind::Neg:
      return fm::neg(args[0]);
    case FKind::Not:
      return fm::not_(args[0]);
    case FKind::Ite:
      return fm::ite(args[0], args[1], args[2]);
    case FKind::App:
      return fm::app(f->name, std::move(args), f->predicate);
    default:
      return fm::bin(f->kind, args[0], args[1]);
    }
  }
  }
}

// Obligation identifiers, assigned in pre-order over a function body.
struct ObligationIds {
  std::map<const Stmt *, std::string> ids;
  std::map<const Stmt *, SourceSpan> spans;

  explicit ObligationIds(const FunctionDef &fn) {
    int asserts = 0, loops = 0, calls = 0;
    visit(fn.body, [&](const Stmt &s) {
      switch (s.kind) {
      case StmtKind::Assert:
        ++asserts;
        ids[&s] = s.name.empty() ? "assert_" + std::to_string(asserts) : s.name;
        spans[&s] = s.expr ? s.expr->span : s.span;
        break;
      case StmtKind::While:
        ids[&s] = "loop_" + std::to_string(++loops);
        spans[&s] = s.span;
        break;
      case StmtKind::Call:
        ids[&s] = "call_" + std::to_string(++calls) + "_pre";
        spans[&s] = s.span;
        break;
      default:
        break;
      }
    });
  }
};

class Wp {
public:
  Wp(const Program &prog, const FunctionDef *fn, std::optional<std::string> target,
     const ObligationIds *ids)
      : prog_(prog), fn_(fn), target_(std::move(target)), ids_(ids) {}

  FormulaPtr ret_post = fm::truth();

  FormulaPtr run(const StmtPtr &s, FormulaPtr q) {
    if (!s)
      return q;
    switch (s->kind) {
    case StmtKind::Skip:
      return q;
    case StmtKind::Decl:
      return substitute(q, {{s->name, s->expr ? code(s->expr) : fresh(s->name)}});
    case StmtKind::Assign: {
      std::string target = s->deref_target ? "*" + s->name : s->name;
      return substitute(q, {{target, to_int(code(s->expr))}});
    }
    case StmtKind::Call:
      return call(*s, q);
    case StmtKind::If: {
      auto c = to_bool(code(s->expr));
      auto t = run(s->then_branch, q);
      auto e = s->else_branch ? run(s->else_branch, q) : q;
      return fm::and_(fm::implies(c, t), fm::implies(fm::not_(c), e));
    }
    case StmtKind::While:
      return loop(*s, q);
    case StmtKind::Block: {
      for (auto it = s->stmts.rbegin(); it != s->stmts.rend(); ++it)
        q = run(*it, q);
      return q;
    }
    case StmtKind::Return: {
      if (!s->expr)
        return ret_post;
      return substitute(ret_post, {{kResult, to_int(code(s->expr))}});
    }
    case StmtKind::Assert: {
      auto p = to_bool(annot(s->expr));
      return obligation(id(*s), p, q);
    }
    }
    return q;
  }

  int fresh_count = 0;

private:
  const Program &prog_;
  const FunctionDef *fn_;
  std::optional<std::string> target_;
  const ObligationIds *ids_;

  std::string id(const Stmt &s) const {
    if (!ids_)
      return "";
    auto it = ids_->ids.find(&s);
    return it == ids_->ids.end() ? "" : it->second;
  }

  bool is_target(const std::string &id) const { return !target_ || *target_ == id; }

  FormulaPtr obligation(const std::string &id, const FormulaPtr &p, const FormulaPtr &q) {
    if (is_target(id))
      return fm::and_(p, q);
    return fm::implies(p, q);
  }

  FormulaPtr fresh(const std::string &base) {
    return fm::var(base + "#" + std::to_string(++fresh_count));
  }

  FormulaPtr code(const ExprPtr &e) const { return Translator{prog_, fn_}(e); }
  FormulaPtr annot(const ExprPtr &e) const { return Translator{prog_, fn_}(e); }

  std::set<std::string> modified(const StmtPtr &body) const {
    std::set<std::string> out;
    visit(body, [&](const Stmt &s) {
      if (s.kind == StmtKind::Decl)
        out.insert(s.name);
      if (s.kind == StmtKind::Assign)
        out.insert(s.deref_target ? "*" + s.name : s.name);
      if (s.kind == StmtKind::Call) {
        if (!s.name.empty())
          out.insert(s.name);
        if (const FunctionDef *g = prog_.find_function(s.callee))
          for (const auto &w : written(*g, s))
            out.insert(w);
      }
    });
    return out;
  }

  std::vector<std::string> written(const FunctionDef &g, const Stmt &call) const {
    std::vector<std::string> out;
    std::map<std::string, std::string> ptr;
    for (std::size_t i = 0; i < g.formals.size() && i < call.args.size(); ++i)
      if (g.formals[i].type == Type::IntPtr)
        ptr[g.formals[i].name] = call.args[i]->text;
    for (const auto &l : footprint_of(g, prog_).writes) {
      if (l.kind == Loc::Kind::Global)
        out.push_back(l.name);
      else if (l.kind == Loc::Kind::Deref && ptr.count(l.name))
        out.push_back("*" + ptr.at(l.name));
    }
    return out;
  }

  FormulaPtr loop(const Stmt &s, const FormulaPtr &q) {
    if (s.invariants.empty())
      throw MissingLoopInvariant("loop without invariant", s.span);
    std::vector<FormulaPtr> parts;
    for (const auto &i : s.invariants)
      parts.push_back(to_bool(annot(i)));
    FormulaPtr inv = fm::and_(parts);
    auto c = to_bool(code(s.expr));
    std::string lid = id(s);
    bool mine = is_target(lid);

    std::map<std::string, FormulaPtr> havoc;
    for (const auto &m : modified(s.body))
      havoc[m] = fresh(m);
    FormulaPtr body_post = mine ? inv : fm::truth();
    FormulaPtr preserve = fm::implies(fm::and_(inv, c), run(s.body, body_post));
    FormulaPtr exit = fm::implies(fm::and_(inv, fm::not_(c)), q);
    FormulaPtr after = substitute(fm::and_(preserve, exit), havoc);
    return mine ? fm::and_(inv, after) : after;
  }

  FormulaPtr call(const Stmt &s, const FormulaPtr &q) {
    const FunctionDef *g = prog_.find_function(s.callee);
    if (!g)
      throw Error("call to unknown function '" + s.callee + "'", s.span);
    std::map<std::string, FormulaPtr> actual;
    std::map<std::string, std::string> ptr;
    for (std::size_t i = 0; i < g->formals.size() && i < s.args.size(); ++i) {
      if (g->formals[i].type == Type::IntPtr)
        ptr[g->formals[i].name] = s.args[i]->text;
      else
        actual[g->formals[i].name] = to_int(code(s.args[i]));
    }
    auto cell = [&](const std::string &name) -> std::string {
      if (name.size() > 1 && name[0] == '*')
        if (auto it = ptr.find(name.substr(1)); it != ptr.end())
          return "*" + it->second;
      return name;
    };

    // Precondition, evaluated in the state before the call.
    Translator tr{prog_, g};
    std::vector<FormulaPtr> reqs;
    for (const auto &r : g->contract.requires_)
      reqs.push_back(to_bool(tr(r)));
    FormulaPtr pre = map_vars(fm::and_(reqs), [&](const Formula &v) -> FormulaPtr {
      if (auto it = actual.find(v.name); it != actual.end())
        return it->second;
      return fm::var(cell(v.name));
    });

    std::map<std::string, FormulaPtr> post_state;
    std::optional<FormulaPtr> res;
    if (g->ret == Type::Int)
      res = fresh(s.name.empty() ? "result" : s.name);
    for (const auto &w : written(*g, s))
      post_state[w] = fresh(w);

    Translator post_tr{prog_, g, true};
    std::vector<FormulaPtr> ens;
    for (const auto &e : g->contract.ensures)
      ens.push_back(to_bool(post_tr(e)));
    for (const auto &b : g->contract.behaviors)
      for (const auto &e : b.ensures)
        ens.push_back(to_bool(post_tr(e)));
    FormulaPtr effect = map_vars(fm::and_(ens), [&](const Formula &v) -> FormulaPtr {
      if (v.pre) {
        if (auto it = actual.find(v.name); it != actual.end())
          return it->second;
        return fm::var(cell(v.name));
      }
      if (v.name == kResult)
        return res ? *res : fm::int_(0);
      std::string c = cell(v.name);
      if (auto it = post_state.find(c); it != post_state.end())
        return it->second;
      return fm::var(c);
    });

    std::map<std::string, FormulaPtr> after = post_state;
    if (!s.name.empty() && res)
      after[s.name] = *res;
    FormulaPtr rest = fm::implies(effect, substitute(q, after));
    return obligation(id(s), pre, rest);
  }
};

// Peels top-level antecedents of the goal into named hypotheses.
void peel(VerificationCondition &vc) {
  int n = 0;
  while (vc.goal->kind == FKind::Implies) {
    vc.hypotheses.push_back({"assume_" + std::to_string(++n), vc.goal->args[0]});
    vc.goal = vc.goal->args[1];
  }
}

struct Environment {
  std::vector<Hypothesis> links;
  std::vector<std::pair<std::string, Hypothesis>> lemmas;  // lemma name -> formula
};

FormulaPtr close_over(const FormulaPtr &f) {
  auto fv = free_vars(f);
  return fm::quant(FKind::Forall, std::vector<std::string>(fv.begin(), fv.end()), f);
}

FormulaPtr lemma_formula(const Lemma &l, const Program &prog) {
  return close_over(to_bool(Translator{prog, nullptr}(l.body)));
}

Environment environment(const Program &prog) {
  Environment env;
  for (const auto *g : prog.functions()) {
    for (const auto &b : g->contract.behaviors) {
      if (!is_link_behavior(b) || b.ensures.size() != 1)
        continue;
      const auto &link = b.ensures[0];
      if (link->kind != ExprKind::Binary || link->binop != BinOp::Eq ||
          link->args[0]->kind != ExprKind::Result || link->args[1]->kind != ExprKind::App)
        continue;
      const LogicDecl *d = prog.find_logic(link->args[1]->text);
      if (!d || d->is_predicate())
        continue;
      std::vector<FormulaPtr> fargs;
      std::vector<std::string> binders;
      for (const auto &f : g->formals)
        if (f.type == Type::Int) {
          fargs.push_back(fm::var(f.name));
          binders.push_back(f.name);
        }
      FormulaPtr img = fm::app(d->name, fargs, false);
      Translator tr{prog, g};
      Translator post{prog, g, true};
      std::vector<FormulaPtr> reqs, ens;
      for (const auto &r : g->contract.requires_)
        reqs.push_back(to_bool(tr(r)));
      for (const auto &e : g->contract.ensures)
        ens.push_back(to_bool(post(e)));
      FormulaPtr body = fm::implies(fm::and_(reqs), fm::and_(ens));
      body = strip_pre(substitute(body, {{kResult, img}}));
      env.links.push_back({d->name + "_link", fm::quant(FKind::Forall, binders, body)});
    }
  }
  for (const auto *a : prog.axiomatics())
    for (const auto &l : a->lemmas)
      env.lemmas.push_back({l.name, {l.name, lemma_formula(l, prog)}});
  return env;
}

std::vector<VerificationCondition> function_vcs(const TransformedProgram &tp,
                                                const FunctionDef &fn,
                                                const Environment &env,
                                                const std::set<std::string> &admitted) {
  std::vector<VerificationCondition> out;
  if (!fn.body)
    return out;
  const Program &prog = tp.program;
  const WrapperInfo *w = tp.wrapper_for_function(fn.name);
  ObligationIds ids(fn);

  std::vector<Hypothesis> base;
  int i = 0;
  for (const auto &r : fn.contract.requires_)
    base.push_back({"requires_" + std::to_string(++i),
                    strip_pre(to_bool(Translator{prog, &fn}(r)))});
  for (const auto &l : env.links)
    base.push_back(l);
  for (const auto &[name, h] : env.lemmas) {
    bool generated = tp.wrapper_for_lemma(name) != nullptr;
    if (generated && !admitted.count(name))
      continue;
    if (w && w->lemma == name)
      continue;
    base.push_back(h);
  }

  auto make = [&](const std::string &assertion, const std::string &kind, FormulaPtr ret_post,
                  SourceSpan span) {
    Wp wp(prog, &fn, assertion, &ids);
    wp.ret_post = ret_post;
    VerificationCondition vc;
    vc.name = fn.name + "__" + assertion;
    vc.goal = strip_pre(wp.run(fn.body, ret_post));
    vc.hypotheses = base;
    vc.provenance = {fn.name, assertion, kind, w ? w->clause : "", span};
    peel(vc);
    out.push_back(std::move(vc));
  };

  std::vector<std::pair<const Stmt *, std::string>> order;
  visit(fn.body, [&](const Stmt &s) {
    auto it = ids.ids.find(&s);
    if (it == ids.ids.end())
      return;
    if (s.kind == StmtKind::Call) {
      const FunctionDef *g = prog.find_function(s.callee);
      if (!g || g->contract.requires_.empty())
        return;
    }
    order.emplace_back(&s, it->second);
  });
  for (const auto &[s, id] : order) {
    std::string kind = s->kind == StmtKind::Assert ? "assert"
                       : s->kind == StmtKind::While ? "loop"
                                                    : "call_pre";
    make(id, kind, fm::truth(), ids.spans.at(s));
  }
  int e = 0;
  Translator post{prog, &fn, true};
  for (const auto &en : fn.contract.ensures)
    make("ensures_" + std::to_string(++e), "ensures", to_bool(post(en)), en->span);
  for (const auto &b : fn.contract.behaviors) {
    if (is_link_behavior(b))
      continue;
    for (const auto &en : b.ensures)
      make("ensures_" + std::to_string(++e), "ensures", to_bool(post(en)), en->span);
  }
  return out;
}

std::vector<VerificationCondition> lemma_vcs(const TransformedProgram &tp,
                                             const Environment &env) {
  std::vector<VerificationCondition> out;
  for (const auto *a : tp.program.axiomatics())
    for (const auto &l : a->lemmas) {
      const WrapperInfo *w = tp.wrapper_for_lemma(l.name);
      if (!w)
        continue;
      VerificationCondition vc;
      vc.name = a->name + "__" + l.name;
      vc.goal = lemma_formula(l, tp.program);
      vc.hypotheses = env.links;
      vc.provenance = {a->name, l.name, "lemma", w->clause, a->span};
      out.push_back(std::move(vc));
    }
  return out;
}

} // namespace

FormulaPtr to_formula(const ExprPtr &e, const Program &program, const FunctionDef *fn) {
  return Translator{program, fn}(e);
}

FormulaPtr wp(const StmtPtr &stmt, const FormulaPtr &post, const Program &program,
              const FunctionDef *fn) {
  Wp w(program, fn, std::nullopt, nullptr);
  w.ret_post = post;
  return w.run(stmt, post);
}

std::vector<VerificationCondition> vcs_for(const TransformedProgram &tp,
                                           const std::set<std::string> &admitted) {
  auto env = environment(tp.program);
  std::vector<VerificationCondition> out;
  for (const auto *f : tp.program.functions()) {
    auto part = function_vcs(tp, *f, env, admitted);
    out.insert(out.end(), part.begin(), part.end());
  }
  auto lv = lemma_vcs(tp, env);
  out.insert(out.end(), lv.begin(), lv.end());
  return out;
}

// ---------------------------------------------------------------------------
// SMT-LIB

namespace {

std::string smt_symbol(const std::string &name) {
  static const std::set<std::string> reserved = {
      "abs", "and", "assert", "bool", "distinct", "div", "exists", "false", "forall",
      "ite", "let", "mod", "not", "or", "par", "true", "xor", "Int", "Bool", "_"};
  static const std::regex simple("[A-Za-z_][A-Za-z0-9_]*");
  if (std::regex_match(name, simple))
    return reserved.count(name) ? name + "!" : name;
  std::string q;
  for (char c : name)
    q += (c == '\\' || c == '|') ? '$' : c;
  return "|" + q + "|";
}

void smt(std::ostream &os, const FormulaPtr &f) {
  auto bin = [&](const char *op) {
    os << "(" << op << " ";
    smt(os, f->args[0]);
    os << " ";
    smt(os, f->args[1]);
    os << ")";
  };
  switch (f->kind) {
  case FKind::Int:
    if (f->value < 0)
      os << "(- " << (f->value == INT64_MIN ? std::string("9223372036854775808")
                                            : std::to_string(-f->value))
         << ")";
    else
      os << f->value;
    return;
  case FKind::Bool:
    os << (f->value ? "true" : "false");
    return;
  case FKind::Var:
    os << smt_symbol(f->pre ? f->name + "@Pre" : f->name);
    return;
  case FKind::Neg:
    os << "(- ";
    smt(os, f->args[0]);
    os << ")";
    return;
  case FKind::Add: return bin("+");
  case FKind::Sub: return bin("-");
  case FKind::Mul: return bin("*");
  case FKind::Div: {
    std::ostringstream a, b;
    smt(a, f->args[0]);
    smt(b, f->args[1]);
    os << "(ite (>= " << a.str() << " 0) (div " << a.str() << " " << b.str()
       << ") (- (div (- " << a.str() << ") " << b.str() << ")))";
    return;
  }
  case FKind::Eq: return bin("=");
  case FKind::Ne: return bin("distinct");
  case FKind::Lt: return bin("<");
  case FKind::Le: return bin("<=");
  case FKind::Gt: return bin(">");
  case FKind::Ge: return bin(">=");
  case FKind::And: return bin("and");
  case FKind::Or: return bin("or");
  case FKind::Implies: return bin("=>");
  case FKind::Not:
    os << "(not ";
    smt(os, f->args[0]);
    os << ")";
    return;
  case FKind::Ite:
    os << "(ite ";
    smt(os, f->args[0]);
    os << " ";
    smt(os, f->args[1]);
    os << " ";
    smt(os, f->args[2]);
    os << ")";
    return;
  case FKind::App:
    if (f->args.empty()) {
      os << smt_symbol(f->name);
      return;
    }
    os << "(" << smt_symbol(f->name);
    for (const auto &a : f->args) {
      os << " ";
      smt(os, a);
    }
    os << ")";
    return;
  case FKind::Forall:
  case FKind::Exists:
    os << "(" << (f->kind == FKind::Forall ? "forall" : "exists") << " (";
    for (std::size_t i = 0; i < f->binders.size(); ++i)
      os << (i ? " " : "") << "(" << smt_symbol(f->binders[i]) << " Int)";
    os << ") ";
    smt(os, f->args[0]);
    os << ")";
    return;
  }
}

} // namespace

std::string emit_smtlib(const VerificationCondition &vc) {
  std::set<std::string> vars;
  std::map<std::string, Symbol> syms;
  auto scan = [&](const FormulaPtr &f) {
    for (const auto &v : free_vars(f))
      vars.insert(v);
    collect_symbols(f, syms);
  };
  for (const auto &h : vc.hypotheses)
    scan(h.formula);
  scan(vc.goal);

  std::ostringstream os;
  os << "(set-logic UFNIA)\n";
  os << "; vc " << vc.name << "\n";
  std::set<std::string> decls;
  for (const auto &v : vars)
    decls.insert("(declare-fun " + smt_symbol(v) + " () Int)");
  for (const auto &[name, s] : syms) {
    std::string d = "(declare-fun " + smt_symbol(name) + " (";
    for (std::size_t i = 0; i < s.arity; ++i)
      d += i ? " Int" : "Int";
    d += std::string(") ") + (s.predicate ? "Bool" : "Int") + ")";
    decls.insert(d);
  }
  for (const auto &d : decls)
    os << d << "\n";
  for (const auto &h : vc.hypotheses) {
    os << "; hypothesis " << h.name << "\n(assert ";
    smt(os, h.formula);
    os << ")\n";
  }
  os << "(assert (not ";
  smt(os, vc.goal);
  os << "))\n(check-sat)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Driver

std::vector<VcOutcome> prove(const TransformedProgram &tp, const ProveOptions &opts) {
  auto env = environment(tp.program);
  std::set<std::string> admitted;
  if (opts.assume_lemmas)
    for (const auto &w : tp.wrappers)
      admitted.insert(w.lemma);

  auto check = [&](const VerificationCondition &vc) {
    VcOutcome o;
    o.vc = vc;
    try {
      auto r = check_bounded(vc, opts.bounded);
      o.status = r.status;
      o.assignment = r.assignment;
      o.note = r.reason;
    } catch (const BudgetExceeded &e) {
      o.status = Status::Unknown;
      o.note = e.what();
    }
    return o;
  };

  std::vector<VcOutcome> out;
  std::map<std::string, bool> wrapper_valid;
  for (const auto &w : tp.wrappers) {
    const FunctionDef *fn = tp.program.find_function(w.function);
    bool all = true;
    for (const auto &vc : function_vcs(tp, *fn, env, admitted)) {
      out.push_back(check(vc));
      all &= out.back().status == Status::Valid;
    }
    wrapper_valid[w.lemma] = all;
    if (all)
      admitted.insert(w.lemma);
  }
  for (const auto *f : tp.program.functions()) {
    if (tp.wrapper_for_function(f->name))
      continue;
    for (const auto &vc : function_vcs(tp, *f, env, admitted))
      out.push_back(check(vc));
  }
  for (const auto &vc : lemma_vcs(tp, env)) {
    if (wrapper_valid[vc.provenance.assertion]) {
      VcOutcome o;
      o.vc = vc;
      o.status = Status::Valid;
      o.note = "follows from the wrapper assertion";
      out.push_back(std::move(o));
    } else {
      out.push_back(check(vc));
    }
  }
  return out;
}

} // namespace relprop
