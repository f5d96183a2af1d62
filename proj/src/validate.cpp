#include "relprop/validate.hpp"

#include <map>
#include <sstream>

namespace relprop {

namespace {

bool is_call_label(const std::string &l, std::string *id = nullptr, bool *pre = nullptr) {
  auto take = [&](const char *prefix, bool p) {
    std::string s(prefix);
    if (l.size() > s.size() && l.compare(0, s.size(), s) == 0) {
      if (id)
        *id = l.substr(s.size());
      if (pre)
        *pre = p;
      return true;
    }
    return false;
  };
  return take("Pre_", true) || take("Post_", false);
}

std::set<std::string> local_names(const FunctionDef &fn) {
  std::set<std::string> out;
  visit(fn.body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Decl)
      out.insert(s.name);
  });
  return out;
}

void walk_accesses(const ExprPtr &e, const FunctionDef &fn,
                   const std::set<std::string> &locals, const Program &prog,
                   std::set<Loc> &reads) {
  visit(e, [&](const Expr &x) {
    if (x.kind == ExprKind::Var && !locals.count(x.text) && !fn.find_formal(x.text) &&
        prog.find_global(x.text))
      reads.insert(Loc::global(x.text));
    if (x.kind == ExprKind::Deref && fn.find_formal(x.text))
      reads.insert(Loc::deref(x.text));
  });
}

void footprint_rec(const FunctionDef &fn, const Program &prog,
                   std::set<std::string> &active, MemFootprint &out,
                   const std::map<std::string, std::string> &ptr_map) {
  auto map_loc = [&](const Loc &l) -> std::optional<Loc> {
    if (l.kind == Loc::Kind::Global)
      return l;
    if (l.kind == Loc::Kind::Deref) {
      auto it = ptr_map.find(l.name);
      if (it == ptr_map.end())
        return std::nullopt;
      return Loc::deref(it->second);
    }
    return std::nullopt;
  };
  for (const auto &a : fn.contract.assigns) {
    if (a.written.is_state())
      if (auto l = map_loc(a.written))
        out.writes.insert(*l);
    for (const auto &f : a.from)
      if (f.is_state())
        if (auto l = map_loc(f))
          out.reads.insert(*l);
  }
  if (!fn.body || active.count(fn.name))
    return;
  active.insert(fn.name);
  visit(fn.body, [&](const Stmt &s) {
    if (s.kind != StmtKind::Call)
      return;
    const FunctionDef *callee = prog.find_function(s.callee);
    if (!callee)
      return;
    std::map<std::string, std::string> sub;
    for (std::size_t i = 0; i < callee->formals.size() && i < s.args.size(); ++i) {
      if (callee->formals[i].type != Type::IntPtr || s.args[i]->kind != ExprKind::Var)
        continue;
      auto it = ptr_map.find(s.args[i]->text);
      if (it != ptr_map.end())
        sub[callee->formals[i].name] = it->second;
    }
    footprint_rec(*callee, prog, active, out, sub);
  });
  active.erase(fn.name);
}

} // namespace

MemFootprint body_accesses(const FunctionDef &fn, const Program &prog) {
  MemFootprint acc;
  if (!fn.body)
    return acc;
  auto locals = local_names(fn);
  visit(fn.body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Assign || (s.kind == StmtKind::Call && !s.name.empty())) {
      if (s.deref_target) {
        if (fn.find_formal(s.name))
          acc.writes.insert(Loc::deref(s.name));
      } else if (!locals.count(s.name) && !fn.find_formal(s.name) &&
                 prog.find_global(s.name)) {
        acc.writes.insert(Loc::global(s.name));
      }
    }
  });
  visit(fn.body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Assert)
      return;
    if (s.expr)
      walk_accesses(s.expr, fn, locals, prog, acc.reads);
    for (const auto &a : s.args)
      walk_accesses(a, fn, locals, prog, acc.reads);
  });
  return acc;
}

MemFootprint footprint_of(const FunctionDef &fn, const Program &prog) {
  MemFootprint acc = body_accesses(fn, prog);
  bool touches = !acc.writes.empty() || !acc.reads.empty();
  if (touches && fn.contract.assigns.empty())
    throw MissingAssigns("function '" + fn.name +
                             "' accesses global or pointer state but declares no "
                             "assigns clause",
                         fn.span);
  MemFootprint declared;
  for (const auto &a : fn.contract.assigns) {
    if (a.written.is_state())
      declared.writes.insert(a.written);
    for (const auto &f : a.from)
      if (f.is_state())
        declared.reads.insert(f);
  }
  for (const auto &w : acc.writes)
    if (!declared.writes.count(w))
      throw MissingAssigns("function '" + fn.name + "' writes '" + w.str() +
                               "' which no assigns clause declares",
                           fn.span);
  for (const auto &r : acc.reads)
    if (!declared.writes.count(r) && !declared.reads.count(r))
      throw MissingAssigns("function '" + fn.name + "' reads '" + r.str() +
                               "' which no assigns clause covers",
                           fn.span);

  MemFootprint out;
  std::set<std::string> active;
  std::map<std::string, std::string> identity;
  for (const auto &f : fn.formals)
    if (f.type == Type::IntPtr)
      identity[f.name] = f.name;
  footprint_rec(fn, prog, active, out, identity);
  return out;
}

bool is_pure(const FunctionDef &fn, const Program &prog) {
  if (fn.ret != Type::Int)
    return false;
  try {
    auto fp = footprint_of(fn, prog);
    return fp.writes.empty() && fp.reads.empty();
  } catch (const MissingAssigns &) {
    return false;
  }
}

// ---------------------------------------------------------------------------

namespace {

enum class Mode { Code, Annot, Relational, CallArg };

struct Scope {
  std::map<std::string, Type> vars;
  std::set<std::string> labels;
  bool allow_result = false;
  Mode mode = Mode::Annot;
  const RelationalClause *clause = nullptr;
};

class Validator {
public:
  explicit Validator(const Program &p) : prog_(p) {}

  Diagnostics run() {
    check_names();
    std::vector<const FunctionDef *> seen;
    for (const auto &d : prog_.decls) {
      if (auto *g = std::get_if<GlobalDecl>(&d)) {
        if (g->init && g->init->kind != ExprKind::IntLit &&
            !(g->init->kind == ExprKind::Unary && g->init->unop == UnOp::Neg &&
              g->init->args[0]->kind == ExprKind::IntLit))
          error(g->span, "global initializer of '" + g->name +
                             "' must be an integer constant");
        if (g->init && g->init->kind == ExprKind::FloatLit)
          error(g->span, "floating-point literals are not supported");
      } else if (auto *f = std::get_if<FunctionDef>(&d)) {
        seen.push_back(f);
        check_function(*f, seen);
      } else if (auto *a = std::get_if<Axiomatic>(&d)) {
        check_axiomatic(*a);
      }
    }
    return std::move(diags_);
  }

private:
  const Program &prog_;
  Diagnostics diags_;

  void error(const SourceSpan &span, std::string msg) {
    diags_.push_back({Severity::Error, span, std::move(msg)});
  }

  void check_names() {
    std::set<std::string> fns, globals, clauses, logic;
    for (const auto &d : prog_.decls) {
      if (auto *f = std::get_if<FunctionDef>(&d)) {
        if (!fns.insert(f->name).second)
          error(f->span, "duplicate function '" + f->name + "'");
        for (const auto &rc : f->contract.relational)
          if (!clauses.insert(rc.name).second)
            error(rc.span, "duplicate relational clause name '" + rc.name + "'");
      } else if (auto *g = std::get_if<GlobalDecl>(&d)) {
        if (!globals.insert(g->name).second)
          error(g->span, "duplicate global '" + g->name + "'");
      } else if (auto *a = std::get_if<Axiomatic>(&d)) {
        for (const auto &l : a->decls)
          if (!logic.insert(l.name).second)
            error(a->span, "duplicate logic symbol '" + l.name + "'");
        for (const auto &l : a->lemmas)
          if (!logic.insert(l.name).second)
            error(a->span, "duplicate lemma '" + l.name + "'");
      }
    }
    for (const auto &g : globals)
      if (fns.count(g))
        error({}, "global '" + g + "' has the same name as a function");
    for (const auto *f : prog_.functions()) {
      std::set<std::string> names;
      for (const auto &formal : f->formals) {
        if (!names.insert(formal.name).second)
          error(f->span, "duplicate formal '" + formal.name + "' in '" + f->name + "'");
        if (globals.count(formal.name))
          error(f->span, "formal '" + formal.name + "' of '" + f->name +
                             "' collides with a global");
      }
      visit(f->body, [&](const Stmt &s) {
        if (s.kind != StmtKind::Decl)
          return;
        if (!names.insert(s.name).second)
          error(s.span, "duplicate local '" + s.name + "' in '" + f->name + "'");
        if (globals.count(s.name))
          error(s.span, "local '" + s.name + "' of '" + f->name +
                            "' collides with a global");
      });
    }
  }

  Scope code_scope(const FunctionDef &fn) {
    Scope sc;
    sc.mode = Mode::Code;
    for (const auto *g : prog_.globals())
      sc.vars[g->name] = g->type;
    for (const auto &f : fn.formals)
      sc.vars[f.name] = f.type;
    visit(fn.body, [&](const Stmt &s) {
      if (s.kind == StmtKind::Decl)
        sc.vars[s.name] = Type::Int;
    });
    return sc;
  }

  void check_function(const FunctionDef &fn,
                      const std::vector<const FunctionDef *> &visible) {
    Scope code = code_scope(fn);
    Scope annot = code;
    annot.mode = Mode::Annot;

    Scope req = annot;
    req.labels = {"Pre", "Here"};
    for (const auto &r : fn.contract.requires_)
      check_pred(r, req);
    Scope ens = annot;
    ens.labels = {"Pre", "Old", "Post", "Here"};
    ens.allow_result = fn.ret == Type::Int;
    for (const auto &e : fn.contract.ensures)
      check_pred(e, ens);
    for (const auto &b : fn.contract.behaviors)
      for (const auto &e : b.ensures)
        check_pred(e, ens);
    for (const auto &a : fn.contract.assigns)
      check_assigns(fn, a);

    if (fn.body) {
      Scope in_body = annot;
      in_body.labels = {"Pre", "Here", "Old"};
      check_stmt(fn, fn.body, code, in_body);
    }

    for (const auto &rc : fn.contract.relational)
      check_clause(rc, visible);
  }

  void check_assigns(const FunctionDef &fn, const AssignsClause &a) {
    auto check_loc = [&](const Loc &l) {
      switch (l.kind) {
      case Loc::Kind::Global:
        if (!prog_.find_global(l.name))
          error(fn.span, "assigns clause of '" + fn.name + "' names unknown location '" +
                             l.name + "'");
        break;
      case Loc::Kind::Deref: {
        const Binder *b = fn.find_formal(l.name);
        if (!b || b->type != Type::IntPtr)
          error(fn.span, "assigns clause of '" + fn.name + "' dereferences '" + l.name +
                             "', which is not a pointer formal");
        break;
      }
      default:
        break;
      }
    };
    check_loc(a.written);
    if (a.written.kind == Loc::Kind::Formal)
      error(fn.span, "assigns clause of '" + fn.name + "' writes formal '" +
                         a.written.name + "'");
    if (a.written.kind == Loc::Kind::Result && fn.ret != Type::Int)
      error(fn.span, "assigns \\result in function '" + fn.name + "' returning void");
    for (const auto &l : a.from)
      check_loc(l);
  }

  void check_stmt(const FunctionDef &fn, const StmtPtr &s, const Scope &code,
                  const Scope &annot) {
    if (!s)
      return;
    switch (s->kind) {
    case StmtKind::Skip:
      break;
    case StmtKind::Decl:
      if (s->expr)
        check_term(s->expr, code);
      break;
    case StmtKind::Assign: {
      auto it = code.vars.find(s->name);
      if (it == code.vars.end()) {
        error(s->span, "assignment to undeclared variable '" + s->name + "'");
      } else if (s->deref_target) {
        if (it->second != Type::IntPtr || !fn.find_formal(s->name))
          error(s->span, "'" + s->name + "' is not a pointer formal");
      } else if (it->second != Type::Int) {
        error(s->span, "assignment to pointer variable '" + s->name + "'");
      }
      check_term(s->expr, code);
      break;
    }
    case StmtKind::Call:
      check_call(s, code);
      break;
    case StmtKind::If:
      check_pred(s->expr, code);
      check_stmt(fn, s->then_branch, code, annot);
      check_stmt(fn, s->else_branch, code, annot);
      break;
    case StmtKind::While:
      check_pred(s->expr, code);
      for (const auto &i : s->invariants)
        check_pred(i, annot);
      if (s->variant)
        check_term(s->variant, annot);
      check_stmt(fn, s->body, code, annot);
      break;
    case StmtKind::Block:
      for (const auto &c : s->stmts)
        check_stmt(fn, c, code, annot);
      break;
    case StmtKind::Return:
      if (fn.ret == Type::Void && s->expr)
        error(s->span, "void function '" + fn.name + "' returns a value");
      if (fn.ret == Type::Int && !s->expr)
        error(s->span, "function '" + fn.name + "' must return a value");
      if (s->expr)
        check_term(s->expr, code);
      break;
    case StmtKind::Assert:
      check_pred(s->expr, annot);
      break;
    }
  }

  void check_call(const StmtPtr &s, const Scope &code) {
    const FunctionDef *callee = prog_.find_function(s->callee);
    if (!callee) {
      error(s->span, "call to unknown function '" + s->callee + "'");
      return;
    }
    if (!s->name.empty()) {
      auto it = code.vars.find(s->name);
      if (it == code.vars.end() || it->second != Type::Int)
        error(s->span, "call result must be assigned to an int variable");
      if (callee->ret == Type::Void)
        error(s->span, "result of void function '" + callee->name + "' is used");
    }
    if (s->args.size() != callee->formals.size()) {
      error(s->span, "call to '" + callee->name + "' expects " +
                         std::to_string(callee->formals.size()) + " arguments");
      return;
    }
    for (std::size_t i = 0; i < s->args.size(); ++i) {
      if (callee->formals[i].type == Type::IntPtr) {
        const auto &a = s->args[i];
        if (a->kind != ExprKind::Var || !code.vars.count(a->text) ||
            code.vars.at(a->text) != Type::IntPtr)
          error(s->span, "argument " + std::to_string(i + 1) + " of '" + callee->name +
                             "' must be a pointer variable");
      } else {
        check_term(s->args[i], code);
      }
    }
  }

  // An int-valued expression.
  void check_term(const ExprPtr &e, const Scope &sc) { check(e, sc, false); }
  // A boolean-valued expression; in code, int-valued conditions are accepted.
  void check_pred(const ExprPtr &e, const Scope &sc) { check(e, sc, true); }

  void check(const ExprPtr &e, const Scope &sc, bool boolean) {
    (void)boolean;
    switch (e->kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
      return;
    case ExprKind::FloatLit:
      error(e->span, "floating-point literals are not supported");
      return;
    case ExprKind::Var: {
      auto it = sc.vars.find(e->text);
      if (it == sc.vars.end()) {
        if (sc.mode == Mode::Relational && prog_.find_global(e->text))
          error(e->span, "global '" + e->text +
                             "' in a relational predicate must be wrapped in \\at "
                             "with a call label");
        else
          error(e->span, "undeclared variable '" + e->text + "'");
      } else if (it->second == Type::IntPtr) {
        error(e->span, "pointer '" + e->text + "' may only be dereferenced");
      }
      return;
    }
    case ExprKind::Deref: {
      auto it = sc.vars.find(e->text);
      if (it == sc.vars.end() || it->second != Type::IntPtr)
        error(e->span, "'" + e->text + "' is not a pointer variable");
      else if (prog_.find_global(e->text))
        error(e->span, "dereferencing global pointer '" + e->text +
                           "' is not supported");
      return;
    }
    case ExprKind::Result:
      if (!sc.allow_result)
        error(e->span, "\\result is only allowed in ensures of int functions");
      return;
    case ExprKind::Unary:
    case ExprKind::Ite:
      for (const auto &a : e->args)
        check(a, sc, false);
      return;
    case ExprKind::Binary:
      if (sc.mode == Mode::Code && e->binop == BinOp::Implies)
        error(e->span, "'==>' is not a program operator");
      check(e->args[0], sc, false);
      check(e->args[1], sc, false);
      return;
    case ExprKind::At:
      check_at(e, sc);
      return;
    case ExprKind::CallResult: {
      if (sc.mode != Mode::Relational) {
        error(e->span, "\\callresult outside a relational clause");
        return;
      }
      const CallSpec *cs = sc.clause->find_call(e->text);
      if (!cs) {
        error(e->span, "unresolved call-id '" + e->text + "'");
        return;
      }
      const FunctionDef *f = prog_.find_function(cs->callee);
      if (f && f->ret != Type::Int)
        error(e->span, "\\callresult(" + e->text + ") refers to void function '" +
                           cs->callee + "'");
      return;
    }
    case ExprKind::CallPure:
      check_callpure(e, sc);
      return;
    case ExprKind::App:
      check_app(e, sc);
      return;
    case ExprKind::Quant: {
      if (sc.mode == Mode::Code || sc.mode == Mode::CallArg) {
        error(e->span, "quantifier in a program expression");
        return;
      }
      Scope inner = sc;
      for (const auto &b : e->binders)
        inner.vars[b.name] = b.type;
      check(e->args[0], inner, true);
      return;
    }
    case ExprKind::Separated:
      if (sc.mode == Mode::Code || sc.mode == Mode::CallArg) {
        error(e->span, "\\separated in a program expression");
        return;
      }
      for (const auto &a : e->args) {
        if (a->kind != ExprKind::Var) {
          error(a->span, "\\separated expects pointer variables");
          continue;
        }
        auto it = sc.vars.find(a->text);
        if (it == sc.vars.end() || it->second != Type::IntPtr)
          error(a->span, "'" + a->text + "' is not a pointer variable");
      }
      return;
    }
  }

  void check_at(const ExprPtr &e, const Scope &sc) {
    if (sc.mode == Mode::Code || sc.mode == Mode::CallArg) {
      error(e->span, "\\at in a program expression");
      return;
    }
    const std::string &label = e->text;
    if (sc.mode == Mode::Relational) {
      std::string id;
      if (!is_call_label(label, &id)) {
        error(e->span, "label '" + label +
                           "' is not allowed in a relational predicate; use Pre_<id> "
                           "or Post_<id>");
        return;
      }
      const CallSpec *cs = sc.clause->find_call(id);
      if (!cs) {
        error(e->span, "unresolved call-id '" + id + "'");
        return;
      }
      const auto &inner = e->args[0];
      const FunctionDef *callee = prog_.find_function(cs->callee);
      if (inner->kind == ExprKind::Var) {
        if (!prog_.find_global(inner->text))
          error(inner->span, "'" + inner->text + "' is not a global variable");
      } else if (inner->kind == ExprKind::Deref) {
        const Binder *b = callee ? callee->find_formal(inner->text) : nullptr;
        if (!b || b->type != Type::IntPtr)
          error(inner->span, "'" + inner->text + "' is not a pointer formal of '" +
                                 cs->callee + "'");
      } else {
        error(inner->span, "\\at in a relational predicate applies to a global or "
                           "a dereferenced pointer formal");
      }
      return;
    }
    if (!sc.labels.count(label)) {
      if (is_call_label(label))
        error(e->span, "call label '" + label + "' outside a relational clause");
      else
        error(e->span, "label '" + label + "' is not in scope");
    }
    check(e->args[0], sc, false);
  }

  void check_callpure(const ExprPtr &e, const Scope &sc) {
    if (sc.mode != Mode::Relational && sc.mode != Mode::CallArg) {
      error(e->span, "\\callpure outside a relational clause");
      return;
    }
    const FunctionDef *f = prog_.find_function(e->text);
    if (!f) {
      error(e->span, "\\callpure of unknown function '" + e->text + "'");
      return;
    }
    if (!is_pure(*f, prog_))
      error(e->span, "\\callpure callee '" + f->name +
                         "' must return int and have an empty footprint");
    if (f->formals.size() != e->args.size())
      error(e->span, "\\callpure of '" + f->name + "' expects " +
                         std::to_string(f->formals.size()) + " arguments");
    for (const auto &a : e->args) {
      bool has_at = false;
      visit(a, [&](const Expr &x) { has_at |= x.kind == ExprKind::At; });
      if (has_at)
        error(a->span, "\\callpure arguments may not mention \\at");
      check(a, sc, false);
    }
  }

  void check_app(const ExprPtr &e, const Scope &sc) {
    const LogicDecl *d = prog_.find_logic(e->text);
    if (!d) {
      if (prog_.find_function(e->text))
        error(e->span, "call to '" + e->text +
                           "' inside an expression; calls must be statements");
      else
        error(e->span, "unknown logic symbol '" + e->text + "'");
      return;
    }
    if (sc.mode == Mode::Code && (d->is_predicate() || !d->labels.empty())) {
      error(e->span, "predicate '" + e->text + "' in a program expression");
      return;
    }
    if (d->params.size() != e->args.size())
      error(e->span, "'" + e->text + "' expects " + std::to_string(d->params.size()) +
                         " arguments");
    if (d->labels.size() != e->labels.size())
      error(e->span, "'" + e->text + "' expects " + std::to_string(d->labels.size()) +
                         " labels");
    for (const auto &l : e->labels)
      if (!sc.labels.count(l))
        error(e->span, "label '" + l + "' is not in scope");
    for (std::size_t i = 0; i < e->args.size() && i < d->params.size(); ++i) {
      if (d->params[i].type == Type::IntPtr) {
        const auto &a = e->args[i];
        auto it = a->kind == ExprKind::Var ? sc.vars.find(a->text) : sc.vars.end();
        if (it == sc.vars.end() || it->second != Type::IntPtr)
          error(a->span, "argument " + std::to_string(i + 1) + " of '" + e->text +
                             "' must be a pointer variable");
      } else {
        check(e->args[i], sc, false);
      }
    }
  }

  void check_clause(const RelationalClause &rc,
                    const std::vector<const FunctionDef *> &visible) {
    std::set<std::string> ids;
    Scope args_scope;
    args_scope.mode = Mode::CallArg;
    for (const auto &b : rc.binders) {
      args_scope.vars[b.name] = b.type;
      if (b.type != Type::Int)
        error(rc.span, "relational binder '" + b.name + "' must have type int");
      if (prog_.find_global(b.name))
        error(rc.span, "relational binder '" + b.name + "' collides with a global");
    }
    args_scope.clause = &rc;
    for (const auto &cs : rc.callset) {
      if (!ids.insert(cs.call_id).second)
        error(cs.span, "duplicate call-id '" + cs.call_id + "' in clause " + rc.name);
      const FunctionDef *callee = nullptr;
      for (const auto *f : visible)
        if (f->name == cs.callee)
          callee = f;
      if (!callee) {
        error(cs.span, "clause " + rc.name + " calls '" + cs.callee +
                           "', which is not declared before the clause");
        continue;
      }
      std::size_t int_formals = 0;
      for (const auto &f : callee->formals)
        int_formals += f.type == Type::Int;
      if (cs.args.size() != int_formals)
        error(cs.span, "\\call of '" + cs.callee + "' expects " +
                           std::to_string(int_formals) + " int arguments");
      for (const auto &a : cs.args)
        check(a, args_scope, false);
      if (!callee->body && callee->contract.empty())
        error(cs.span, "'" + cs.callee + "' has neither a body nor a contract");
      check_footprint(*callee, cs.span);
    }
    Scope sc;
    sc.mode = Mode::Relational;
    sc.clause = &rc;
    for (const auto &b : rc.binders)
      sc.vars[b.name] = b.type;
    check(rc.pred, sc, true);
  }

  std::set<std::string> footprint_checked_;

  void check_footprint(const FunctionDef &fn, const SourceSpan &use) {
    if (!footprint_checked_.insert(fn.name).second)
      return;
    try {
      footprint_of(fn, prog_);
      // Callees reached through calls must be covered as well.
      visit(fn.body, [&](const Stmt &s) {
        if (s.kind == StmtKind::Call)
          if (const FunctionDef *c = prog_.find_function(s.callee))
            check_footprint(*c, use);
      });
    } catch (const MissingAssigns &e) {
      error(use, e.what());
    }
  }

  void check_axiomatic(const Axiomatic &ax) {
    for (const auto &d : ax.decls) {
      Scope sc;
      sc.mode = Mode::Annot;
      sc.labels.insert(d.labels.begin(), d.labels.end());
      for (const auto &p : d.params)
        sc.vars[p.name] = p.type;
      for (const auto &r : d.reads)
        check(r, sc, false);
    }
    for (const auto &l : ax.lemmas) {
      Scope sc;
      sc.mode = Mode::Annot;
      sc.labels.insert(l.labels.begin(), l.labels.end());
      check(l.body, sc, true);
    }
  }
};

} // namespace

Diagnostics validate(const Program &program) { return Validator(program).run(); }

} // namespace relprop
