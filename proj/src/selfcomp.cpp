#include "relprop/selfcomp.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace relprop {

std::string NameSupply::fresh(const std::string &base) {
  std::string name = base;
  while (used_.count(name))
    name += "_";
  used_.insert(name);
  return name;
}

namespace {

std::set<std::string> local_decls(const StmtPtr &body) {
  std::set<std::string> out;
  visit(body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Decl)
      out.insert(s.name);
  });
  return out;
}

// Every identifier the program binds anywhere.
std::set<std::string> all_program_names(const Program &prog) {
  std::set<std::string> out;
  for (const auto &d : prog.decls) {
    if (auto *g = std::get_if<GlobalDecl>(&d)) {
      out.insert(g->name);
    } else if (auto *f = std::get_if<FunctionDef>(&d)) {
      out.insert(f->name);
      for (const auto &b : f->formals)
        out.insert(b.name);
      auto ls = local_decls(f->body);
      out.insert(ls.begin(), ls.end());
      for (const auto &rc : f->contract.relational)
        for (const auto &b : rc.binders)
          out.insert(b.name);
    } else if (auto *a = std::get_if<Axiomatic>(&d)) {
      out.insert(a->name);
      for (const auto &l : a->decls)
        out.insert(l.name);
      for (const auto &l : a->lemmas)
        out.insert(l.name);
    }
  }
  return out;
}

std::string dup_global_name(const std::string &g, const std::string &id,
                            const std::set<std::string> &names) {
  std::string n = g + "_" + id;
  while (names.count(n))
    n += "_";
  return n;
}

std::vector<std::string> footprint_globals(const MemFootprint &fp) {
  std::vector<std::string> out;
  for (const auto &l : fp.all())
    if (l.kind == Loc::Kind::Global)
      out.push_back(l.name);
  return out;
}

bool has_deref(const MemFootprint &fp) {
  for (const auto &l : fp.all())
    if (l.kind == Loc::Kind::Deref)
      return true;
  return false;
}

const FunctionDef &callee_of(const CallSpec &cs, const Program &prog) {
  const FunctionDef *f = prog.find_function(cs.callee);
  if (!f)
    throw TransformError("unknown callee '" + cs.callee + "'", cs.span);
  return *f;
}

// Names every wrapper of the program must avoid: globals, functions, logic
// symbols and all duplicated globals.
std::set<std::string> wrapper_reserved(const Program &prog) {
  std::set<std::string> out;
  for (const auto *g : prog.globals())
    out.insert(g->name);
  for (const auto *f : prog.functions()) {
    out.insert(f->name);
    out.insert(logic_name(f->name, prog));
  }
  for (const auto *a : prog.axiomatics()) {
    for (const auto &l : a->decls)
      out.insert(l.name);
  }
  auto names = all_program_names(prog);
  for (const auto *f : prog.functions())
    for (const auto &rc : f->contract.relational)
      for (const auto &cs : rc.callset)
        if (const FunctionDef *c = prog.find_function(cs.callee))
          for (const auto &g : footprint_globals(footprint_of(*c, prog)))
            out.insert(dup_global_name(g, cs.call_id, names));
  return out;
}

std::vector<Renaming> renamings_with(const RelationalClause &clause, const Program &prog,
                                     NameSupply &names) {
  auto program_names = all_program_names(prog);
  std::vector<Renaming> out;
  int k = 0;
  for (const auto &cs : clause.callset) {
    const FunctionDef &f = callee_of(cs, prog);
    Renaming r;
    r.call_id = cs.call_id;
    r.index = ++k;
    r.callee = f.name;
    for (const auto &g : footprint_globals(footprint_of(f, prog)))
      r.state[Loc::global(g)] = dup_global_name(g, cs.call_id, program_names);
    for (const auto &b : f.formals)
      if (b.type == Type::IntPtr)
        r.state[Loc::deref(b.name)] = names.fresh(b.name + "_" + cs.call_id);
    if (f.ret == Type::Int)
      r.result = names.fresh("ret_" + cs.call_id);
    out.push_back(std::move(r));
  }
  for (auto &r : out) {
    const FunctionDef &f = *prog.find_function(r.callee);
    std::string suffix = "_" + std::to_string(r.index);
    for (const auto &b : f.formals)
      if (b.type == Type::Int)
        r.locals[b.name] = names.fresh(b.name + suffix);
    std::vector<std::string> decl_order;
    visit(f.body, [&](const Stmt &s) {
      if (s.kind == StmtKind::Decl && !r.locals.count(s.name)) {
        r.locals[s.name] = names.fresh(s.name + suffix);
      }
    });
  }
  return out;
}

NameSupply clause_supply(const RelationalClause &clause, const Program &prog) {
  NameSupply names(wrapper_reserved(prog));
  for (const auto &b : clause.binders)
    names.reserve(b.name);
  names.reserve("Rpp");
  return names;
}

// ---------------------------------------------------------------------------
// Inlining

bool always_returns(const StmtPtr &s) {
  if (!s)
    return false;
  switch (s->kind) {
  case StmtKind::Return:
    return true;
  case StmtKind::Block:
    for (const auto &c : s->stmts)
      if (always_returns(c))
        return true;
    return false;
  case StmtKind::If:
    return always_returns(s->then_branch) && always_returns(s->else_branch);
  default:
    return false;
  }
}

// A return is in tail position when nothing of the callee runs after it.
bool nontail_return(const StmtPtr &s, bool tail) {
  if (!s)
    return false;
  switch (s->kind) {
  case StmtKind::Return:
    return !tail;
  case StmtKind::Block: {
    std::size_t n = s->stmts.size();
    for (std::size_t i = 0; i < n; ++i) {
      bool last = i + 1 == n || always_returns(s->stmts[i]);
      if (nontail_return(s->stmts[i], tail && last))
        return true;
      if (always_returns(s->stmts[i]))
        break;
    }
    return false;
  }
  case StmtKind::If:
    return nontail_return(s->then_branch, tail) || nontail_return(s->else_branch, tail);
  case StmtKind::While:
    return nontail_return(s->body, false);
  default:
    return false;
  }
}

struct Frame {
  std::map<std::string, std::string> vars;
  std::map<std::string, std::string> ptrs;
  std::map<std::string, std::string> snapshots;  // "x" or "*p" -> snapshot var
  std::optional<std::string> ret_target;
  std::optional<std::string> done;
  std::string label_suffix;
};

class Inliner {
public:
  Inliner(const Program &prog, NameSupply &names,
          const std::map<std::string, std::string> &globals, int depth, int k)
      : prog_(prog), names_(names), globals_(globals), depth_(depth), k_(k) {}

  // Body of `fn` under `fr`, preceded by formal copies already emitted by the
  // caller.
  std::vector<StmtPtr> instance(const FunctionDef &fn, Frame fr,
                                std::vector<StmtPtr> prologue) {
    if (!fn.body)
      throw TransformError("function '" + fn.name + "' has no body to inline", fn.span);
    stack_.push_back(fn.name);
    auto body = fn.body;
    std::set<std::string> pre_refs = pre_referenced(fn);
    for (const auto &x : pre_refs) {
      std::string base = x[0] == '*' ? x.substr(1) : x;
      std::string snap = names_.fresh(base + "_pre_" + std::to_string(k_));
      ExprPtr cur = x[0] == '*' ? rename(mk::deref(base), fr) : rename(mk::var(x), fr);
      prologue.push_back(mk::decl(snap, cur));
      fr.snapshots[x] = snap;
    }
    if (nontail_return(body, true)) {
      fr.done = names_.fresh("done_" + std::to_string(k_));
      prologue.push_back(mk::decl(*fr.done, mk::int_lit(0)));
    }
    std::vector<StmtPtr> stmts =
        body->kind == StmtKind::Block ? body->stmts : std::vector<StmtPtr>{body};
    auto lowered = lower_seq(stmts, fr);
    prologue.insert(prologue.end(), lowered.begin(), lowered.end());
    stack_.pop_back();
    return prologue;
  }

  std::vector<std::string> stack_;

private:
  const Program &prog_;
  NameSupply &names_;
  const std::map<std::string, std::string> &globals_;
  int depth_;
  int k_;

  // Variables and pointer cells mentioned under \at(., Pre) or \old in the
  // annotations of fn's body.
  std::set<std::string> pre_referenced(const FunctionDef &fn) {
    std::set<std::string> out;
    auto scan = [&](const ExprPtr &e) {
      visit(e, [&](const Expr &x) {
        if (x.kind != ExprKind::At || (x.text != "Pre" && x.text != "Old"))
          return;
        visit(x.args[0], [&](const Expr &y) {
          if (y.kind == ExprKind::Var)
            out.insert(y.text);
          else if (y.kind == ExprKind::Deref)
            out.insert("*" + y.text);
        });
      });
    };
    visit(fn.body, [&](const Stmt &s) {
      if (s.kind == StmtKind::Assert)
        scan(s.expr);
      if (s.kind == StmtKind::While) {
        for (const auto &i : s.invariants)
          scan(i);
        if (s.variant)
          scan(s.variant);
      }
    });
    return out;
  }

  std::string var_name(const std::string &x, const Frame &fr) const {
    if (auto it = fr.vars.find(x); it != fr.vars.end())
      return it->second;
    if (auto it = globals_.find(x); it != globals_.end())
      return it->second;
    return x;
  }

  std::string ptr_name(const std::string &p, const Frame &fr) const {
    if (auto it = fr.ptrs.find(p); it != fr.ptrs.end())
      return it->second;
    return p;
  }

  ExprPtr rename(const ExprPtr &e, const Frame &fr) const {
    return rewrite(e, [&](const ExprPtr &x) -> ExprPtr {
      switch (x->kind) {
      case ExprKind::Var:
        return mk::var(var_name(x->text, fr), x->span);
      case ExprKind::Deref:
        return mk::deref(ptr_name(x->text, fr), x->span);
      case ExprKind::At:
        if (x->text == "Pre" || x->text == "Old")
          return rewrite(x->args[0], [&](const ExprPtr &y) -> ExprPtr {
            if (y->kind == ExprKind::Var)
              if (auto it = fr.snapshots.find(y->text); it != fr.snapshots.end())
                return mk::var(it->second, y->span);
            if (y->kind == ExprKind::Deref)
              if (auto it = fr.snapshots.find("*" + y->text); it != fr.snapshots.end())
                return mk::var(it->second, y->span);
            return nullptr;
          });
        return nullptr;
      case ExprKind::Separated: {
        std::vector<ExprPtr> a;
        for (const auto &p : x->args)
          a.push_back(mk::var(ptr_name(p->text, fr), p->span));
        return mk::separated(a[0], a[1], x->span);
      }
      case ExprKind::App: {
        const LogicDecl *d = prog_.find_logic(x->text);
        if (!d)
          return nullptr;
        std::vector<ExprPtr> a;
        for (std::size_t i = 0; i < x->args.size(); ++i)
          if (i < d->params.size() && d->params[i].type == Type::IntPtr &&
              x->args[i]->kind == ExprKind::Var)
            a.push_back(mk::var(ptr_name(x->args[i]->text, fr)));
          else
            a.push_back(rename(x->args[i], fr));
        return mk::app(x->text, a, x->labels, x->span);
      }
      default:
        return nullptr;
      }
    });
  }

  static StmtPtr as_stmt(std::vector<StmtPtr> v) {
    if (v.size() == 1 && v[0]->kind != StmtKind::Decl)
      return v[0];
    return mk::block(std::move(v));
  }

  ExprPtr not_done(const Frame &fr) const {
    return mk::binary(BinOp::Eq, mk::var(*fr.done), mk::int_lit(0));
  }

  std::vector<StmtPtr> lower_seq(const std::vector<StmtPtr> &stmts, const Frame &fr) {
    std::vector<StmtPtr> out;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      auto part = lower(stmts[i], fr);
      out.insert(out.end(), part.begin(), part.end());
      if (always_returns(stmts[i]))
        break;
      if (fr.done && contains_return(stmts[i]) && i + 1 < stmts.size()) {
        std::vector<StmtPtr> rest(stmts.begin() + i + 1, stmts.end());
        auto lowered = lower_seq(rest, fr);
        if (!lowered.empty())
          out.push_back(mk::if_(not_done(fr), mk::block(lowered)));
        break;
      }
    }
    return out;
  }

  std::vector<StmtPtr> lower(const StmtPtr &s, const Frame &fr) {
    switch (s->kind) {
    case StmtKind::Skip:
      return {};
    case StmtKind::Decl:
      return {mk::decl(var_name(s->name, fr), s->expr ? rename(s->expr, fr) : nullptr)};
    case StmtKind::Assign:
      if (s->deref_target)
        return {mk::assign_deref(ptr_name(s->name, fr), rename(s->expr, fr))};
      return {mk::assign(var_name(s->name, fr), rename(s->expr, fr))};
    case StmtKind::Call:
      return call(*s, fr);
    case StmtKind::If: {
      auto t = lower(s->then_branch, fr);
      StmtPtr e;
      if (s->else_branch) {
        auto ev = lower(s->else_branch, fr);
        if (!ev.empty())
          e = as_stmt(std::move(ev));
      }
      return {mk::if_(rename(s->expr, fr), as_stmt(std::move(t)), e)};
    }
    case StmtKind::While: {
      ExprPtr c = rename(s->expr, fr);
      if (fr.done && contains_return(s->body))
        c = mk::binary(BinOp::And, not_done(fr), c);
      std::vector<ExprPtr> inv;
      for (const auto &i : s->invariants)
        inv.push_back(rename(i, fr));
      std::vector<StmtPtr> body =
          s->body->kind == StmtKind::Block ? s->body->stmts : std::vector<StmtPtr>{s->body};
      return {mk::while_(c, mk::block(lower_seq(body, fr)), inv,
                         s->variant ? rename(s->variant, fr) : nullptr)};
    }
    case StmtKind::Block:
      return {mk::block(lower_seq(s->stmts, fr))};
    case StmtKind::Return: {
      std::vector<StmtPtr> out;
      if (s->expr && fr.ret_target)
        out.push_back(mk::assign(*fr.ret_target, rename(s->expr, fr)));
      if (fr.done)
        out.push_back(mk::assign(*fr.done, mk::int_lit(1)));
      return out;
    }
    case StmtKind::Assert: {
      std::string label = s->name;
      if (!label.empty())
        label = names_.fresh(label + "_" + std::to_string(k_));
      return {mk::assert_(label, rename(s->expr, fr))};
    }
    }
    return {};
  }

  std::vector<StmtPtr> call(const Stmt &s, const Frame &fr) {
    const FunctionDef *callee = prog_.find_function(s.callee);
    if (!callee)
      throw TransformError("unknown callee '" + s.callee + "'", s.span);
    long count = std::count(stack_.begin(), stack_.end(), callee->name);
    if (count >= depth_ || !callee->body)
      return opaque(s, *callee, fr);

    Frame inner;
    std::vector<StmtPtr> prologue;
    std::string suffix = "_" + std::to_string(k_);
    for (std::size_t i = 0; i < callee->formals.size(); ++i) {
      const auto &b = callee->formals[i];
      if (b.type == Type::IntPtr) {
        inner.ptrs[b.name] = ptr_name(s.args[i]->text, fr);
      } else {
        std::string n = names_.fresh(b.name + suffix);
        inner.vars[b.name] = n;
        prologue.push_back(mk::decl(n, rename(s.args[i], fr)));
      }
    }
    for (const auto &l : local_decls(callee->body))
      if (!inner.vars.count(l))
        inner.vars[l] = names_.fresh(l + suffix);
    if (!s.name.empty())
      inner.ret_target = var_name(s.name, fr);
    return instance(*callee, std::move(inner), std::move(prologue));
  }

  std::vector<StmtPtr> opaque(const Stmt &s, const FunctionDef &callee, const Frame &fr) {
    if (!callee.body && callee.contract.empty())
      throw TransformError("callee '" + callee.name + "' has neither body nor contract",
                           s.span);
    if (!is_pure(callee, prog_))
      throw TransformError("call to '" + callee.name +
                               "' cannot be inlined further and has side effects; "
                               "raise its inlining option",
                           s.span);
    if (s.name.empty())
      return {};
    std::vector<ExprPtr> args;
    for (const auto &a : s.args)
      args.push_back(rename(a, fr));
    return {mk::assign(var_name(s.name, fr), mk::app(logic_name(callee.name, prog_), args))};
  }
};

Frame top_frame(const Renaming &r) {
  Frame fr;
  for (const auto &[loc, name] : r.state)
    if (loc.kind == Loc::Kind::Deref)
      fr.ptrs[loc.name] = name;
  fr.vars = r.locals;
  fr.ret_target = r.result;
  return fr;
}

std::map<std::string, std::string> global_map(const Renaming &r) {
  std::map<std::string, std::string> out;
  for (const auto &[loc, name] : r.state)
    if (loc.kind == Loc::Kind::Global)
      out[loc.name] = name;
  return out;
}

std::vector<StmtPtr> inline_with(const CallSpec &spec, const Renaming &r,
                                 const Program &prog, int depth, NameSupply &names) {
  const FunctionDef &f = callee_of(spec, prog);
  auto globals = global_map(r);
  Inliner in(prog, names, globals, depth, r.index);
  Frame fr = top_frame(r);
  std::vector<StmtPtr> prologue;
  std::size_t ai = 0;
  for (const auto &b : f.formals)
    if (b.type == Type::Int)
      prologue.push_back(mk::decl(r.locals.at(b.name), spec.args.at(ai++)));
  if (!f.body) {
    // Contract-only callee: the call itself is opaque.
    if (!is_pure(f, prog))
      throw TransformError("callee '" + f.name + "' has no body and side effects",
                           spec.span);
    std::vector<ExprPtr> args(spec.args.begin(), spec.args.end());
    if (r.result)
      prologue.push_back(mk::assign(*r.result, mk::app(logic_name(f.name, prog), args)));
    return prologue;
  }
  return in.instance(f, std::move(fr), std::move(prologue));
}

// Rewrites a clause predicate for the wrapper assertion.
ExprPtr translate_with(const ExprPtr &pred, const std::vector<Renaming> &rs,
                       const Program &prog) {
  auto find = [&](const std::string &id) -> const Renaming * {
    for (const auto &r : rs)
      if (r.call_id == id)
        return &r;
    return nullptr;
  };
  return rewrite(pred, [&](const ExprPtr &x) -> ExprPtr {
    if (x->kind == ExprKind::At) {
      bool pre = x->text.rfind("Pre_", 0) == 0;
      bool post = x->text.rfind("Post_", 0) == 0;
      if (!pre && !post)
        return nullptr;
      const Renaming *r = find(x->text.substr(pre ? 4 : 5));
      if (!r)
        return nullptr;
      const auto &in = x->args[0];
      ExprPtr target;
      if (in->kind == ExprKind::Var) {
        auto it = r->state.find(Loc::global(in->text));
        target = mk::var(it != r->state.end() ? it->second : in->text, in->span);
      } else if (in->kind == ExprKind::Deref) {
        auto it = r->state.find(Loc::deref(in->text));
        target = mk::deref(it != r->state.end() ? it->second : in->text, in->span);
      } else {
        return nullptr;
      }
      return mk::at(target, pre ? "Pre" : "Here", x->span);
    }
    if (x->kind == ExprKind::CallResult) {
      const Renaming *r = find(x->text);
      if (r && r->result)
        return mk::var(*r->result, x->span);
      return nullptr;
    }
    if (x->kind == ExprKind::CallPure) {
      std::vector<ExprPtr> args;
      for (const auto &a : x->args)
        args.push_back(translate_with(a, rs, prog));
      return mk::app(logic_name(x->text, prog), args, {}, x->span);
    }
    return nullptr;
  });
}

// ---------------------------------------------------------------------------
// Axiomatic layer

struct LogicShape {
  LogicDecl decl;
  ExprPtr link;  // ensures clause tying the C function to its logic counterpart
  bool pure = false;
  bool labeled = false;
  std::vector<std::string> globals;
};

LogicShape logic_shape(const FunctionDef &f, const Program &prog) {
  LogicShape s;
  s.decl.name = logic_name(f.name, prog);
  std::vector<ExprPtr> link_args;
  for (const auto &b : f.formals) {
    s.decl.params.push_back(b);
    link_args.push_back(mk::var(b.name));
  }
  if (is_pure(f, prog)) {
    s.pure = true;
    s.decl.result = Type::Int;
    s.link = mk::binary(BinOp::Eq, mk::result(), mk::app(s.decl.name, link_args));
    return s;
  }
  MemFootprint fp = footprint_of(f, prog);
  NameSupply pnames;
  for (const auto &b : f.formals)
    pnames.reserve(b.name);
  if (f.ret == Type::Int) {
    s.decl.params.push_back({pnames.fresh("result"), Type::Int});
    link_args.push_back(mk::result());
  }
  s.globals = footprint_globals(fp);
  for (const auto &g : s.globals) {
    s.decl.params.push_back({pnames.fresh(g + "_pre"), Type::Int});
    s.decl.params.push_back({pnames.fresh(g + "_post"), Type::Int});
    link_args.push_back(mk::at(mk::var(g), "Pre"));
    link_args.push_back(mk::at(mk::var(g), "Post"));
  }
  std::vector<std::string> labels;
  if (has_deref(fp)) {
    s.labeled = true;
    s.decl.labels = {"pre", "post"};
    labels = {"Pre", "Post"};
    for (const auto &l : fp.all())
      if (l.kind == Loc::Kind::Deref) {
        s.decl.reads.push_back(mk::at(mk::deref(l.name), "post"));
        s.decl.reads.push_back(mk::at(mk::deref(l.name), "pre"));
      }
  }
  s.link = mk::app(s.decl.name, link_args, labels);
  return s;
}

// Logic symbols (by function) that `e` applies.
void applied_functions(const ExprPtr &e, const Program &prog, std::set<std::string> &out) {
  visit(e, [&](const Expr &x) {
    if (x.kind == ExprKind::CallPure)
      out.insert(x.text);
    if (x.kind == ExprKind::App)
      for (const auto *f : prog.functions())
        if (logic_name(f->name, prog) == x.text)
          out.insert(f->name);
  });
}

} // namespace

std::string logic_name(const std::string &function, const Program &prog) {
  std::string n = function + "_acsl";
  while (prog.find_function(n) || prog.find_global(n) || prog.find_logic(n))
    n += "_";
  return n;
}

std::vector<Renaming> make_renamings(const RelationalClause &clause, const Program &prog) {
  NameSupply names = clause_supply(clause, prog);
  return renamings_with(clause, prog, names);
}

std::vector<StmtPtr> inline_call(const CallSpec &spec, const Renaming &renaming,
                                 const Program &prog, int depth) {
  NameSupply names(wrapper_reserved(prog));
  for (const auto &[loc, n] : renaming.state)
    names.reserve(n);
  for (const auto &[from, to] : renaming.locals)
    names.reserve(to);
  if (renaming.result)
    names.reserve(*renaming.result);
  return inline_with(spec, renaming, prog, depth, names);
}

ExprPtr translate_pred(const ExprPtr &pred, const std::vector<Renaming> &renamings,
                       const Program &prog) {
  return translate_with(pred, renamings, prog);
}

FunctionDef build_wrapper(const RelationalClause &clause, const Program &prog,
                          int clause_index) {
  NameSupply names = clause_supply(clause, prog);
  auto rs = renamings_with(clause, prog, names);

  FunctionDef w;
  w.name = "relational_wrapper_" + std::to_string(clause_index);
  while (prog.find_function(w.name) || prog.find_global(w.name))
    w.name += "_";
  w.ret = Type::Void;
  w.span = clause.span;

  std::vector<std::pair<std::size_t, std::string>> ptrs;  // (call index, name)
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const FunctionDef &f = *prog.find_function(rs[i].callee);
    for (const auto &b : f.formals)
      if (b.type == Type::IntPtr) {
        std::string n = rs[i].state.at(Loc::deref(b.name));
        w.formals.push_back({n, Type::IntPtr});
        ptrs.emplace_back(i, n);
      }
  }
  for (const auto &b : clause.binders)
    w.formals.push_back(b);
  for (std::size_t a = 0; a < ptrs.size(); ++a)
    for (std::size_t b = a + 1; b < ptrs.size(); ++b)
      if (ptrs[a].first != ptrs[b].first)
        w.contract.requires_.push_back(
            mk::separated(mk::var(ptrs[a].second), mk::var(ptrs[b].second)));

  // Callee preconditions, instantiated on each call's arguments and state copy.
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto &cs = clause.callset[i];
    const FunctionDef &f = *prog.find_function(cs.callee);
    std::map<std::string, ExprPtr> actual;
    std::size_t ai = 0;
    for (const auto &b : f.formals)
      if (b.type == Type::Int)
        actual[b.name] = cs.args.at(ai++);
    for (const auto &req : f.contract.requires_) {
      w.contract.requires_.push_back(rewrite(req, [&](const ExprPtr &x) -> ExprPtr {
        if (x->kind == ExprKind::Var) {
          if (auto it = actual.find(x->text); it != actual.end())
            return it->second;
          if (auto it = rs[i].state.find(Loc::global(x->text)); it != rs[i].state.end())
            return mk::var(it->second);
        }
        if (x->kind == ExprKind::Deref)
          if (auto it = rs[i].state.find(Loc::deref(x->text)); it != rs[i].state.end())
            return mk::deref(it->second);
        return nullptr;
      }));
    }
  }

  std::vector<StmtPtr> body;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].result)
      body.push_back(mk::decl(*rs[i].result));
    auto part = inline_with(clause.callset[i], rs[i], prog, clause.callset[i].inlining, names);
    body.insert(body.end(), part.begin(), part.end());
  }
  body.push_back(mk::assert_("Rpp", translate_with(clause.pred, rs, prog)));
  w.body = mk::block(std::move(body));
  return w;
}

Axiomatic build_axiomatic(const RelationalClause &clause, const Program &prog,
                          int clause_index) {
  Axiomatic ax;
  ax.name = "Relational_axiom_" + std::to_string(clause_index);
  ax.span = clause.span;

  std::map<std::string, LogicShape> shapes;
  std::vector<std::string> order;
  auto need = [&](const std::string &fn) {
    if (shapes.count(fn))
      return;
    const FunctionDef *f = prog.find_function(fn);
    if (!f)
      throw TransformError("unknown function '" + fn + "'", clause.span);
    shapes.emplace(fn, logic_shape(*f, prog));
    order.push_back(fn);
  };
  for (const auto &cs : clause.callset)
    need(cs.callee);
  std::set<std::string> extra;
  applied_functions(clause.pred, prog, extra);
  for (const auto &fn : extra)
    need(fn);
  for (const auto &fn : order)
    ax.decls.push_back(shapes.at(fn).decl);

  NameSupply names(wrapper_reserved(prog));
  for (const auto &b : clause.binders)
    names.reserve(b.name);
  auto program_names = all_program_names(prog);

  struct CallVars {
    std::map<std::string, std::string> ptrs;  // formal -> quantified pointer
    std::optional<std::string> ret;
    std::map<std::string, std::pair<std::string, std::string>> globals;
  };
  std::vector<CallVars> cv(clause.callset.size());
  for (std::size_t i = 0; i < clause.callset.size(); ++i) {
    const auto &cs = clause.callset[i];
    const FunctionDef &f = *prog.find_function(cs.callee);
    const LogicShape &sh = shapes.at(cs.callee);
    for (const auto &b : f.formals)
      if (b.type == Type::IntPtr)
        cv[i].ptrs[b.name] = names.fresh(b.name + "_" + cs.call_id);
    if (sh.pure)
      continue;
    if (f.ret == Type::Int)
      cv[i].ret = names.fresh("ret_" + cs.call_id);
    for (const auto &g : sh.globals) {
      std::string base = dup_global_name(g, cs.call_id, program_names);
      cv[i].globals[g] = {names.fresh(base + "_pre"), names.fresh(base + "_post")};
    }
  }

  Lemma lemma;
  lemma.name = "Relational_lemma_" + std::to_string(clause_index);
  std::vector<Binder> qs = clause.binders;
  std::vector<ExprPtr> hyps;
  for (std::size_t i = clause.callset.size(); i-- > 0;) {
    const auto &cs = clause.callset[i];
    const FunctionDef &f = *prog.find_function(cs.callee);
    const LogicShape &sh = shapes.at(cs.callee);
    if (sh.labeled) {
      lemma.labels.push_back("pre_" + cs.call_id);
      lemma.labels.push_back("post_" + cs.call_id);
    }
    for (const auto &b : f.formals)
      if (b.type == Type::IntPtr)
        qs.push_back({cv[i].ptrs.at(b.name), Type::IntPtr});
    if (cv[i].ret)
      qs.push_back({*cv[i].ret, Type::Int});
    for (const auto &g : sh.globals) {
      qs.push_back({cv[i].globals.at(g).first, Type::Int});
      qs.push_back({cv[i].globals.at(g).second, Type::Int});
    }
  }

  std::vector<std::pair<std::size_t, std::string>> ptrs;
  for (std::size_t i = 0; i < clause.callset.size(); ++i) {
    const FunctionDef &f = *prog.find_function(clause.callset[i].callee);
    for (const auto &b : f.formals)
      if (b.type == Type::IntPtr)
        ptrs.emplace_back(i, cv[i].ptrs.at(b.name));
  }
  for (std::size_t a = 0; a < ptrs.size(); ++a)
    for (std::size_t b = a + 1; b < ptrs.size(); ++b)
      if (ptrs[a].first != ptrs[b].first)
        hyps.push_back(mk::separated(mk::var(ptrs[a].second), mk::var(ptrs[b].second)));

  for (std::size_t i = clause.callset.size(); i-- > 0;) {
    const auto &cs = clause.callset[i];
    const FunctionDef &f = *prog.find_function(cs.callee);
    const LogicShape &sh = shapes.at(cs.callee);
    if (sh.pure)
      continue;
    std::vector<ExprPtr> args;
    std::size_t ai = 0;
    for (const auto &b : f.formals)
      args.push_back(b.type == Type::IntPtr ? mk::var(cv[i].ptrs.at(b.name))
                                            : cs.args.at(ai++));
    if (cv[i].ret)
      args.push_back(mk::var(*cv[i].ret));
    for (const auto &g : sh.globals) {
      args.push_back(mk::var(cv[i].globals.at(g).first));
      args.push_back(mk::var(cv[i].globals.at(g).second));
    }
    std::vector<std::string> labels;
    if (sh.labeled)
      labels = {"pre_" + cs.call_id, "post_" + cs.call_id};
    hyps.push_back(mk::app(sh.decl.name, args, labels));
  }

  auto index_of = [&](const std::string &id) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < clause.callset.size(); ++i)
      if (clause.callset[i].call_id == id)
        return i;
    return std::nullopt;
  };
  std::function<ExprPtr(const ExprPtr &)> lemma_pred = [&](const ExprPtr &e) -> ExprPtr {
    return rewrite(e, [&](const ExprPtr &x) -> ExprPtr {
      if (x->kind == ExprKind::At) {
        bool pre = x->text.rfind("Pre_", 0) == 0;
        bool post = x->text.rfind("Post_", 0) == 0;
        if (!pre && !post)
          return nullptr;
        std::string id = x->text.substr(pre ? 4 : 5);
        auto i = index_of(id);
        if (!i)
          return nullptr;
        const auto &in = x->args[0];
        if (in->kind == ExprKind::Var) {
          auto it = cv[*i].globals.find(in->text);
          if (it == cv[*i].globals.end())
            return nullptr;
          return mk::var(pre ? it->second.first : it->second.second, x->span);
        }
        if (in->kind == ExprKind::Deref) {
          auto it = cv[*i].ptrs.find(in->text);
          if (it == cv[*i].ptrs.end())
            return nullptr;
          return mk::at(mk::deref(it->second), (pre ? "pre_" : "post_") + id, x->span);
        }
        return nullptr;
      }
      if (x->kind == ExprKind::CallResult) {
        auto i = index_of(x->text);
        if (!i)
          return nullptr;
        if (cv[*i].ret)
          return mk::var(*cv[*i].ret, x->span);
        const auto &cs = clause.callset[*i];
        return mk::app(shapes.at(cs.callee).decl.name, cs.args, {}, x->span);
      }
      if (x->kind == ExprKind::CallPure) {
        std::vector<ExprPtr> args;
        for (const auto &a : x->args)
          args.push_back(lemma_pred(a));
        return mk::app(logic_name(x->text, prog), args, {}, x->span);
      }
      return nullptr;
    });
  };

  ExprPtr body = mk::implies_chain(hyps, lemma_pred(clause.pred));
  lemma.body = qs.empty() ? body : mk::quant(Quantifier::Forall, qs, body);
  ax.lemmas.push_back(std::move(lemma));
  return ax;
}

const WrapperInfo *TransformedProgram::wrapper_for_function(const std::string &fn) const {
  for (const auto &w : wrappers)
    if (w.function == fn)
      return &w;
  return nullptr;
}

const WrapperInfo *TransformedProgram::wrapper_for_lemma(const std::string &lemma) const {
  for (const auto &w : wrappers)
    if (w.lemma == lemma)
      return &w;
  return nullptr;
}

TransformedProgram transform(const Program &program) {
  auto ds = validate(program);
  if (has_errors(ds)) {
    std::ostringstream os;
    for (const auto &d : ds)
      os << d << "\n";
    throw Error("program does not validate:\n" + os.str(), ds.front().span);
  }
  TransformedProgram tp;
  bool any = false;
  for (const auto *f : program.functions())
    any |= !f->contract.relational.empty();
  if (!any) {
    tp.program = program;
    return tp;
  }

  std::vector<Decl> heads, fns, dups, wrappers;
  std::vector<Axiomatic> axioms;
  std::map<std::string, std::size_t> fn_index;
  for (const auto &d : program.decls) {
    if (auto *f = std::get_if<FunctionDef>(&d)) {
      FunctionDef copy = *f;
      copy.contract.relational.clear();
      fn_index[f->name] = fns.size();
      fns.emplace_back(std::move(copy));
    } else {
      heads.push_back(d);
    }
  }

  std::set<std::string> declared;  // functions whose logic symbol exists
  std::set<std::string> dup_names;
  std::vector<std::string> errors;
  SourceSpan first_error;
  int n = 0;
  for (const auto *f : program.functions()) {
    for (const auto &rc : f->contract.relational) {
      ++n;
      try {
        FunctionDef w = build_wrapper(rc, program, n);
        Axiomatic ax = build_axiomatic(rc, program, n);

        std::set<std::string> used;
        visit_exprs(w.body, [&](const ExprPtr &e) { applied_functions(e, program, used); });
        std::set<std::string> in_ax;
        for (const auto &cs : rc.callset)
          in_ax.insert(cs.callee);
        applied_functions(rc.pred, program, in_ax);
        for (const auto &fn : used)
          if (!in_ax.count(fn))
            ax.decls.push_back(logic_shape(*program.find_function(fn), program).decl);

        std::vector<LogicDecl> fresh;
        for (auto &decl : ax.decls) {
          std::string fn;
          for (const auto *g : program.functions())
            if (logic_name(g->name, program) == decl.name)
              fn = g->name;
          if (declared.count(fn))
            continue;
          declared.insert(fn);
          auto sh = logic_shape(*program.find_function(fn), program);
          auto &target = std::get<FunctionDef>(fns[fn_index.at(fn)]);
          std::string bname = "Relational_behavior_" + std::to_string(n);
          target.contract.behaviors.push_back({bname, {sh.link}});
          tp.provenance.push_back({decl.name, decl.is_predicate() ? "predicate" : "logic",
                                   rc.name});
          tp.provenance.push_back({fn + "::" + bname, "behavior", rc.name});
          fresh.push_back(std::move(decl));
        }
        ax.decls = std::move(fresh);

        auto rs = make_renamings(rc, program);
        for (const auto &r : rs)
          for (const auto &[loc, name] : r.state)
            if (loc.kind == Loc::Kind::Global && dup_names.insert(name).second) {
              GlobalDecl g;
              g.name = name;
              g.type = program.find_global(loc.name)->type;
              dups.emplace_back(std::move(g));
              tp.provenance.push_back({name, "global", rc.name});
            }

        tp.provenance.push_back({ax.name, "axiomatic", rc.name});
        tp.provenance.push_back({ax.lemmas[0].name, "lemma", rc.name});
        tp.provenance.push_back({w.name, "wrapper", rc.name});
        tp.wrappers.push_back({w.name, rc.name, f->name, ax.lemmas[0].name, ax.name, n});
        axioms.push_back(std::move(ax));
        wrappers.emplace_back(std::move(w));
      } catch (const Error &e) {
        if (errors.empty())
          first_error = e.span();
        errors.push_back(rc.name + ": " + e.what());
      }
    }
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto &e : errors)
      msg += e + "\n";
    throw TransformError(msg, first_error);
  }

  for (auto &d : heads)
    tp.program.decls.push_back(std::move(d));
  for (auto &a : axioms)
    tp.program.decls.emplace_back(std::move(a));
  for (auto &d : fns)
    tp.program.decls.push_back(std::move(d));
  for (auto &d : dups)
    tp.program.decls.push_back(std::move(d));
  for (auto &d : wrappers)
    tp.program.decls.push_back(std::move(d));
  return tp;
}

std::string provenance_json(const TransformedProgram &tp) {
  nlohmann::json j;
  j["generated"] = nlohmann::json::array();
  for (const auto &p : tp.provenance)
    j["generated"].push_back({{"name", p.generated}, {"kind", p.kind}, {"clause", p.clause}});
  j["wrappers"] = nlohmann::json::array();
  for (const auto &w : tp.wrappers)
    j["wrappers"].push_back({{"function", w.function},
                             {"clause", w.clause},
                             {"owner", w.owner},
                             {"lemma", w.lemma},
                             {"axiomatic", w.axiomatic},
                             {"index", w.index}});
  return j.dump(2) + "\n";
}

} // namespace relprop
