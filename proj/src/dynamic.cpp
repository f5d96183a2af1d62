#include "relprop/dynamic.hpp"

#include <chrono>
#include <climits>
#include <random>

#include <json.hpp>

namespace relprop {

const char *to_string(Outcome o) {
  switch (o) {
  case Outcome::Pass:
    return "pass";
  case Outcome::Fail:
    return "fail";
  case Outcome::Error:
    return "error";
  }
  return "?";
}

namespace {

constexpr int kMaxDepth = 5000;

struct Frame {
  const FunctionDef *fn = nullptr;
  std::map<std::string, std::int64_t> locals;
  Snapshot pre;
  std::optional<std::int64_t> ret;
  bool returned = false;
};

// Pre-order assertion and loop ids, matching the VC names.
std::map<const Stmt *, std::string> annotation_ids(const FunctionDef &fn) {
  std::map<const Stmt *, std::string> ids;
  int asserts = 0, loops = 0;
  visit(fn.body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Assert) {
      ++asserts;
      ids[&s] = s.name.empty() ? "assert_" + std::to_string(asserts) : s.name;
    } else if (s.kind == StmtKind::While) {
      ids[&s] = "loop_" + std::to_string(++loops);
    }
  });
  return ids;
}

class Interp {
public:
  Interp(const Program &prog, State &st, std::uint64_t fuel)
      : prog_(prog), st_(st), fuel_(fuel) {
    for (const auto *f : prog.functions())
      for (const auto &b : f->contract.behaviors) {
        if (b.name.rfind("Relational_behavior_", 0) != 0 || b.ensures.size() != 1)
          continue;
        const auto &e = b.ensures[0];
        if (e->kind == ExprKind::Binary && e->binop == BinOp::Eq &&
            e->args[0]->kind == ExprKind::Result && e->args[1]->kind == ExprKind::App)
          impl_[e->args[1]->text] = f;
      }
  }

  std::optional<std::int64_t> call(const FunctionDef &fn, const std::vector<std::int64_t> &args) {
    if (!fn.body)
      throw NotExecutable("function '" + fn.name + "' has no body", fn.span);
    burn(fn.span);
    if (++depth_ > kMaxDepth)
      throw FuelExhausted("call depth exhausted in '" + fn.name + "'", fn.span);
    Frame fr = enter(fn, args);
    exec(fn.body, fr);
    --depth_;
    return fr.ret;
  }

  bool holds_on_entry(const FunctionDef &fn, const std::vector<std::int64_t> &args,
                      const ExprPtr &e) {
    Frame fr = enter(fn, args);
    return eval(e, fr, nullptr) != 0;
  }

  Snapshot snapshot(const Frame &fr) const {
    Snapshot s;
    s.vars = st_.globals;
    for (const auto &[k, v] : fr.locals)
      s.vars[k] = v;
    s.heap = st_.heap;
    return s;
  }

private:
  const Program &prog_;
  State &st_;
  std::uint64_t fuel_;
  int depth_ = 0;
  std::map<std::string, const FunctionDef *> impl_;
  std::map<const FunctionDef *, std::map<const Stmt *, std::string>> ids_;

  void burn(const SourceSpan &span) {
    if (fuel_ == 0)
      throw FuelExhausted("fuel exhausted", span);
    --fuel_;
  }

  Frame enter(const FunctionDef &fn, const std::vector<std::int64_t> &args) {
    Frame fr;
    fr.fn = &fn;
    for (std::size_t i = 0; i < fn.formals.size(); ++i)
      fr.locals[fn.formals[i].name] = i < args.size() ? args[i] : 0;
    fr.pre = snapshot(fr);
    return fr;
  }

  const std::string &id_of(const Frame &fr, const Stmt &s) {
    auto it = ids_.find(fr.fn);
    if (it == ids_.end())
      it = ids_.emplace(fr.fn, annotation_ids(*fr.fn)).first;
    return it->second.at(&s);
  }

  // ---- statements

  void exec(const StmtPtr &s, Frame &fr) {
    if (!s || fr.returned)
      return;
    switch (s->kind) {
    case StmtKind::Skip:
      return;
    case StmtKind::Decl:
      fr.locals[s->name] = s->expr ? eval(s->expr, fr, nullptr) : 0;
      return;
    case StmtKind::Assign: {
      std::int64_t v = eval(s->expr, fr, nullptr);
      if (s->deref_target)
        cell(read_var(s->name, fr, nullptr, s->span), s->span) = v;
      else
        write_var(s->name, v, fr, s->span);
      return;
    }
    case StmtKind::Call: {
      const FunctionDef *g = prog_.find_function(s->callee);
      if (!g)
        throw NotExecutable("unknown function '" + s->callee + "'", s->span);
      std::vector<std::int64_t> args;
      for (const auto &a : s->args)
        args.push_back(eval(a, fr, nullptr));
      auto r = call(*g, args);
      if (!s->name.empty())
        write_var(s->name, r.value_or(0), fr, s->span);
      return;
    }
    case StmtKind::If:
      if (eval(s->expr, fr, nullptr))
        exec(s->then_branch, fr);
      else
        exec(s->else_branch, fr);
      return;
    case StmtKind::While: {
      const std::string &id = id_of(fr, *s);
      check_invariants(*s, id, fr);
      while (!fr.returned && eval(s->expr, fr, nullptr)) {
        burn(s->span);
        exec(s->body, fr);
        if (!fr.returned)
          check_invariants(*s, id, fr);
      }
      return;
    }
    case StmtKind::Block:
      for (const auto &c : s->stmts) {
        exec(c, fr);
        if (fr.returned)
          return;
      }
      return;
    case StmtKind::Return:
      if (s->expr)
        fr.ret = eval(s->expr, fr, nullptr);
      fr.returned = true;
      return;
    case StmtKind::Assert:
      if (!eval(s->expr, fr, nullptr))
        throw AssertViolated(id_of(fr, *s), snapshot(fr), s->span);
      return;
    }
  }

  void check_invariants(const Stmt &s, const std::string &id, Frame &fr) {
    for (const auto &inv : s.invariants)
      if (!eval(inv, fr, nullptr))
        throw AssertViolated(id, snapshot(fr), inv->span);
  }

  // ---- state access

  std::int64_t read_var(const std::string &name, const Frame &fr, const Snapshot *view,
                        const SourceSpan &span) const {
    if (view) {
      auto it = view->vars.find(name);
      if (it == view->vars.end())
        throw NotExecutable("'" + name + "' is not in the labeled state", span);
      return it->second;
    }
    if (auto it = fr.locals.find(name); it != fr.locals.end())
      return it->second;
    if (auto it = st_.globals.find(name); it != st_.globals.end())
      return it->second;
    throw NotExecutable("unbound variable '" + name + "'", span);
  }

  void write_var(const std::string &name, std::int64_t v, Frame &fr, const SourceSpan &span) {
    if (auto it = fr.locals.find(name); it != fr.locals.end()) {
      it->second = v;
      return;
    }
    if (auto it = st_.globals.find(name); it != st_.globals.end()) {
      it->second = v;
      return;
    }
    throw NotExecutable("assignment to unbound variable '" + name + "'", span);
  }

  std::int64_t &cell(std::int64_t ptr, const SourceSpan &span) {
    if (ptr < 0 || ptr >= static_cast<std::int64_t>(st_.heap.size()))
      throw NotExecutable("dereference of an unallocated cell", span);
    return st_.heap[static_cast<std::size_t>(ptr)];
  }

  // ---- expressions

  std::int64_t eval(const ExprPtr &e, Frame &fr, const Snapshot *view) {
    std::int64_t r = 0;
    switch (e->kind) {
    case ExprKind::IntLit:
      return e->value;
    case ExprKind::BoolLit:
      return e->value ? 1 : 0;
    case ExprKind::Var:
      return read_var(e->text, fr, view, e->span);
    case ExprKind::Deref: {
      std::int64_t p = read_var(e->text, fr, view, e->span);
      const auto &heap = view ? view->heap : st_.heap;
      if (p < 0 || p >= static_cast<std::int64_t>(heap.size()))
        throw NotExecutable("dereference of an unallocated cell", e->span);
      return heap[static_cast<std::size_t>(p)];
    }
    case ExprKind::Unary: {
      std::int64_t a = eval(e->args[0], fr, view);
      if (e->unop == UnOp::Not)
        return a == 0;
      if (__builtin_sub_overflow(std::int64_t{0}, a, &r))
        throw Overflow("overflow in negation", e->span);
      return r;
    }
    case ExprKind::Binary:
      return binary(e, fr, view);
    case ExprKind::Ite:
      return eval(e->args[0], fr, view) ? eval(e->args[1], fr, view)
                                        : eval(e->args[2], fr, view);
    case ExprKind::At: {
      const std::string &l = e->text;
      if (l == "Here" || l == "Post")
        return eval(e->args[0], fr, view);
      if (l == "Pre" || l == "Old")
        return eval(e->args[0], fr, &fr.pre);
      auto it = st_.snapshots.find(l);
      if (it == st_.snapshots.end())
        throw NotExecutable("no snapshot for label " + l, e->span);
      return eval(e->args[0], fr, &it->second);
    }
    case ExprKind::App: {
      auto it = impl_.find(e->text);
      if (it == impl_.end() || !e->labels.empty())
        throw NotExecutable("logic symbol '" + e->text + "' has no executable definition",
                            e->span);
      std::vector<std::int64_t> args;
      for (const auto &a : e->args)
        args.push_back(eval(a, fr, view));
      return call(*it->second, args).value_or(0);
    }
    case ExprKind::Separated:
      return read_var(e->args[0]->text, fr, view, e->span) !=
             read_var(e->args[1]->text, fr, view, e->span);
    case ExprKind::Result:
    case ExprKind::FloatLit:
    case ExprKind::CallResult:
    case ExprKind::CallPure:
    case ExprKind::Quant:
      throw NotExecutable("annotation construct cannot be checked at run time", e->span);
    }
    return 0;
  }

  std::int64_t binary(const ExprPtr &e, Frame &fr, const Snapshot *view) {
    BinOp op = e->binop;
    if (op == BinOp::And)
      return eval(e->args[0], fr, view) && eval(e->args[1], fr, view);
    if (op == BinOp::Or)
      return eval(e->args[0], fr, view) || eval(e->args[1], fr, view);
    if (op == BinOp::Implies)
      return !eval(e->args[0], fr, view) || eval(e->args[1], fr, view);
    std::int64_t a = eval(e->args[0], fr, view);
    std::int64_t b = eval(e->args[1], fr, view);
    std::int64_t r = 0;
    bool over = false;
    switch (op) {
    case BinOp::Add:
      over = __builtin_add_overflow(a, b, &r);
      break;
    case BinOp::Sub:
      over = __builtin_sub_overflow(a, b, &r);
      break;
    case BinOp::Mul:
      over = __builtin_mul_overflow(a, b, &r);
      break;
    case BinOp::Div:
      if (b == 0)
        throw DivisionByZero("division by zero", e->span);
      if (a == INT64_MIN && b == -1)
        throw Overflow("overflow in division", e->span);
      return a / b;
    case BinOp::Eq:
      return a == b;
    case BinOp::Ne:
      return a != b;
    case BinOp::Lt:
      return a < b;
    case BinOp::Le:
      return a <= b;
    case BinOp::Gt:
      return a > b;
    case BinOp::Ge:
      return a >= b;
    default:
      break;
    }
    if (over)
      throw Overflow(std::string("overflow in '") + to_string(op) + "'", e->span);
    return r;
  }
};

State initial_state(const Program &prog) {
  State st;
  for (const auto *g : prog.globals())
    st.globals[g->name] = g->init && g->init->kind == ExprKind::IntLit ? g->init->value : 0;
  return st;
}

} // namespace

Execution interpret(const FunctionDef &fn, const Program &program,
                    const std::vector<std::int64_t> &args, State state, std::uint64_t fuel) {
  Execution out;
  Interp in(program, state, fuel);
  out.value = in.call(fn, args);
  out.state = std::move(state);
  return out;
}

std::vector<std::string> input_slots(const TransformedProgram &tp, const WrapperInfo &w) {
  const FunctionDef *fn = tp.program.find_function(w.function);
  std::vector<std::string> out;
  if (!fn)
    return out;
  for (const auto &f : fn->formals)
    if (f.type == Type::Int)
      out.push_back(f.name);
  for (const auto &f : fn->formals)
    if (f.type == Type::IntPtr)
      out.push_back("*" + f.name);
  std::set<std::string> globals;
  auto note = [&](const std::string &n) {
    if (tp.program.find_global(n) && !fn->find_formal(n))
      globals.insert(n);
  };
  visit(fn->body, [&](const Stmt &s) {
    if (s.kind == StmtKind::Assign && !s.deref_target)
      note(s.name);
    if (s.kind == StmtKind::Call && !s.name.empty())
      note(s.name);
  });
  visit_exprs(fn->body, [&](const ExprPtr &e) {
    visit(e, [&](const Expr &x) {
      if (x.kind == ExprKind::Var)
        note(x.text);
    });
  });
  out.insert(out.end(), globals.begin(), globals.end());
  return out;
}

CheckReport run_wrapper(const TransformedProgram &tp, const WrapperInfo &w,
                        const InputVector &input, std::uint64_t fuel) {
  auto start = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.property = w.clause;
  rep.wrapper = w.function;
  rep.input = input;
  const FunctionDef *fn = tp.program.find_function(w.function);
  auto value = [&](const std::string &slot) {
    auto it = input.values.find(slot);
    return it == input.values.end() ? std::int64_t{0} : it->second;
  };

  State st = initial_state(tp.program);
  for (const auto &slot : input_slots(tp, w))
    if (slot[0] != '*' && !fn->find_formal(slot))
      st.globals[slot] = value(slot);
  std::vector<std::int64_t> args;
  for (const auto &f : fn->formals) {
    args.push_back(f.type == Type::IntPtr ? st.alloc(value("*" + f.name)) : value(f.name));
    if (f.type == Type::IntPtr)
      rep.cells[f.name] = args.back();
  }

  auto view = [&](const Snapshot &s) {
    Snapshot v = s;
    for (const auto &f : fn->formals)
      if (f.type == Type::IntPtr) {
        std::int64_t p = v.vars.count(f.name) ? v.vars[f.name] : -1;
        if (p >= 0 && p < static_cast<std::int64_t>(v.heap.size()))
          v.vars["*" + f.name] = v.heap[static_cast<std::size_t>(p)];
        v.vars.erase(f.name);
      }
    v.heap.clear();
    return v;
  };

  Interp in(tp.program, st, fuel);
  Snapshot pre;
  pre.vars = st.globals;
  for (std::size_t i = 0; i < fn->formals.size(); ++i)
    pre.vars[fn->formals[i].name] = args[i];
  pre.heap = st.heap;
  rep.trace.emplace_back("Pre", view(pre));
  try {
    for (const auto &r : fn->contract.requires_)
      if (!in.holds_on_entry(*fn, args, r)) {
        rep.precondition_met = false;
        rep.message = "input outside the wrapper precondition";
      }
    if (rep.precondition_met) {
      in.call(*fn, args);
      Snapshot here;
      here.vars = st.globals;
      for (std::size_t i = 0; i < fn->formals.size(); ++i)
        if (fn->formals[i].type == Type::IntPtr)
          here.vars[fn->formals[i].name] = args[i];
      here.heap = st.heap;
      rep.trace.emplace_back("Here", view(here));
    }
  } catch (const AssertViolated &e) {
    rep.outcome = Outcome::Fail;
    rep.assertion = e.id();
    rep.message = e.what();
    rep.trace.emplace_back("Here", view(e.state()));
  } catch (const RuntimeError &e) {
    rep.outcome = Outcome::Error;
    rep.message = e.what();
  }
  std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
  rep.seconds = d.count();
  return rep;
}

SearchResult find_counterexample(const TransformedProgram &tp, const WrapperInfo &w,
                                 const Strategy &strategy, double budget_seconds) {
  auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    return budget_seconds > 0 && d.count() > budget_seconds;
  };
  SearchResult res;
  auto slots = input_slots(tp, w);
  auto try_vector = [&](const InputVector &v) {
    ++res.tried;
    auto rep = run_wrapper(tp, w, v);
    return rep.outcome == Outcome::Fail && rep.precondition_met;
  };

  if (strategy.kind == Strategy::Kind::Exhaustive) {
    std::int64_t b = strategy.bound;
    std::vector<std::int64_t> cur(slots.size(), -b);
    while (true) {
      if (out_of_time()) {
        res.timed_out = true;
        return res;
      }
      InputVector v;
      for (std::size_t i = 0; i < slots.size(); ++i)
        v.values[slots[i]] = cur[i];
      if (try_vector(v)) {
        res.counterexample = v;
        return res;
      }
      std::size_t i = slots.size();
      while (i > 0 && cur[i - 1] == b)
        cur[--i] = -b;
      if (i == 0) {
        res.exhausted = true;
        return res;
      }
      ++cur[i - 1];
    }
  }

  std::mt19937_64 rng(strategy.seed);
  std::uniform_int_distribution<int> pick10(0, 9);
  std::uniform_int_distribution<int> pick3(-1, 1);
  std::uniform_int_distribution<std::int64_t> wide(-(1 << 16), 1 << 16);
  for (std::uint64_t t = 0; strategy.trials == 0 || t < strategy.trials; ++t) {
    if (out_of_time()) {
      res.timed_out = true;
      return res;
    }
    InputVector v;
    for (const auto &s : slots)
      v.values[s] = pick10(rng) == 0 ? pick3(rng) : wide(rng);
    if (try_vector(v)) {
      res.counterexample = v;
      return res;
    }
  }
  return res;
}

const WrapperInfo *find_property(const TransformedProgram &tp, const std::string &property) {
  for (const auto &w : tp.wrappers)
    if (w.clause == property)
      return &w;
  for (const auto &w : tp.wrappers)
    if (w.function == property)
      return &w;
  return nullptr;
}

std::vector<CheckReport> runtime_check(const TransformedProgram &tp,
                                       const std::vector<PropertyVector> &vectors) {
  std::vector<CheckReport> out;
  for (const auto &v : vectors) {
    const WrapperInfo *w = find_property(tp, v.property);
    if (!w) {
      CheckReport r;
      r.property = v.property;
      r.outcome = Outcome::Error;
      r.message = "unknown property '" + v.property + "'";
      r.input = v.input;
      out.push_back(std::move(r));
      continue;
    }
    out.push_back(run_wrapper(tp, *w, v.input));
  }
  return out;
}

std::string counterexample_json(const std::string &property, const std::string &wrapper,
                                const InputVector &input, const Strategy &strategy) {
  nlohmann::ordered_json j;
  j["property"] = property;
  j["wrapper"] = wrapper;
  j["assignment"] = nlohmann::ordered_json::object();
  for (const auto &[k, v] : input.values)
    j["assignment"][k] = v;
  j["seed"] = strategy.seed;
  j["strategy"] = strategy.kind == Strategy::Kind::Exhaustive ? "exhaustive" : "random";
  j["bound"] = strategy.bound;
  return j.dump(2) + "\n";
}

std::vector<PropertyVector> parse_counterexamples(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("malformed counterexample JSON: ") + e.what());
  }
  std::vector<nlohmann::json> items;
  if (j.is_array())
    items.assign(j.begin(), j.end());
  else
    items.push_back(j);
  std::vector<PropertyVector> out;
  for (const auto &it : items) {
    if (!it.is_object() || !it.contains("property") || !it["property"].is_string() ||
        !it.contains("assignment") || !it["assignment"].is_object())
      throw Error("malformed counterexample JSON: expected {property, assignment, ...}");
    PropertyVector pv;
    pv.property = it["property"].get<std::string>();
    for (const auto &[k, v] : it["assignment"].items()) {
      if (!v.is_number_integer())
        throw Error("malformed counterexample JSON: non-integer value for '" + k + "'");
      pv.input.values[k] = v.get<std::int64_t>();
    }
    out.push_back(std::move(pv));
  }
  return out;
}

} // namespace relprop
