// Bounded-domain validity checking of verification conditions.

#include <algorithm>
#include <chrono>
#include <climits>
#include <map>

#include "relprop/vcgen.hpp"

namespace relprop {

namespace {

struct Overflow {};

struct Key {
  int sym;
  std::vector<std::int64_t> args;
  bool operator<(const Key &o) const {
    return sym != o.sym ? sym < o.sym : args < o.args;
  }
};

struct NeedChoice {
  Key key;
};

// Formula compiled against variable slots and symbol ids.
struct Node {
  FKind kind;
  std::int64_t value = 0;
  int slot = -1;
  int sym = -1;
  std::vector<Node> kids;
  std::vector<int> binder_slots;
};

struct SymInfo {
  std::string name;
  bool predicate = false;
};

const std::string kDiv0 = "/div0";

struct Problem {
  std::vector<FormulaPtr> ground;
  std::vector<FormulaPtr> quantified;
  FormulaPtr goal;
};

class Checker {
public:
  Checker(const BoundedOptions &opts, std::uint64_t &nodes,
          std::chrono::steady_clock::time_point start)
      : opts_(opts), nodes_(nodes), start_(start) {
    for (std::int64_t v = 0; v <= opts.bound; ++v) {
      if (v == 0) {
        domain_.push_back(0);
        continue;
      }
      domain_.push_back(v);
      domain_.push_back(-v);
    }
    syms_.push_back({kDiv0, false});
    sym_ids_[kDiv0] = 0;
  }

  // Returns Valid, Counterexample or Unknown for one sub-problem.
  BoundedResult run(Problem p) {
    eliminate_definitions(p);

    std::set<std::string> names;
    for (const auto &g : p.ground)
      for (const auto &v : free_vars(g))
        names.insert(v);
    for (const auto &v : free_vars(p.goal))
      names.insert(v);
    for (const auto &q : p.quantified)
      for (const auto &v : free_vars(q))
        names.insert(v);
    vars_.assign(names.begin(), names.end());
    for (std::size_t i = 0; i < vars_.size(); ++i)
      slots_[vars_[i]] = static_cast<int>(i);
    next_slot_ = static_cast<int>(vars_.size());
    abstracted_ = std::any_of(vars_.begin(), vars_.end(),
                              [](const std::string &v) { return v.find('#') != std::string::npos; });

    // Actions: assign variable i, then every check whose variables are all
    // assigned by then.
    std::vector<std::pair<int, Node>> checks;  // (last slot, node)
    for (const auto &g : p.ground)
      checks.emplace_back(last_slot(g), compile(g));
    int goal_last = last_slot(p.goal);
    goal_ = compile(p.goal);
    for (const auto &q : p.quantified)
      foralls_.push_back(compile(q));
    values_.assign(next_slot_, 0);

    for (int i = -1; i < static_cast<int>(vars_.size()); ++i) {
      if (i >= 0)
        actions_.push_back({Action::Assign, i, nullptr});
      for (auto &[last, node] : checks)
        if (last == i)
          actions_.push_back({Action::Hyp, i, &node});
      if (goal_last == i)
        actions_.push_back({Action::Goal, i, &goal_});
    }

    BoundedResult r;
    if (step(0)) {
      bool genuine = !used_table_ && !abstracted_ && !approx_;
      if (genuine) {
        r.status = Status::Counterexample;
        for (std::size_t i = 0; i < vars_.size(); ++i)
          r.assignment[vars_[i]] = found_[i];
        if (!report_definitions(r)) {
          r.status = Status::Unknown;
          r.assignment.clear();
          r.reason = "falsifying input defined through an uninterpreted symbol";
        }
      } else {
        r.status = Status::Unknown;
        r.reason = abstracted_ ? "falsifiable over abstracted call or loop values"
                               : "falsifiable only under an uninterpreted-symbol choice";
      }
      return r;
    }
    if (incomplete_) {
      r.status = Status::Unknown;
      r.reason = "arithmetic overflow during enumeration";
      return r;
    }
    r.status = Status::Valid;
    return r;
  }

private:
  enum class Action { Assign, Hyp, Goal };
  struct Act {
    Action kind;
    int slot;
    const Node *node;
  };

  const BoundedOptions &opts_;
  std::uint64_t &nodes_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::int64_t> domain_;
  std::vector<std::string> vars_;
  std::map<std::string, int> slots_;
  int next_slot_ = 0;
  std::vector<SymInfo> syms_;
  std::map<std::string, int> sym_ids_;
  std::vector<Act> actions_;
  Node goal_;
  std::vector<Node> foralls_;
  std::vector<std::int64_t> values_;
  std::map<Key, std::int64_t> table_;
  std::vector<std::int64_t> found_;
  std::vector<std::pair<std::string, FormulaPtr>> defs_;
  bool abstracted_ = false;
  bool approx_ = false;
  bool used_table_ = false;
  bool incomplete_ = false;

  void tick() {
    if (++nodes_ > opts_.node_budget)
      throw BudgetExceeded("node budget exceeded");
    if (opts_.seconds > 0 && (nodes_ & 0xfff) == 0) {
      std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
      if (d.count() > opts_.seconds)
        throw BudgetExceeded("time budget exceeded");
    }
  }

  // ---- preprocessing

  static std::optional<std::pair<std::string, FormulaPtr>> definition(const FormulaPtr &h) {
    if (h->kind != FKind::Eq)
      return std::nullopt;
    for (int side = 0; side < 2; ++side) {
      const auto &v = h->args[side];
      const auto &t = h->args[1 - side];
      if (v->kind == FKind::Var && !v->pre && !free_vars(t).count(v->name))
        return std::make_pair(v->name, t);
    }
    return std::nullopt;
  }

  void eliminate_definitions(Problem &p) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < p.ground.size(); ++i) {
        auto d = definition(p.ground[i]);
        if (!d)
          continue;
        std::map<std::string, FormulaPtr> sub{{d->first, d->second}};
        p.ground.erase(p.ground.begin() + static_cast<long>(i));
        for (auto &g : p.ground)
          g = substitute(g, sub);
        for (auto &q : p.quantified)
          q = substitute(q, sub);
        p.goal = substitute(p.goal, sub);
        for (auto &[n, t] : defs_)
          t = substitute(t, sub);
        defs_.emplace_back(d->first, d->second);
        changed = true;
        break;
      }
    }
  }

  bool report_definitions(BoundedResult &r) {
    values_.assign(next_slot_, 0);
    for (std::size_t i = 0; i < vars_.size(); ++i)
      values_[i] = found_[i];
    for (const auto &[name, term] : defs_) {
      if (name.find('#') != std::string::npos)
        continue;
      // Variables left only in definitions are unconstrained; any value works.
      for (const auto &v : free_vars(term))
        if (!slots_.count(v)) {
          slots_[v] = next_slot_++;
          r.assignment[v] = 0;
        }
      try {
        Node n = compile(term);
        values_.resize(next_slot_, 0);
        r.assignment[name] = eval_int(n);
      } catch (...) {
        return false;  // the value would depend on a symbol table entry
      }
    }
    for (auto it = r.assignment.begin(); it != r.assignment.end();)
      it = it->first.find('#') != std::string::npos ? r.assignment.erase(it) : std::next(it);
    return true;
  }

  int last_slot(const FormulaPtr &f) const {
    int last = -1;
    for (const auto &v : free_vars(f))
      last = std::max(last, slots_.at(v));
    return last;
  }

  int symbol(const std::string &name, bool predicate) {
    auto it = sym_ids_.find(name);
    if (it != sym_ids_.end())
      return it->second;
    int id = static_cast<int>(syms_.size());
    syms_.push_back({name, predicate});
    sym_ids_[name] = id;
    return id;
  }

  Node compile(const FormulaPtr &f, const std::map<std::string, int> &bound = {}) {
    Node n;
    n.kind = f->kind;
    n.value = f->value;
    switch (f->kind) {
    case FKind::Var: {
      std::string key = f->pre ? f->name + "@Pre" : f->name;
      if (auto it = bound.find(f->name); it != bound.end() && !f->pre)
        n.slot = it->second;
      else
        n.slot = slots_.at(key);
      return n;
    }
    case FKind::Forall:
    case FKind::Exists: {
      auto inner = bound;
      for (const auto &b : f->binders) {
        inner[b] = next_slot_;
        n.binder_slots.push_back(next_slot_++);
      }
      n.kids.push_back(compile(f->args[0], inner));
      return n;
    }
    case FKind::App:
      n.sym = symbol(f->name, f->predicate);
      break;
    default:
      break;
    }
    for (const auto &a : f->args)
      n.kids.push_back(compile(a, bound));
    return n;
  }

  // ---- evaluation

  static void check(bool overflow) {
    if (overflow)
      throw Overflow{};
  }

  std::int64_t lookup(Key k) {
    auto it = table_.find(k);
    if (it == table_.end())
      throw NeedChoice{std::move(k)};
    return it->second;
  }

  std::int64_t eval_int(const Node &n) {
    std::int64_t r = 0;
    switch (n.kind) {
    case FKind::Int:
      return n.value;
    case FKind::Var:
      return values_[n.slot];
    case FKind::Neg: {
      std::int64_t a = eval_int(n.kids[0]);
      check(__builtin_sub_overflow(std::int64_t{0}, a, &r));
      return r;
    }
    case FKind::Add: {
      std::int64_t a = eval_int(n.kids[0]), b = eval_int(n.kids[1]);
      check(__builtin_add_overflow(a, b, &r));
      return r;
    }
    case FKind::Sub: {
      std::int64_t a = eval_int(n.kids[0]), b = eval_int(n.kids[1]);
      check(__builtin_sub_overflow(a, b, &r));
      return r;
    }
    case FKind::Mul: {
      std::int64_t a = eval_int(n.kids[0]), b = eval_int(n.kids[1]);
      check(__builtin_mul_overflow(a, b, &r));
      return r;
    }
    case FKind::Div: {
      std::int64_t a = eval_int(n.kids[0]), b = eval_int(n.kids[1]);
      if (b == 0)
        return lookup({0, {a}});
      if (a == INT64_MIN && b == -1)
        throw Overflow{};
      return a / b;
    }
    case FKind::Ite:
      return eval_bool(n.kids[0]) ? eval_int(n.kids[1]) : eval_int(n.kids[2]);
    case FKind::App: {
      Key k{n.sym, {}};
      for (const auto &a : n.kids)
        k.args.push_back(eval_int(a));
      return lookup(std::move(k));
    }
    default:
      return eval_bool(n) ? 1 : 0;
    }
  }

  bool eval_bool(const Node &n) {
    switch (n.kind) {
    case FKind::Bool:
      return n.value != 0;
    case FKind::Eq:
      return eval_int(n.kids[0]) == eval_int(n.kids[1]);
    case FKind::Ne:
      return eval_int(n.kids[0]) != eval_int(n.kids[1]);
    case FKind::Lt:
      return eval_int(n.kids[0]) < eval_int(n.kids[1]);
    case FKind::Le:
      return eval_int(n.kids[0]) <= eval_int(n.kids[1]);
    case FKind::Gt:
      return eval_int(n.kids[0]) > eval_int(n.kids[1]);
    case FKind::Ge:
      return eval_int(n.kids[0]) >= eval_int(n.kids[1]);
    case FKind::Not:
      return !eval_bool(n.kids[0]);
    case FKind::And:
      return eval_bool(n.kids[0]) && eval_bool(n.kids[1]);
    case FKind::Or:
      return eval_bool(n.kids[0]) || eval_bool(n.kids[1]);
    case FKind::Implies:
      return !eval_bool(n.kids[0]) || eval_bool(n.kids[1]);
    case FKind::App: {
      Key k{n.sym, {}};
      for (const auto &a : n.kids)
        k.args.push_back(eval_int(a));
      return lookup(std::move(k)) != 0;
    }
    case FKind::Forall:
    case FKind::Exists: {
      approx_ = true;
      return eval_quant(n, 0);
    }
    default:
      return eval_int(n) != 0;
    }
  }

  bool eval_quant(const Node &n, std::size_t i) {
    bool all = n.kind == FKind::Forall;
    if (i == n.binder_slots.size())
      return eval_bool(n.kids[0]);
    for (std::int64_t v : domain_) {
      tick();
      values_[n.binder_slots[i]] = v;
      if (eval_quant(n, i + 1) != all)
        return !all;
    }
    return all;
  }

  // ---- search

  std::vector<std::int64_t> choices(const Key &k) const {
    if (syms_[k.sym].predicate)
      return {0, 1};
    return domain_;
  }

  bool step(std::size_t k) {
    if (k == actions_.size())
      return leaf();
    const Act &a = actions_[k];
    if (a.kind == Action::Assign) {
      for (std::int64_t v : domain_) {
        tick();
        values_[a.slot] = v;
        if (step(k + 1))
          return true;
      }
      return false;
    }
    bool holds;
    try {
      holds = eval_bool(*a.node);
    } catch (NeedChoice &c) {
      Key key = c.key;
      for (std::int64_t v : choices(key)) {
        tick();
        table_[key] = v;
        if (step(k)) {
          table_.erase(key);
          return true;
        }
      }
      table_.erase(key);
      return false;
    } catch (Overflow &) {
      incomplete_ = true;
      return false;
    }
    bool wanted = a.kind == Action::Hyp;
    if (holds != wanted)
      return false;
    return step(k + 1);
  }

  // Instantiates universal hypotheses over the values the current symbol
  // table mentions; instances that need undefined entries are skipped.
  bool leaf() {
    for (const auto &q : foralls_) {
      if (q.kind != FKind::Forall) {
        continue;
      }
      if (!forall_consistent(q))
        return false;
    }
    used_table_ = !table_.empty();
    found_.assign(values_.begin(), values_.begin() + static_cast<long>(vars_.size()));
    return true;
  }

  void triggers(const Node &n, std::map<int, std::set<std::int64_t>> &cand,
                const std::set<int> &binders) {
    if (n.kind == FKind::App) {
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        const Node &a = n.kids[i];
        if (a.kind != FKind::Var || !binders.count(a.slot))
          continue;
        auto &set = cand[a.slot];
        for (const auto &[key, v] : table_)
          if (key.sym == n.sym && key.args.size() > i)
            set.insert(key.args[i]);
      }
    }
    for (const auto &c : n.kids)
      triggers(c, cand, binders);
  }

  bool forall_consistent(const Node &q) {
    std::set<int> binders(q.binder_slots.begin(), q.binder_slots.end());
    std::map<int, std::set<std::int64_t>> cand;
    triggers(q.kids[0], cand, binders);
    std::vector<std::vector<std::int64_t>> ranges;
    int unbound = 0;
    for (int s : q.binder_slots) {
      auto it = cand.find(s);
      if (it != cand.end()) {
        ranges.emplace_back(it->second.begin(), it->second.end());
      } else {
        ++unbound;
        ranges.push_back(domain_);
      }
    }
    if (unbound > 2)
      return true;
    std::vector<std::size_t> idx(ranges.size(), 0);
    for (const auto &r : ranges)
      if (r.empty())
        return true;
    while (true) {
      tick();
      for (std::size_t i = 0; i < idx.size(); ++i)
        values_[q.binder_slots[i]] = ranges[i][idx[i]];
      try {
        if (!eval_bool(q.kids[0]))
          return false;
      } catch (NeedChoice &) {
      } catch (Overflow &) {
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == ranges[i].size())
        idx[i++] = 0;
      if (i == idx.size())
        return true;
    }
  }
};

// Splits a goal into atomic conjuncts, each with the antecedents met on the
// way down.
void decompose(const FormulaPtr &goal, std::vector<FormulaPtr> hyps,
               std::set<std::string> &taken, std::vector<Problem> &out,
               const Problem &base) {
  switch (goal->kind) {
  case FKind::And:
    decompose(goal->args[0], hyps, taken, out, base);
    decompose(goal->args[1], hyps, taken, out, base);
    return;
  case FKind::Implies:
    hyps.push_back(goal->args[0]);
    decompose(goal->args[1], hyps, taken, out, base);
    return;
  case FKind::Forall: {
    std::map<std::string, FormulaPtr> sub;
    for (const auto &b : goal->binders) {
      std::string n = b;
      while (taken.count(n))
        n += "'";
      taken.insert(n);
      sub[b] = fm::var(n);
    }
    decompose(substitute(goal->args[0], sub), hyps, taken, out, base);
    return;
  }
  default:
    break;
  }
  Problem p = base;
  p.goal = goal;
  std::vector<FormulaPtr> todo = std::move(hyps);
  while (!todo.empty()) {
    FormulaPtr h = todo.back();
    todo.pop_back();
    if (h->kind == FKind::And) {
      todo.push_back(h->args[0]);
      todo.push_back(h->args[1]);
    } else if (h->kind == FKind::Forall) {
      p.quantified.push_back(h);
    } else if (!(h->kind == FKind::Bool && h->value)) {
      p.ground.push_back(h);
    }
  }
  out.push_back(std::move(p));
}

} // namespace

BoundedResult check_bounded(const VerificationCondition &vc, const BoundedOptions &opts) {
  auto start = std::chrono::steady_clock::now();
  std::set<std::string> taken;
  for (const auto &h : vc.hypotheses)
    for (const auto &v : free_vars(h.formula))
      taken.insert(v);
  for (const auto &v : free_vars(vc.goal))
    taken.insert(v);

  // Top-level existentials in hypotheses are Skolemized into free variables.
  std::vector<FormulaPtr> hyps;
  for (const auto &h : vc.hypotheses) {
    FormulaPtr f = h.formula;
    while (f->kind == FKind::Exists) {
      std::map<std::string, FormulaPtr> sub;
      for (const auto &b : f->binders) {
        std::string n = b;
        while (taken.count(n))
          n += "'";
        taken.insert(n);
        sub[b] = fm::var(n);
      }
      f = substitute(f->args[0], sub);
    }
    hyps.push_back(f);
  }

  std::vector<Problem> problems;
  decompose(vc.goal, hyps, taken, problems, Problem{});

  std::uint64_t nodes = 0;
  BoundedResult overall;
  overall.status = Status::Valid;
  for (auto &p : problems) {
    Checker c(opts, nodes, start);
    BoundedResult r = c.run(std::move(p));
    if (r.status == Status::Counterexample)
      return r;
    if (r.status == Status::Unknown && overall.status == Status::Valid)
      overall = r;
  }
  return overall;
}

BoundedResult check_bounded(const VerificationCondition &vc, std::int64_t bound) {
  BoundedOptions o;
  o.bound = bound;
  return check_bounded(vc, o);
}

} // namespace relprop
