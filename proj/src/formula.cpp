#include <algorithm>
#include <climits>
#include <optional>
#include <sstream>

#include "relprop/vcgen.hpp"

namespace relprop {

bool operator==(const Formula &a, const Formula &b) {
  if (a.kind != b.kind || a.value != b.value || a.name != b.name || a.pre != b.pre ||
      a.predicate != b.predicate || a.binders != b.binders ||
      a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same(a.args[i], b.args[i]))
      return false;
  return true;
}

bool same(const FormulaPtr &a, const FormulaPtr &b) {
  if (a == b)
    return true;
  if (!a || !b)
    return false;
  return *a == *b;
}

bool is_bool_sorted(const Formula &f) {
  switch (f.kind) {
  case FKind::Int:
  case FKind::Var:
  case FKind::Neg:
  case FKind::Add:
  case FKind::Sub:
  case FKind::Mul:
  case FKind::Div:
  case FKind::Ite:
    return false;
  case FKind::App:
    return f.predicate;
  default:
    return true;
  }
}

namespace fm {

namespace {

FormulaPtr make(FKind k, std::vector<FormulaPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->args = std::move(args);
  return f;
}

bool is_lit(const FormulaPtr &f, FKind k) { return f->kind == k; }
bool is_true(const FormulaPtr &f) { return f->kind == FKind::Bool && f->value; }
bool is_false(const FormulaPtr &f) { return f->kind == FKind::Bool && !f->value; }

std::optional<std::int64_t> fold(FKind k, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  switch (k) {
  case FKind::Add:
    if (__builtin_add_overflow(a, b, &r))
      return std::nullopt;
    return r;
  case FKind::Sub:
    if (__builtin_sub_overflow(a, b, &r))
      return std::nullopt;
    return r;
  case FKind::Mul:
    if (__builtin_mul_overflow(a, b, &r))
      return std::nullopt;
    return r;
  case FKind::Div:
    if (b == 0 || (a == INT64_MIN && b == -1))
      return std::nullopt;
    return a / b;
  default:
    return std::nullopt;
  }
}

} // namespace

FormulaPtr int_(std::int64_t v) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Int;
  f->value = v;
  return f;
}

FormulaPtr bool_(bool b) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Bool;
  f->value = b ? 1 : 0;
  return f;
}

FormulaPtr truth() { return bool_(true); }

FormulaPtr var(std::string name, bool pre) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Var;
  f->name = std::move(name);
  f->pre = pre;
  return f;
}

FormulaPtr neg(FormulaPtr a) {
  if (is_lit(a, FKind::Int) && a->value != INT64_MIN)
    return int_(-a->value);
  return make(FKind::Neg, {std::move(a)});
}

FormulaPtr bin(FKind k, FormulaPtr a, FormulaPtr b) {
  switch (k) {
  case FKind::And:
    return and_(a, b);
  case FKind::Or:
    return or_(a, b);
  case FKind::Implies:
    return implies(a, b);
  default:
    break;
  }
  if (is_lit(a, FKind::Int) && is_lit(b, FKind::Int)) {
    std::int64_t x = a->value, y = b->value;
    switch (k) {
    case FKind::Eq:
      return bool_(x == y);
    case FKind::Ne:
      return bool_(x != y);
    case FKind::Lt:
      return bool_(x < y);
    case FKind::Le:
      return bool_(x <= y);
    case FKind::Gt:
      return bool_(x > y);
    case FKind::Ge:
      return bool_(x >= y);
    default:
      if (auto r = fold(k, x, y))
        return int_(*r);
    }
  }
  return make(k, {std::move(a), std::move(b)});
}

FormulaPtr not_(FormulaPtr a) {
  if (a->kind == FKind::Bool)
    return bool_(!a->value);
  if (a->kind == FKind::Not)
    return a->args[0];
  return make(FKind::Not, {std::move(a)});
}

FormulaPtr and_(FormulaPtr a, FormulaPtr b) {
  if (is_true(a))
    return b;
  if (is_true(b))
    return a;
  if (is_false(a) || is_false(b))
    return bool_(false);
  return make(FKind::And, {std::move(a), std::move(b)});
}

FormulaPtr and_(const std::vector<FormulaPtr> &parts) {
  FormulaPtr out = truth();
  for (auto it = parts.rbegin(); it != parts.rend(); ++it)
    out = and_(*it, out);
  return out;
}

FormulaPtr or_(FormulaPtr a, FormulaPtr b) {
  if (is_false(a))
    return b;
  if (is_false(b))
    return a;
  if (is_true(a) || is_true(b))
    return bool_(true);
  return make(FKind::Or, {std::move(a), std::move(b)});
}

FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  if (is_true(a))
    return b;
  if (is_false(a) || is_true(b))
    return bool_(true);
  return make(FKind::Implies, {std::move(a), std::move(b)});
}

FormulaPtr ite(FormulaPtr c, FormulaPtr a, FormulaPtr b) {
  if (c->kind == FKind::Bool)
    return c->value ? a : b;
  if (same(a, b))
    return a;
  return make(FKind::Ite, {std::move(c), std::move(a), std::move(b)});
}

FormulaPtr app(std::string sym, std::vector<FormulaPtr> args, bool predicate) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::App;
  f->name = std::move(sym);
  f->predicate = predicate;
  f->args = std::move(args);
  return f;
}

FormulaPtr quant(FKind q, std::vector<std::string> binders, FormulaPtr body) {
  if (body->kind == FKind::Bool)
    return body;
  auto fv = free_vars(body);
  std::vector<std::string> used;
  for (auto &b : binders)
    if (fv.count(b) && std::find(used.begin(), used.end(), b) == used.end())
      used.push_back(b);
  if (used.empty())
    return body;
  auto f = std::make_shared<Formula>();
  f->kind = q;
  f->binders = std::move(used);
  f->args = {std::move(body)};
  return f;
}

} // namespace fm

namespace {

FormulaPtr rebuild(const Formula &f, std::vector<FormulaPtr> args) {
  switch (f.kind) {
  case FKind::Neg:
    return fm::neg(args[0]);
  case FKind::Not:
    return fm::not_(args[0]);
  case FKind::Ite:
    return fm::ite(args[0], args[1], args[2]);
  case FKind::App:
    return fm::app(f.name, std::move(args), f.predicate);
  case FKind::Forall:
  case FKind::Exists:
    return fm::quant(f.kind, f.binders, args[0]);
  default:
    return fm::bin(f.kind, args[0], args[1]);
  }
}

void free_rec(const FormulaPtr &f, std::set<std::string> &bound, std::set<std::string> &out) {
  switch (f->kind) {
  case FKind::Var:
    if (f->pre)
      out.insert(f->name + "@Pre");
    else if (!bound.count(f->name))
      out.insert(f->name);
    return;
  case FKind::Forall:
  case FKind::Exists: {
    std::vector<std::string> added;
    for (const auto &b : f->binders)
      if (bound.insert(b).second)
        added.push_back(b);
    free_rec(f->args[0], bound, out);
    for (const auto &b : added)
      bound.erase(b);
    return;
  }
  default:
    for (const auto &a : f->args)
      free_rec(a, bound, out);
  }
}

} // namespace

std::set<std::string> free_vars(const FormulaPtr &f) {
  std::set<std::string> bound, out;
  free_rec(f, bound, out);
  return out;
}

FormulaPtr substitute(const FormulaPtr &f, const std::map<std::string, FormulaPtr> &sub) {
  if (sub.empty())
    return f;
  switch (f->kind) {
  case FKind::Int:
  case FKind::Bool:
    return f;
  case FKind::Var: {
    if (f->pre)
      return f;
    auto it = sub.find(f->name);
    return it == sub.end() ? f : it->second;
  }
  case FKind::Forall:
  case FKind::Exists: {
    std::map<std::string, FormulaPtr> inner = sub;
    for (const auto &b : f->binders)
      inner.erase(b);
    std::set<std::string> range;
    for (const auto &[k, v] : inner) {
      auto fv = free_vars(v);
      range.insert(fv.begin(), fv.end());
    }
    std::vector<std::string> binders = f->binders;
    FormulaPtr body = f->args[0];
    auto body_fv = free_vars(body);
    for (auto &b : binders) {
      if (!range.count(b))
        continue;
      std::string fresh = b + "'";
      while (range.count(fresh) || body_fv.count(fresh) ||
             std::find(binders.begin(), binders.end(), fresh) != binders.end())
        fresh += "'";
      body = substitute(body, {{b, fm::var(fresh)}});
      b = fresh;
    }
    return fm::quant(f->kind, binders, substitute(body, inner));
  }
  default: {
    std::vector<FormulaPtr> args;
    bool changed = false;
    for (const auto &a : f->args) {
      args.push_back(substitute(a, sub));
      changed |= args.back() != a;
    }
    return changed ? rebuild(*f, std::move(args)) : f;
  }
  }
}

FormulaPtr strip_pre(const FormulaPtr &f) {
  switch (f->kind) {
  case FKind::Int:
  case FKind::Bool:
    return f;
  case FKind::Var:
    return f->pre ? fm::var(f->name) : f;
  default: {
    std::vector<FormulaPtr> args;
    bool changed = false;
    for (const auto &a : f->args) {
      args.push_back(strip_pre(a));
      changed |= args.back() != a;
    }
    return changed ? rebuild(*f, std::move(args)) : f;
  }
  }
}

void collect_symbols(const FormulaPtr &f, std::map<std::string, Symbol> &out) {
  if (f->kind == FKind::App) {
    Symbol s{f->args.size(), f->predicate};
    auto [it, inserted] = out.emplace(f->name, s);
    if (!inserted && !(it->second == s))
      throw Error("symbol '" + f->name + "' used with inconsistent arity or sort");
  }
  for (const auto &a : f->args)
    collect_symbols(a, out);
}

namespace {

int prec(FKind k) {
  switch (k) {
  case FKind::Forall:
  case FKind::Exists:
    return 0;
  case FKind::Implies:
    return 1;
  case FKind::Or:
    return 2;
  case FKind::And:
    return 3;
  case FKind::Not:
    return 8;
  case FKind::Eq:
  case FKind::Ne:
  case FKind::Lt:
  case FKind::Le:
  case FKind::Gt:
  case FKind::Ge:
    return 4;
  case FKind::Add:
  case FKind::Sub:
    return 5;
  case FKind::Mul:
  case FKind::Div:
    return 6;
  case FKind::Neg:
    return 7;
  default:
    return 9;
  }
}

const char *op(FKind k) {
  switch (k) {
  case FKind::Add: return " + ";
  case FKind::Sub: return " - ";
  case FKind::Mul: return " * ";
  case FKind::Div: return " / ";
  case FKind::Eq: return " == ";
  case FKind::Ne: return " != ";
  case FKind::Lt: return " < ";
  case FKind::Le: return " <= ";
  case FKind::Gt: return " > ";
  case FKind::Ge: return " >= ";
  case FKind::And: return " && ";
  case FKind::Or: return " || ";
  case FKind::Implies: return " ==> ";
  default: return " ? ";
  }
}

void print(std::ostream &os, const FormulaPtr &f, int ctx) {
  int p = prec(f->kind);
  bool paren = p < ctx || (p == 0 && ctx > 0);
  if (paren)
    os << "(";
  switch (f->kind) {
  case FKind::Int:
    os << f->value;
    break;
  case FKind::Bool:
    os << (f->value ? "\\true" : "\\false");
    break;
  case FKind::Var:
    if (f->pre)
      os << "\\at(" << f->name << ", Pre)";
    else
      os << f->name;
    break;
  case FKind::Neg:
    os << "-";
    print(os, f->args[0], 8);
    break;
  case FKind::Not:
    os << "!";
    print(os, f->args[0], 9);
    break;
  case FKind::Ite:
    os << "(";
    print(os, f->args[0], 1);
    os << " ? ";
    print(os, f->args[1], 1);
    os << " : ";
    print(os, f->args[2], 1);
    os << ")";
    break;
  case FKind::App:
    os << f->name << "(";
    for (std::size_t i = 0; i < f->args.size(); ++i) {
      if (i)
        os << ", ";
      print(os, f->args[i], 0);
    }
    os << ")";
    break;
  case FKind::Forall:
  case FKind::Exists:
    os << (f->kind == FKind::Forall ? "\\forall int " : "\\exists int ");
    for (std::size_t i = 0; i < f->binders.size(); ++i)
      os << (i ? ", " : "") << f->binders[i];
    os << "; ";
    print(os, f->args[0], 0);
    break;
  case FKind::Implies:
    print(os, f->args[0], p + 1);
    os << op(f->kind);
    print(os, f->args[1], p);
    break;
  default:
    print(os, f->args[0], p);
    os << op(f->kind);
    print(os, f->args[1], p + 1);
    break;
  }
  if (paren)
    os << ")";
}

} // namespace

std::string to_string(const FormulaPtr &f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

} // namespace relprop
