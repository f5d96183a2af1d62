#pragma once
// Weakest preconditions over MiniC, verification conditions with their
// hypothesis environments, SMT-LIB output and a bounded validity checker.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relprop/ast.hpp"
#include "relprop/selfcomp.hpp"

namespace relprop {

// ---------------------------------------------------------------------------
// Formulas

enum class FKind {
  Int,
  Bool,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,  // truncating, as in C
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Not,
  And,
  Or,
  Implies,
  Ite,  // int-valued conditional: args = cond, then, else
  App,  // uninterpreted function or predicate
  Forall,
  Exists,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind = FKind::Bool;
  std::int64_t value = 0;  // Int literal, or Bool literal (0/1)
  std::string name;        // Var name or App symbol
  bool pre = false;        // Var: value in the function pre-state
  bool predicate = false;  // App: Bool-sorted
  std::vector<FormulaPtr> args;
  std::vector<std::string> binders;  // Forall/Exists
};

bool operator==(const Formula &a, const Formula &b);
bool same(const FormulaPtr &a, const FormulaPtr &b);
bool is_bool_sorted(const Formula &f);

namespace fm {
FormulaPtr int_(std::int64_t v);
FormulaPtr bool_(bool b);
FormulaPtr truth();
FormulaPtr var(std::string name, bool pre = false);
FormulaPtr neg(FormulaPtr a);
FormulaPtr bin(FKind k, FormulaPtr a, FormulaPtr b);
FormulaPtr not_(FormulaPtr a);
FormulaPtr and_(FormulaPtr a, FormulaPtr b);
FormulaPtr and_(const std::vector<FormulaPtr> &parts);
FormulaPtr or_(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr ite(FormulaPtr c, FormulaPtr a, FormulaPtr b);
FormulaPtr app(std::string sym, std::vector<FormulaPtr> args, bool predicate);
FormulaPtr quant(FKind q, std::vector<std::string> binders, FormulaPtr body);
} // namespace fm

/// Capture-avoiding simultaneous substitution of non-pre variables.
FormulaPtr substitute(const FormulaPtr &f, const std::map<std::string, FormulaPtr> &sub);
/// Replaces every pre-state variable by its current-state counterpart.
FormulaPtr strip_pre(const FormulaPtr &f);
std::set<std::string> free_vars(const FormulaPtr &f);
std::string to_string(const FormulaPtr &f);

struct Symbol {
  std::size_t arity = 0;
  bool predicate = false;
  bool operator==(const Symbol &) const = default;
};

/// Uninterpreted symbols applied in `f`. Throws Error on inconsistent arity.
void collect_symbols(const FormulaPtr &f, std::map<std::string, Symbol> &out);

// ---------------------------------------------------------------------------
// Verification conditions

class MissingLoopInvariant : public Error {
public:
  using Error::Error;
};

struct Hypothesis {
  std::string name;
  FormulaPtr formula;
};

struct Provenance {
  std::string function;   // function, or axiomatic for lemma VCs
  std::string assertion;  // Rpp, assert_<n>, <label>, ensures_<n>, loop_<n>, call_<n>_pre, lemma name
  std::string kind;       // assert, ensures, loop, call_pre, lemma
  std::string clause;     // relational clause for wrapper and lemma VCs, else empty
  SourceSpan span;
};

struct VerificationCondition {
  std::string name;  // <function>__<assertion>
  FormulaPtr goal;
  std::vector<Hypothesis> hypotheses;
  Provenance provenance;
};

/// Translates a MiniC annotation or program expression inside `fn` (may be
/// null for lemma bodies).
FormulaPtr to_formula(const ExprPtr &e, const Program &program,
                      const FunctionDef *fn = nullptr);

/// Plain weakest precondition; every obligation met on the way (assertions,
/// loop invariants, call preconditions) is conjoined.
FormulaPtr wp(const StmtPtr &stmt, const FormulaPtr &post, const Program &program,
              const FunctionDef *fn = nullptr);

/// All VCs of the program. Lemmas named in `admitted` join the environment of
/// every VC except the wrapper VCs of their own clause.
std::vector<VerificationCondition> vcs_for(const TransformedProgram &tp,
                                           const std::set<std::string> &admitted = {});

std::string emit_smtlib(const VerificationCondition &vc);

// ---------------------------------------------------------------------------
// Bounded checking

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Status { Valid, Counterexample, Unknown };
const char *to_string(Status s);

struct BoundedResult {
  Status status = Status::Unknown;
  std::map<std::string, std::int64_t> assignment;
  std::string reason;
};

struct BoundedOptions {
  std::int64_t bound = 8;
  std::uint64_t node_budget = 400'000'000;
  double seconds = 0;  // wall-clock limit, 0 for none
};

/// Enumerates the free variables of each goal conjunct over [-bound, bound] in
/// the order 0, 1, -1, 2, ..., filling uninterpreted-symbol tables lazily.
/// A falsifying assignment is reported as Counterexample only when it depends
/// on no symbol table entry and no abstracted call or loop value; otherwise
/// the result is Unknown. Throws BudgetExceeded when the node or time budget
/// runs out.
BoundedResult check_bounded(const VerificationCondition &vc, const BoundedOptions &opts);
BoundedResult check_bounded(const VerificationCondition &vc, std::int64_t bound);

// ---------------------------------------------------------------------------
// Proving a transformed program

struct VcOutcome {
  VerificationCondition vc;
  Status status = Status::Unknown;
  std::map<std::string, std::int64_t> assignment;
  std::string note;
};

struct ProveOptions {
  BoundedOptions bounded;
  bool assume_lemmas = false;
};

/// Checks wrapper VCs first, in clause order; a clause whose wrapper VCs are
/// all Valid has its lemma admitted for the remaining VCs. Lemma VCs are Valid
/// when their wrapper is.
std::vector<VcOutcome> prove(const TransformedProgram &tp, const ProveOptions &opts);

} // namespace relprop
