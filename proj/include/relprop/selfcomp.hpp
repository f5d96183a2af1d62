#pragma once
// Self-composition of relational clauses: per clause, a wrapper function that
// inlines every call of the callset on its own copy of the state, and an
// axiomatic block restating the clause as a lemma over the callees' logic
// counterparts.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relprop/ast.hpp"
#include "relprop/validate.hpp"

namespace relprop {

class TransformError : public Error {
public:
  using Error::Error;
};

/// Deterministic supply of identifiers that avoids every reserved name by
/// appending underscores.
class NameSupply {
public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> reserved) : used_(std::move(reserved)) {}

  std::string fresh(const std::string &base);
  void reserve(const std::string &name) { used_.insert(name); }
  bool taken(const std::string &name) const { return used_.count(name) > 0; }

private:
  std::set<std::string> used_;
};

struct Renaming {
  std::string call_id;
  int index = 0;  // 1-based position of the call in the callset
  std::string callee;
  /// Global g -> duplicated global; Deref p -> duplicated pointer formal.
  std::map<Loc, std::string> state;
  /// Callee formals and locals -> wrapper locals.
  std::map<std::string, std::string> locals;
  std::optional<std::string> result;
};

/// Names used for the logic counterpart of each function (`f_acsl`).
std::string logic_name(const std::string &function, const Program &program);

std::vector<Renaming> make_renamings(const RelationalClause &clause,
                                     const Program &program);

std::vector<StmtPtr> inline_call(const CallSpec &spec, const Renaming &renaming,
                                 const Program &program, int depth);

ExprPtr translate_pred(const ExprPtr &pred, const std::vector<Renaming> &renamings,
                       const Program &program);

FunctionDef build_wrapper(const RelationalClause &clause, const Program &program,
                          int clause_index = 1);

Axiomatic build_axiomatic(const RelationalClause &clause, const Program &program,
                          int clause_index = 1);

struct WrapperInfo {
  std::string function;  // relational_wrapper_<n>
  std::string clause;    // source clause name
  std::string owner;     // function whose contract holds the clause
  std::string lemma;     // Relational_lemma_<n>
  std::string axiomatic; // Relational_axiom_<n>
  int index = 0;
};

struct ProvenanceEntry {
  std::string generated;
  std::string kind;  // wrapper, axiomatic, lemma, predicate, logic, behavior, global
  std::string clause;
};

struct TransformedProgram {
  Program program;
  std::vector<WrapperInfo> wrappers;
  std::vector<ProvenanceEntry> provenance;

  const WrapperInfo *wrapper_for_function(const std::string &fn) const;
  const WrapperInfo *wrapper_for_lemma(const std::string &lemma) const;
};

/// Throws TransformError (aggregating every per-clause failure) or Error when
/// the input does not validate.
TransformedProgram transform(const Program &program);

std::string provenance_json(const TransformedProgram &tp);

} // namespace relprop
