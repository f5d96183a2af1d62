#pragma once
// Well-formedness checks and memory-footprint analysis over MiniC programs.

#include <set>

#include "relprop/ast.hpp"

namespace relprop {

/// Locations a function may write (`assigns` targets) and read (`\from`
/// sources). Only Global and Deref locations are state; formals, `\result`
/// and `\nothing` never appear here.
struct MemFootprint {
  std::set<Loc> writes;
  std::set<Loc> reads;

  std::set<Loc> all() const {
    std::set<Loc> out = writes;
    out.insert(reads.begin(), reads.end());
    return out;
  }
  bool operator==(const MemFootprint &) const = default;
};

/// Raised by footprint_of when the body touches a global or pointer cell the
/// declared `assigns` clauses do not cover.
class MissingAssigns : public Error {
public:
  using Error::Error;
};

/// Returns every violated invariant as a diagnostic. Never throws.
Diagnostics validate(const Program &program);

/// Declaration-driven footprint of `fn`, unioned with the footprints of the
/// functions it calls (callee pointer formals mapped to the actual argument).
MemFootprint footprint_of(const FunctionDef &fn, const Program &program);

/// Global and pointer-cell accesses performed syntactically by the body of
/// `fn` (calls excluded).
MemFootprint body_accesses(const FunctionDef &fn, const Program &program);

/// True when the function returns int and touches no global or pointer state.
bool is_pure(const FunctionDef &fn, const Program &program);

} // namespace relprop
