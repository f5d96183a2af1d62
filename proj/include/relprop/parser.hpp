#pragma once
// Concrete syntax for MiniC: C-like functions and globals, with contracts,
// relational clauses, statement annotations and axiomatic blocks written in
// `/*@ ... */` or `//@ ...` comments.

#include <optional>
#include <string>
#include <string_view>

#include "relprop/ast.hpp"

namespace relprop {

struct ParseResult {
  std::optional<Program> program;
  Diagnostics diagnostics;

  bool ok() const { return program.has_value(); }
};

ParseResult parse_program(std::string_view text, std::string file = "<input>");

/// Parses a single logic/program expression. Throws Error on failure.
ExprPtr parse_expr(std::string_view text);

std::string pretty_print(const Program &program);
std::string print_expr(const ExprPtr &e);
std::string print_stmt(const StmtPtr &s, int indent = 0);

} // namespace relprop
