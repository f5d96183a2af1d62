#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relprop {

struct SourceSpan {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool valid() const { return start_line > 0; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

std::ostream &operator<<(std::ostream &os, const SourceSpan &span);
std::ostream &operator<<(std::ostream &os, const Diagnostic &d);

bool has_errors(const Diagnostics &diags);

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &what, SourceSpan span = {})
      : std::runtime_error(what), span_(std::move(span)) {}
  const SourceSpan &span() const { return span_; }

private:
  SourceSpan span_;
};

} // namespace relprop
