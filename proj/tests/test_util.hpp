#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "relprop/parser.hpp"

namespace relprop::testing {

inline std::string corpus_path(const std::string &name) {
  return std::string(RELPROP_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program parse_or_die(const std::string &text) {
  auto r = parse_program(text);
  if (!r.ok()) {
    std::ostringstream os;
    for (const auto &d : r.diagnostics)
      os << d << "\n";
    throw std::runtime_error("parse failed:\n" + os.str());
  }
  return *r.program;
}

inline Program load_corpus(const std::string &name) {
  return parse_or_die(read_file(corpus_path(name)));
}

} // namespace relprop::testing
