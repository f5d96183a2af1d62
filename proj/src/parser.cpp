#include "relprop/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace relprop {

namespace {

enum class Tok { Ident, Keyword, Int, Float, Punct, AnnotBegin, AnnotEnd, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  SourceSpan span;
};

class ParseError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Lexer

class Lexer {
public:
  Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments(out);
      if (pos_ >= src_.size())
        break;
      if (in_annot_ && line_annot_ && src_[pos_] == '\n') {
        // Consecutive `//@` lines form a single annotation.
        std::size_t k = pos_;
        while (k < src_.size() && std::isspace(static_cast<unsigned char>(src_[k])))
          ++k;
        if (src_.substr(k, 3) == "//@") {
          advance(k - pos_ + 3);
          continue;
        }
        close_annot(out);
        continue;
      }
      if (in_annot_ && !line_annot_ && starts_with("*/")) {
        close_annot(out);
        continue;
      }
      out.push_back(lex_token());
    }
    if (in_annot_) {
      if (!line_annot_)
        throw ParseError("unterminated annotation comment", here());
      close_annot(out);
    }
    Token eof;
    eof.kind = Tok::Eof;
    eof.span = here();
    out.push_back(eof);
    return out;
  }

private:
  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool in_annot_ = false;
  bool line_annot_ = false;

  SourceSpan here() const { return {file_, line_, col_, line_, col_}; }

  bool starts_with(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void close_annot(std::vector<Token> &out) {
    Token t;
    t.kind = Tok::AnnotEnd;
    t.span = here();
    if (!line_annot_)
      advance(2);
    out.push_back(t);
    in_annot_ = false;
    line_annot_ = false;
  }

  void skip_space_and_comments(std::vector<Token> &out) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n' && in_annot_ && line_annot_)
        return;
      if (std::isspace(static_cast<unsigned char>(c)) || (in_annot_ && c == '@')) {
        advance();
        continue;
      }
      if (!in_annot_ && starts_with("/*@")) {
        Token t;
        t.kind = Tok::AnnotBegin;
        t.span = here();
        advance(3);
        out.push_back(t);
        in_annot_ = true;
        line_annot_ = false;
        continue;
      }
      if (!in_annot_ && starts_with("//@")) {
        Token t;
        t.kind = Tok::AnnotBegin;
        t.span = here();
        advance(3);
        out.push_back(t);
        in_annot_ = true;
        line_annot_ = true;
        continue;
      }
      if (starts_with("//")) {
        // A plain line comment inside a `//@` annotation ends it.
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
        continue;
      }
      if (starts_with("/*")) {
        if (in_annot_)
          throw ParseError("nested comment inside annotation", here());
        SourceSpan start = here();
        advance(2);
        while (pos_ < src_.size() && !starts_with("*/"))
          advance();
        if (pos_ >= src_.size())
          throw ParseError("unterminated comment", start);
        advance(2);
        continue;
      }
      return;
    }
  }

  Token lex_token() {
    Token t;
    t.span = here();
    char c = src_[pos_];
    auto finish = [&](Tok k, std::size_t len) {
      t.kind = k;
      t.text = std::string(src_.substr(pos_, len));
      advance(len);
      t.span.end_line = line_;
      t.span.end_col = col_;
      return t;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
      std::size_t len = 1;
      while (pos_ + len < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_ + len])) ||
              src_[pos_ + len] == '_'))
        ++len;
      if (c == '\\' && len == 1)
        throw ParseError("stray backslash", t.span);
      return finish(c == '\\' ? Tok::Keyword : Tok::Ident, len);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t len = 0;
      while (pos_ + len < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + len])))
        ++len;
      if (pos_ + len + 1 < src_.size() && src_[pos_ + len] == '.' &&
          std::isdigit(static_cast<unsigned char>(src_[pos_ + len + 1]))) {
        ++len;
        while (pos_ + len < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_ + len])))
          ++len;
        return finish(Tok::Float, len);
      }
      return finish(Tok::Int, len);
    }
    static const char *const puncts[] = {"==>", "==", "!=", "<=", ">=", "&&", "||",
                                         "(",   ")",  "{",  "}",  ",",  ";",  ":",
                                         "?",   "*",  "+",  "-",  "/",  "<",  ">",
                                         "=",   "!"};
    for (const char *p : puncts)
      if (starts_with(p))
        return finish(Tok::Punct, std::char_traits<char>::length(p));
    throw ParseError(std::string("unexpected character '") + c + "'", t.span);
  }
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program prog;
    std::vector<Contract> pending;
    SourceSpan pending_span;
    while (!at(Tok::Eof)) {
      if (at(Tok::AnnotBegin)) {
        SourceSpan start = peek().span;
        next();
        if (is_ident("axiomatic")) {
          if (!pending.empty())
            throw ParseError("axiomatic block between a contract and its function",
                             start);
          prog.decls.emplace_back(axiomatic());
          expect(Tok::AnnotEnd, "end of annotation");
          continue;
        }
        if (pending.empty())
          pending_span = start;
        pending.push_back(contract_clauses());
        expect(Tok::AnnotEnd, "end of annotation");
        continue;
      }
      SourceSpan start = peek().span;
      Type t = type_name();
      bool ptr = accept("*");
      Token name = expect_ident();
      if (at_punct("(")) {
        if (ptr)
          throw ParseError("functions returning pointers are not supported", name.span);
        FunctionDef fn = function(t, name);
        fn.span = start;
        Contract merged;
        for (auto &c : pending)
          merge(merged, std::move(c));
        pending.clear();
        classify_locs(merged, fn);
        fn.contract = std::move(merged);
        prog.decls.emplace_back(std::move(fn));
        continue;
      }
      if (!pending.empty())
        throw ParseError("contract annotation must precede a function", pending_span);
      if (t == Type::Void)
        throw ParseError("global variable of type void", name.span);
      GlobalDecl g;
      g.name = name.text;
      g.type = ptr ? Type::IntPtr : Type::Int;
      g.span = name.span;
      if (accept("="))
        g.init = expr();
      expect_punct(";");
      globals_.insert(g.name);
      prog.decls.emplace_back(std::move(g));
    }
    if (!pending.empty())
      throw ParseError("contract annotation at end of file", pending_span);
    return prog;
  }

  ExprPtr single_expr() {
    auto e = expr();
    if (!at(Tok::Eof))
      throw ParseError("trailing tokens after expression", peek().span);
    return e;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> functions_;
  std::set<std::string> globals_;

  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_ident(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  bool is_keyword(std::string_view s) const {
    return peek().kind == Tok::Keyword && peek().text == s;
  }
  bool accept(std::string_view p) {
    if (at_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  bool accept_ident(std::string_view s) {
    if (is_ident(s)) {
      next();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string &what) const {
    std::string got;
    switch (peek().kind) {
    case Tok::Eof: got = "end of input"; break;
    case Tok::AnnotBegin: got = "annotation start"; break;
    case Tok::AnnotEnd: got = "end of annotation"; break;
    default: got = "'" + peek().text + "'";
    }
    throw ParseError("expected " + what + ", got " + got, peek().span);
  }

  void expect(Tok k, const std::string &what) {
    if (!at(k))
      fail(what);
    next();
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p))
      fail("'" + std::string(p) + "'");
    next();
  }
  Token expect_ident() {
    if (!at(Tok::Ident) || is_reserved(peek().text))
      fail("identifier");
    return next();
  }
  static bool is_reserved(const std::string &s) {
    static const std::set<std::string> kw = {"int", "void", "if", "else", "while",
                                             "return", "float"};
    return kw.count(s) > 0;
  }
  std::int64_t int_value(const Token &t) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw ParseError("integer literal out of range", t.span);
    return v;
  }

  Type type_name() {
    if (accept_ident("int"))
      return Type::Int;
    if (accept_ident("void"))
      return Type::Void;
    if (is_ident("float"))
      throw ParseError("floating-point types are not supported", peek().span);
    fail("type");
  }

  // -- contracts ----------------------------------------------------------

  static void merge(Contract &into, Contract from) {
    auto append = [](auto &dst, auto &src) {
      for (auto &x : src)
        dst.push_back(std::move(x));
    };
    append(into.requires_, from.requires_);
    append(into.ensures, from.ensures);
    append(into.assigns, from.assigns);
    append(into.relational, from.relational);
    append(into.behaviors, from.behaviors);
  }

  void classify_locs(Contract &c, const FunctionDef &fn) {
    auto fix = [&](Loc &l) {
      if (l.kind == Loc::Kind::Global && fn.find_formal(l.name))
        l.kind = Loc::Kind::Formal;
    };
    for (auto &a : c.assigns) {
      fix(a.written);
      for (auto &f : a.from)
        fix(f);
    }
  }

  Contract contract_clauses() {
    Contract c;
    while (!at(Tok::AnnotEnd)) {
      if (accept_ident("requires")) {
        c.requires_.push_back(expr());
        expect_punct(";");
      } else if (accept_ident("ensures")) {
        c.ensures.push_back(expr());
        expect_punct(";");
      } else if (accept_ident("assigns")) {
        assigns(c);
      } else if (is_ident("relational")) {
        c.relational.push_back(relational());
      } else if (accept_ident("behavior")) {
        Behavior b;
        b.name = expect_ident().text;
        expect_punct(":");
        while (accept_ident("ensures")) {
          b.ensures.push_back(expr());
          expect_punct(";");
        }
        c.behaviors.push_back(std::move(b));
      } else {
        if (at(Tok::Ident))
          throw ParseError("unknown annotation keyword '" + peek().text + "'",
                           peek().span);
        fail("contract clause");
      }
    }
    return c;
  }

  Loc loc() {
    if (is_keyword("\\result")) {
      next();
      return Loc::result();
    }
    if (is_keyword("\\nothing")) {
      next();
      return Loc::nothing();
    }
    if (accept("*"))
      return Loc::deref(expect_ident().text);
    return Loc::global(expect_ident().text);
  }

  void assigns(Contract &c) {
    std::vector<Loc> written{loc()};
    while (accept(","))
      written.push_back(loc());
    std::vector<Loc> from;
    bool has_from = false;
    if (is_keyword("\\from")) {
      next();
      has_from = true;
      from.push_back(loc());
      while (accept(","))
        from.push_back(loc());
    }
    expect_punct(";");
    for (auto &w : written)
      c.assigns.push_back({w, from, has_from});
  }

  std::vector<Binder> binders() {
    std::vector<Binder> out;
    if (!is_ident("int"))
      fail("'int' in binder list");
    while (true) {
      accept_ident("int");
      bool ptr = accept("*");
      out.push_back({expect_ident().text, ptr ? Type::IntPtr : Type::Int});
      if (!accept(","))
        break;
    }
    return out;
  }

  int inlining_option() {
    if (at(Tok::Int) && at_punct(",", 1)) {
      const Token &t = next();
      std::int64_t v = int_value(t);
      if (v < 1 || v > 1000)
        throw ParseError("inlining option must be a positive integer", t.span);
      next();
      return static_cast<int>(v);
    }
    return 1;
  }

  RelationalClause relational() {
    RelationalClause rc;
    rc.span = peek().span;
    next();
    rc.name = expect_ident().text;
    expect_punct(":");
    if (is_keyword("\\forall")) {
      next();
      rc.binders = binders();
      expect_punct(";");
    }
    if (!is_keyword("\\callset"))
      fail("\\callset");
    next();
    expect_punct("(");
    do {
      if (!is_keyword("\\call"))
        fail("\\call");
      CallSpec cs;
      cs.span = peek().span;
      next();
      expect_punct("(");
      cs.inlining = inlining_option();
      cs.callee = expect_ident().text;
      std::vector<ExprPtr> items;
      while (accept(","))
        items.push_back(expr());
      if (items.empty())
        fail("call-id");
      auto id = items.back();
      if (id->kind != ExprKind::Var)
        throw ParseError("call-id must be an identifier", cs.span);
      cs.call_id = id->text;
      items.pop_back();
      cs.args = std::move(items);
      expect_punct(")");
      rc.callset.push_back(std::move(cs));
    } while (accept(","));
    expect_punct(")");
    expect_punct("==>");
    rc.pred = expr();
    expect_punct(";");
    return rc;
  }

  std::vector<std::string> label_list() {
    std::vector<std::string> labels;
    expect_punct("{");
    labels.push_back(expect_ident().text);
    while (accept(","))
      labels.push_back(expect_ident().text);
    expect_punct("}");
    return labels;
  }

  std::vector<Binder> param_list() {
    std::vector<Binder> params;
    expect_punct("(");
    if (!at_punct(")")) {
      do {
        type_name();
        bool ptr = accept("*");
        params.push_back({expect_ident().text, ptr ? Type::IntPtr : Type::Int});
      } while (accept(","));
    }
    expect_punct(")");
    return params;
  }

  Axiomatic axiomatic() {
    Axiomatic ax;
    ax.span = peek().span;
    next();
    ax.name = expect_ident().text;
    expect_punct("{");
    while (!accept("}")) {
      if (accept_ident("predicate") || is_ident("logic")) {
        LogicDecl d;
        if (accept_ident("logic")) {
          if (type_name() != Type::Int)
            throw ParseError("logic functions must return int", peek().span);
          d.result = Type::Int;
        }
        d.name = expect_ident().text;
        if (at_punct("{"))
          d.labels = label_list();
        d.params = param_list();
        if (accept_ident("reads")) {
          d.reads.push_back(expr());
          while (accept(","))
            d.reads.push_back(expr());
        }
        expect_punct(";");
        ax.decls.push_back(std::move(d));
      } else if (accept_ident("lemma")) {
        Lemma l;
        l.name = expect_ident().text;
        if (at_punct("{"))
          l.labels = label_list();
        expect_punct(":");
        l.body = expr();
        expect_punct(";");
        ax.lemmas.push_back(std::move(l));
      } else {
        if (at(Tok::Ident))
          throw ParseError("unknown annotation keyword '" + peek().text + "'",
                           peek().span);
        fail("axiomatic member");
      }
    }
    return ax;
  }

  // -- functions and statements -------------------------------------------

  FunctionDef function(Type ret, const Token &name) {
    FunctionDef fn;
    fn.name = name.text;
    fn.ret = ret;
    expect_punct("(");
    if (is_ident("void") && at_punct(")", 1)) {
      next();
    } else if (!at_punct(")")) {
      do {
        Type t = type_name();
        if (t == Type::Void)
          throw ParseError("parameter of type void", peek().span);
        bool ptr = accept("*");
        fn.formals.push_back({expect_ident().text, ptr ? Type::IntPtr : Type::Int});
      } while (accept(","));
    }
    expect_punct(")");
    functions_.insert(fn.name);
    if (accept(";"))
      return fn;
    fn.body = block();
    return fn;
  }

  StmtPtr block() {
    SourceSpan start = peek().span;
    expect_punct("{");
    std::vector<StmtPtr> stmts;
    while (!accept("}")) {
      if (at(Tok::Eof))
        fail("'}'");
      statement(stmts);
    }
    auto b = std::const_pointer_cast<Stmt>(mk::block(std::move(stmts)));
    b->span = start;
    return b;
  }

  static std::shared_ptr<Stmt> mut(StmtPtr s, SourceSpan span) {
    auto m = std::const_pointer_cast<Stmt>(std::move(s));
    m->span = std::move(span);
    return m;
  }

  // Parses one statement (or one annotation comment, which may contribute
  // several assert statements) and appends it.
  void statement(std::vector<StmtPtr> &out) {
    SourceSpan sp = peek().span;
    if (at(Tok::AnnotBegin)) {
      next();
      if (is_ident("loop")) {
        std::vector<ExprPtr> invs;
        ExprPtr variant;
        while (true) {
          while (accept_ident("loop")) {
            if (accept_ident("invariant")) {
              invs.push_back(expr());
            } else if (accept_ident("variant")) {
              if (variant)
                throw ParseError("duplicate loop variant", peek().span);
              variant = expr();
            } else {
              fail("'invariant' or 'variant'");
            }
            expect_punct(";");
          }
          expect(Tok::AnnotEnd, "end of annotation");
          if (at(Tok::AnnotBegin) && is_ident("loop", 1)) {
            next();
            continue;
          }
          break;
        }
        if (!is_ident("while"))
          throw ParseError("loop annotation must precede a while loop", sp);
        SourceSpan wsp = peek().span;
        auto w = std::const_pointer_cast<Stmt>(while_stmt());
        w->invariants = std::move(invs);
        w->variant = std::move(variant);
        w->span = wsp;
        out.push_back(w);
        return;
      }
      while (!at(Tok::AnnotEnd)) {
        SourceSpan asp = peek().span;
        if (!accept_ident("assert")) {
          if (at(Tok::Ident))
            throw ParseError("unknown annotation keyword '" + peek().text + "'",
                             peek().span);
          fail("'assert'");
        }
        std::string label;
        if (at(Tok::Ident) && at_punct(":", 1)) {
          label = next().text;
          next();
        }
        auto p = expr();
        expect_punct(";");
        out.push_back(mut(mk::assert_(label, p), asp));
      }
      next();
      return;
    }
    out.push_back(simple_statement());
  }

  StmtPtr while_stmt() {
    next();  // while
    expect_punct("(");
    auto c = expr();
    expect_punct(")");
    return mk::while_(c, sub_statement());
  }

  StmtPtr sub_statement() {
    if (at(Tok::AnnotBegin) && !is_ident("loop", 1))
      throw ParseError("annotation cannot be the body of a control statement; "
                       "use a block",
                       peek().span);
    std::vector<StmtPtr> tmp;
    statement(tmp);
    return tmp.front();
  }

  StmtPtr simple_statement() {
    SourceSpan sp = peek().span;
    if (at_punct("{"))
      return block();
    if (accept(";"))
      return mut(mk::skip(), sp);
    if (is_ident("int")) {
      next();
      if (at_punct("*"))
        throw ParseError("local pointer variables are not supported", peek().span);
      Token n = expect_ident();
      ExprPtr init;
      if (accept("=")) {
        if (at(Tok::Ident) && at_punct("(", 1) && functions_.count(peek().text))
          throw ParseError("function call in a declaration initializer; declare "
                           "the variable, then assign the call result",
                           peek().span);
        init = expr();
      }
      expect_punct(";");
      return mut(mk::decl(n.text, init), sp);
    }
    if (is_ident("void") || is_ident("float"))
      throw ParseError("unsupported local declaration", sp);
    if (accept_ident("if")) {
      expect_punct("(");
      auto c = expr();
      expect_punct(")");
      auto t = sub_statement();
      StmtPtr e;
      if (accept_ident("else"))
        e = sub_statement();
      return mut(mk::if_(c, t, e), sp);
    }
    if (is_ident("while"))
      return mut(while_stmt(), sp);
    if (accept_ident("return")) {
      ExprPtr e;
      if (!at_punct(";"))
        e = expr();
      expect_punct(";");
      return mut(mk::ret(e), sp);
    }
    if (accept("*")) {
      Token p = expect_ident();
      expect_punct("=");
      auto rhs = expr();
      expect_punct(";");
      return mut(mk::assign_deref(p.text, rhs), sp);
    }
    Token id = expect_ident();
    if (at_punct("(")) {
      if (!functions_.count(id.text))
        throw ParseError("call to undeclared function '" + id.text + "'", id.span);
      auto args = call_args();
      expect_punct(";");
      return mut(mk::call("", id.text, args), sp);
    }
    expect_punct("=");
    if (at(Tok::Ident) && at_punct("(", 1) && functions_.count(peek().text)) {
      std::string callee = next().text;
      auto args = call_args();
      expect_punct(";");
      return mut(mk::call(id.text, callee, args), sp);
    }
    auto rhs = expr();
    expect_punct(";");
    return mut(mk::assign(id.text, rhs), sp);
  }

  std::vector<ExprPtr> call_args() {
    expect_punct("(");
    std::vector<ExprPtr> args;
    if (!at_punct(")")) {
      do
        args.push_back(expr());
      while (accept(","));
    }
    expect_punct(")");
    return args;
  }

  // -- expressions --------------------------------------------------------
  // ternary < ==> < || < && < comparisons < additive < multiplicative < unary

  ExprPtr expr() {
    SourceSpan sp = peek().span;
    auto c = implication();
    if (accept("?")) {
      auto a = expr();
      expect_punct(":");
      auto b = expr();
      return mk::ite(c, a, b, sp);
    }
    return c;
  }

  ExprPtr implication() {
    SourceSpan sp = peek().span;
    auto lhs = disjunction();
    if (accept("==>"))
      return mk::binary(BinOp::Implies, lhs, implication(), sp);
    return lhs;
  }

  ExprPtr disjunction() {
    SourceSpan sp = peek().span;
    auto lhs = conjunction();
    while (accept("||"))
      lhs = mk::binary(BinOp::Or, lhs, conjunction(), sp);
    return lhs;
  }

  ExprPtr conjunction() {
    SourceSpan sp = peek().span;
    auto lhs = comparison();
    while (accept("&&"))
      lhs = mk::binary(BinOp::And, lhs, comparison(), sp);
    return lhs;
  }

  ExprPtr comparison() {
    SourceSpan sp = peek().span;
    auto lhs = additive();
    static const std::pair<const char *, BinOp> ops[] = {
        {"==", BinOp::Eq}, {"!=", BinOp::Ne}, {"<=", BinOp::Le},
        {">=", BinOp::Ge}, {"<", BinOp::Lt},  {">", BinOp::Gt}};
    for (auto [s, op] : ops)
      if (accept(s)) {
        auto rhs = additive();
        for (auto [s2, op2] : ops)
          if (at_punct(s2))
            throw ParseError("chained comparisons are not supported", peek().span);
        return mk::binary(op, lhs, rhs, sp);
      }
    return lhs;
  }

  ExprPtr additive() {
    SourceSpan sp = peek().span;
    auto lhs = multiplicative();
    while (true) {
      if (accept("+"))
        lhs = mk::binary(BinOp::Add, lhs, multiplicative(), sp);
      else if (accept("-"))
        lhs = mk::binary(BinOp::Sub, lhs, multiplicative(), sp);
      else
        return lhs;
    }
  }

  ExprPtr multiplicative() {
    SourceSpan sp = peek().span;
    auto lhs = unary();
    while (true) {
      if (accept("*"))
        lhs = mk::binary(BinOp::Mul, lhs, unary(), sp);
      else if (accept("/"))
        lhs = mk::binary(BinOp::Div, lhs, unary(), sp);
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    SourceSpan sp = peek().span;
    if (accept("-"))
      return mk::unary(UnOp::Neg, unary(), sp);
    if (accept("!"))
      return mk::unary(UnOp::Not, unary(), sp);
    if (accept("*"))
      return mk::deref(expect_ident().text, sp);
    return primary();
  }

  std::string label() { return expect_ident().text; }

  ExprPtr primary() {
    const Token &t = peek();
    SourceSpan sp = t.span;
    switch (t.kind) {
    case Tok::Int:
      next();
      return mk::int_lit(int_value(t), sp);
    case Tok::Float:
      next();
      return mk::float_lit(t.text, sp);
    case Tok::Keyword:
      return keyword_term();
    case Tok::Ident: {
      if (is_reserved(t.text))
        fail("expression");
      std::string name = next().text;
      if (at_punct("{")) {
        auto labels = label_list();
        return mk::app(name, call_args(), labels, sp);
      }
      if (at_punct("("))
        return mk::app(name, call_args(), {}, sp);
      return mk::var(name, sp);
    }
    case Tok::Punct:
      if (accept("(")) {
        auto e = expr();
        expect_punct(")");
        return e;
      }
      break;
    default:
      break;
    }
    fail("expression");
  }

  ExprPtr keyword_term() {
    Token t = next();
    const std::string &k = t.text;
    SourceSpan sp = t.span;
    if (k == "\\true")
      return mk::bool_lit(true, sp);
    if (k == "\\false")
      return mk::bool_lit(false, sp);
    if (k == "\\result")
      return mk::result(sp);
    if (k == "\\at") {
      expect_punct("(");
      auto e = expr();
      expect_punct(",");
      auto l = label();
      expect_punct(")");
      return mk::at(e, l, sp);
    }
    if (k == "\\old") {
      expect_punct("(");
      auto e = expr();
      expect_punct(")");
      return mk::at(e, "Old", sp);
    }
    if (k == "\\callresult") {
      expect_punct("(");
      auto id = expect_ident().text;
      expect_punct(")");
      return mk::call_result(id, sp);
    }
    if (k == "\\callpure") {
      expect_punct("(");
      int inl = inlining_option();
      auto fn = expect_ident().text;
      std::vector<ExprPtr> args;
      while (accept(","))
        args.push_back(expr());
      expect_punct(")");
      return mk::call_pure(inl, fn, args, sp);
    }
    if (k == "\\separated") {
      expect_punct("(");
      auto p = expr();
      expect_punct(",");
      auto q = expr();
      expect_punct(")");
      return mk::separated(p, q, sp);
    }
    if (k == "\\forall" || k == "\\exists") {
      auto bs = binders();
      expect_punct(";");
      auto body = expr();
      return mk::quant(k == "\\forall" ? Quantifier::Forall : Quantifier::Exists, bs,
                       body, sp);
    }
    throw ParseError("unknown annotation keyword '" + k + "'", sp);
  }
};

// ---------------------------------------------------------------------------
// Printer

enum Prec {
  P_Top = 0,
  P_Ite = 1,
  P_Implies = 2,
  P_Or = 3,
  P_And = 4,
  P_Cmp = 5,
  P_Add = 6,
  P_Mul = 7,
  P_Unary = 8,
  P_Atom = 9
};

int prec_of(BinOp op) {
  switch (op) {
  case BinOp::Implies: return P_Implies;
  case BinOp::Or: return P_Or;
  case BinOp::And: return P_And;
  case BinOp::Add:
  case BinOp::Sub: return P_Add;
  case BinOp::Mul:
  case BinOp::Div: return P_Mul;
  default: return P_Cmp;
  }
}

void print_binders(std::ostream &os, const std::vector<Binder> &bs) {
  bool prev_int = false;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i)
      os << ", ";
    if (bs[i].type == Type::IntPtr) {
      os << "int *" << bs[i].name;
      prev_int = false;
    } else {
      os << (prev_int ? "" : "int ") << bs[i].name;
      prev_int = true;
    }
  }
}

void print(std::ostream &os, const ExprPtr &e, int ctx);

void print_args(std::ostream &os, const std::vector<ExprPtr> &args,
                bool leading_comma = false) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i || leading_comma)
      os << ", ";
    print(os, args[i], P_Top);
  }
}

void print(std::ostream &os, const ExprPtr &e, int ctx) {
  switch (e->kind) {
  case ExprKind::IntLit:
    os << e->value;
    return;
  case ExprKind::FloatLit:
    os << e->text;
    return;
  case ExprKind::BoolLit:
    os << (e->value ? "\\true" : "\\false");
    return;
  case ExprKind::Var:
    os << e->text;
    return;
  case ExprKind::Deref:
    os << "*" << e->text;
    return;
  case ExprKind::Result:
    os << "\\result";
    return;
  case ExprKind::Unary: {
    os << (e->unop == UnOp::Neg ? "-" : "!");
    const auto &a = e->args[0];
    bool wrap = a->kind == ExprKind::Unary || a->kind == ExprKind::Deref;
    if (wrap)
      os << "(";
    print(os, a, wrap ? P_Top : P_Unary);
    if (wrap)
      os << ")";
    return;
  }
  case ExprKind::Binary: {
    int p = prec_of(e->binop);
    bool paren = ctx > p;
    if (paren)
      os << "(";
    bool right_assoc = e->binop == BinOp::Implies;
    int lctx = p + ((right_assoc || p == P_Cmp) ? 1 : 0);
    int rctx = p + ((right_assoc && p != P_Cmp) ? 0 : 1);
    print(os, e->args[0], lctx);
    os << " " << to_string(e->binop) << " ";
    print(os, e->args[1], rctx);
    if (paren)
      os << ")";
    return;
  }
  case ExprKind::Ite: {
    bool paren = ctx > P_Ite;
    if (paren)
      os << "(";
    print(os, e->args[0], P_Implies);
    os << " ? ";
    print(os, e->args[1], P_Ite);
    os << " : ";
    print(os, e->args[2], P_Ite);
    if (paren)
      os << ")";
    return;
  }
  case ExprKind::At:
    os << "\\at(";
    print(os, e->args[0], P_Top);
    os << ", " << e->text << ")";
    return;
  case ExprKind::CallResult:
    os << "\\callresult(" << e->text << ")";
    return;
  case ExprKind::CallPure:
    os << "\\callpure(";
    if (e->inlining != 1)
      os << e->inlining << ", ";
    os << e->text;
    print_args(os, e->args, true);
    os << ")";
    return;
  case ExprKind::App:
    os << e->text;
    if (!e->labels.empty()) {
      os << "{";
      for (std::size_t i = 0; i < e->labels.size(); ++i)
        os << (i ? ", " : "") << e->labels[i];
      os << "}";
    }
    os << "(";
    print_args(os, e->args);
    os << ")";
    return;
  case ExprKind::Quant: {
    bool paren = ctx > P_Top;
    if (paren)
      os << "(";
    os << (e->quant == Quantifier::Forall ? "\\forall " : "\\exists ");
    print_binders(os, e->binders);
    os << "; ";
    print(os, e->args[0], P_Top);
    if (paren)
      os << ")";
    return;
  }
  case ExprKind::Separated:
    os << "\\separated(";
    print_args(os, e->args);
    os << ")";
    return;
  }
}

std::string pad(int n) { return std::string(static_cast<std::size_t>(n) * 2, ' '); }

void print_stmt_into(std::ostream &os, const StmtPtr &s, int ind);

void print_branch(std::ostream &os, const StmtPtr &s, int ind) {
  if (s->kind == StmtKind::Block) {
    os << " ";
    print_stmt_into(os, s, ind);
  } else {
    os << "\n";
    os << pad(ind + 1);
    print_stmt_into(os, s, ind + 1);
  }
}

void print_stmt_into(std::ostream &os, const StmtPtr &s, int ind) {
  switch (s->kind) {
  case StmtKind::Skip:
    os << ";";
    break;
  case StmtKind::Decl:
    os << "int " << s->name;
    if (s->expr) {
      os << " = ";
      print(os, s->expr, P_Top);
    }
    os << ";";
    break;
  case StmtKind::Assign:
    os << (s->deref_target ? "*" : "") << s->name << " = ";
    print(os, s->expr, P_Top);
    os << ";";
    break;
  case StmtKind::Call:
    if (!s->name.empty())
      os << s->name << " = ";
    os << s->callee << "(";
    print_args(os, s->args);
    os << ");";
    break;
  case StmtKind::If:
    os << "if (";
    print(os, s->expr, P_Top);
    os << ")";
    print_branch(os, s->then_branch, ind);
    if (s->else_branch) {
      if (s->then_branch->kind == StmtKind::Block)
        os << " else";
      else
        os << "\n" << pad(ind) << "else";
      print_branch(os, s->else_branch, ind);
    }
    break;
  case StmtKind::While:
    if (!s->invariants.empty() || s->variant) {
      os << "/*@";
      for (const auto &i : s->invariants) {
        os << " loop invariant ";
        print(os, i, P_Top);
        os << ";";
      }
      if (s->variant) {
        os << " loop variant ";
        print(os, s->variant, P_Top);
        os << ";";
      }
      os << " */\n" << pad(ind);
    }
    os << "while (";
    print(os, s->expr, P_Top);
    os << ")";
    print_branch(os, s->body, ind);
    break;
  case StmtKind::Block:
    os << "{\n";
    for (const auto &c : s->stmts) {
      os << pad(ind + 1);
      print_stmt_into(os, c, ind + 1);
      os << "\n";
    }
    os << pad(ind) << "}";
    break;
  case StmtKind::Return:
    os << "return";
    if (s->expr) {
      os << " ";
      print(os, s->expr, P_Top);
    }
    os << ";";
    break;
  case StmtKind::Assert:
    os << "/*@ assert ";
    if (!s->name.empty())
      os << s->name << ": ";
    print(os, s->expr, P_Top);
    os << "; */";
    break;
  }
}

void print_loc_list(std::ostream &os, const std::vector<Loc> &locs) {
  for (std::size_t i = 0; i < locs.size(); ++i)
    os << (i ? ", " : "") << locs[i].str();
}

void print_contract(std::ostream &os, const Contract &c) {
  if (c.empty())
    return;
  os << "/*@";
  bool first = true;
  auto line = [&]() -> std::ostream & {
    os << (first ? " " : "\n    ");
    first = false;
    return os;
  };
  for (const auto &r : c.requires_) {
    line() << "requires ";
    print(os, r, P_Top);
    os << ";";
  }
  for (const auto &a : c.assigns) {
    line() << "assigns " << a.written.str();
    if (a.has_from) {
      os << " \\from ";
      print_loc_list(os, a.from);
    }
    os << ";";
  }
  for (const auto &e : c.ensures) {
    line() << "ensures ";
    print(os, e, P_Top);
    os << ";";
  }
  for (const auto &rc : c.relational) {
    line() << "relational " << rc.name << ":";
    if (!rc.binders.empty()) {
      os << "\n      \\forall ";
      print_binders(os, rc.binders);
      os << ";";
    }
    os << "\n      \\callset(";
    for (std::size_t i = 0; i < rc.callset.size(); ++i) {
      const auto &cs = rc.callset[i];
      os << (i ? ", " : "") << "\\call(";
      if (cs.inlining != 1)
        os << cs.inlining << ", ";
      os << cs.callee;
      print_args(os, cs.args, true);
      os << ", " << cs.call_id << ")";
    }
    os << ")\n      ==> ";
    print(os, rc.pred, P_Top);
    os << ";";
  }
  for (const auto &b : c.behaviors) {
    line() << "behavior " << b.name << ":";
    for (const auto &e : b.ensures) {
      os << "\n      ensures ";
      print(os, e, P_Top);
      os << ";";
    }
  }
  os << " */\n";
}

void print_axiomatic(std::ostream &os, const Axiomatic &ax) {
  os << "/*@ axiomatic " << ax.name << " {\n";
  for (const auto &d : ax.decls) {
    if (d.is_predicate())
      os << "  predicate " << d.name;
    else
      os << "  logic int " << d.name;
    if (!d.labels.empty()) {
      os << "{";
      for (std::size_t i = 0; i < d.labels.size(); ++i)
        os << (i ? ", " : "") << d.labels[i];
      os << "}";
    }
    os << "(";
    for (std::size_t i = 0; i < d.params.size(); ++i)
      os << (i ? ", " : "") << (d.params[i].type == Type::IntPtr ? "int *" : "int ")
         << d.params[i].name;
    os << ")";
    if (!d.reads.empty()) {
      os << "\n    reads ";
      print_args(os, d.reads);
    }
    os << ";\n";
  }
  for (const auto &l : ax.lemmas) {
    os << "  lemma " << l.name;
    if (!l.labels.empty()) {
      os << "{";
      for (std::size_t i = 0; i < l.labels.size(); ++i)
        os << (i ? ", " : "") << l.labels[i];
      os << "}";
    }
    os << ":\n    ";
    print(os, l.body, P_Top);
    os << ";\n";
  }
  os << "} */\n";
}

} // namespace

ParseResult parse_program(std::string_view text, std::string file) {
  ParseResult r;
  try {
    Lexer lex(text, file);
    Parser p(lex.run());
    r.program = p.program();
  } catch (const Error &e) {
    Diagnostic d;
    d.span = e.span();
    if (d.span.file.empty())
      d.span.file = file;
    d.message = e.what();
    r.diagnostics.push_back(std::move(d));
  }
  return r;
}

ExprPtr parse_expr(std::string_view text) {
  Lexer lex(text, "<expr>");
  Parser p(lex.run());
  return p.single_expr();
}

std::string print_expr(const ExprPtr &e) {
  std::ostringstream os;
  print(os, e, P_Top);
  return os.str();
}

std::string print_stmt(const StmtPtr &s, int indent) {
  std::ostringstream os;
  print_stmt_into(os, s, indent);
  return os.str();
}

std::string pretty_print(const Program &program) {
  std::ostringstream os;
  bool first = true;
  for (const auto &d : program.decls) {
    if (!first)
      os << "\n";
    first = false;
    if (auto *g = std::get_if<GlobalDecl>(&d)) {
      os << "int " << (g->type == Type::IntPtr ? "*" : "") << g->name;
      if (g->init) {
        os << " = ";
        print(os, g->init, P_Top);
      }
      os << ";\n";
    } else if (auto *f = std::get_if<FunctionDef>(&d)) {
      print_contract(os, f->contract);
      os << to_string(f->ret) << (f->ret == Type::IntPtr ? "" : " ") << f->name << "(";
      if (f->formals.empty())
        os << "void";
      for (std::size_t i = 0; i < f->formals.size(); ++i)
        os << (i ? ", " : "")
           << (f->formals[i].type == Type::IntPtr ? "int *" : "int ")
           << f->formals[i].name;
      os << ")";
      if (f->body) {
        os << " ";
        print_stmt_into(os, f->body, 0);
        os << "\n";
      } else {
        os << ";\n";
      }
    } else if (auto *a = std::get_if<Axiomatic>(&d)) {
      print_axiomatic(os, *a);
    }
  }
  if (program.decls.empty())
    os << "\n";
  return os.str();
}

} // namespace relprop
