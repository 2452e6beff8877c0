#pragma once

// Concrete syntax shared by both calculi:
//
//   term ::= '\' ident '.' term
//          | 'let' ident '=' rhs 'in' term
//          | app
//   app  ::= atom+                    (natural calculus only)
//   rhs  ::= ident '@' term | term    (vanilla: the first form is subtraction)
//   atom ::= ident | '(' term ')'
//
// Freshened variables render as name#tag and parse back to the same variable,
// so printing round-trips.

#include <cctype>
#include <string>
#include <vector>

#include "vanilla/term.hpp"

namespace vanilla {

struct ParseError : Error {
  int line;
  int col;
  ParseError(int l, int c, const std::string& msg)
      : Error("parse error at line " + std::to_string(l) + ", col " + std::to_string(c) + ": " +
              msg),
        line(l),
        col(c) {}
};

namespace detail {

struct Token {
  enum class Kind {
    ident,
    lambda,
    dot,
    lparen,
    rparen,
    eq,
    at,
    let_kw,
    in_kw,
    arrow,
    colon,
    comma,
    question,
    turnstile,
    end,
  };
  Kind kind;
  std::string text;
  std::uint32_t tag = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(tok_.line, tok_.col, msg); }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Token::Kind::end, "", 0, line_, col_};
      return;
    }
    char c = src_[pos_];
    switch (c) {
      case '\\': bump(); set(Token::Kind::lambda, "\\"); return;
      case '.': bump(); set(Token::Kind::dot, "."); return;
      case '(': bump(); set(Token::Kind::lparen, "("); return;
      case ')': bump(); set(Token::Kind::rparen, ")"); return;
      case '=': bump(); set(Token::Kind::eq, "="); return;
      case '@': bump(); set(Token::Kind::at, "@"); return;
      case ':': bump(); set(Token::Kind::colon, ":"); return;
      case ',': bump(); set(Token::Kind::comma, ","); return;
      case '?': bump(); set(Token::Kind::question, "?"); return;
      case '|':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '-') {
          bump();
          set(Token::Kind::turnstile, "|-");
          return;
        }
        throw ParseError(line_, col_, "unexpected '|'");
      case '-':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          bump();
          set(Token::Kind::arrow, "->");
          return;
        }
        throw ParseError(line_, col_, "unexpected '-'");
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
              src_[pos_] == '\'')) {
        name += src_[pos_];
        bump();
      }
      std::uint32_t tag = 0;
      if (pos_ < src_.size() && src_[pos_] == '#') {
        bump();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
          throw ParseError(line_, col_, "expected digits after '#'");
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits += src_[pos_];
          bump();
        }
        tag = static_cast<std::uint32_t>(std::stoul(digits));
      }
      if (name == "let") {
        set(Token::Kind::let_kw, name);
      } else if (name == "in") {
        set(Token::Kind::in_kw, name);
      } else {
        tok_.kind = Token::Kind::ident;
        tok_.text = name;
        tok_.tag = tag;
      }
      return;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

  void set(Token::Kind k, std::string text) {
    tok_.kind = k;
    tok_.text = std::move(text);
    tok_.tag = 0;
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class TermParser {
 public:
  TermParser(Lexer& lx, Calculus cal) : lx_(lx), cal_(cal) {}

  Term parse_term() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::lambda) {
      lx_.next();
      Var binder = expect_ident("binder");
      expect(Token::Kind::dot, "'.'");
      return Term::lam(binder, parse_term());
    }
    if (t.kind == Token::Kind::let_kw) {
      lx_.next();
      Var binder = expect_ident("bound variable");
      expect(Token::Kind::eq, "'='");
      // lookahead: ident '@' starts a subtraction right-hand side
      if (lx_.peek().kind == Token::Kind::ident) {
        Token saved = lx_.peek();
        Lexer probe = lx_;  // cheap copy, source is shared
        probe.next();
        if (probe.peek().kind == Token::Kind::at) {
          if (cal_ == Calculus::natural) lx_.fail("subtraction '@' is not a natural term");
          lx_.next();
          lx_.next();  // consume head and '@'
          Term content = parse_term();
          expect(Token::Kind::in_kw, "'in'");
          Term body = parse_term();
          return Term::subtr(Var{saved.text, saved.tag}, content, binder, body);
        }
      }
      Term content = parse_term();
      expect(Token::Kind::in_kw, "'in'");
      Term body = parse_term();
      return cal_ == Calculus::natural ? Term::esub(content, binder, body)
                                       : Term::cut(content, binder, body);
    }
    return parse_app();
  }

 private:
  Term parse_app() {
    Term acc = parse_atom();
    while (starts_atom(lx_.peek().kind)) {
      if (cal_ == Calculus::vanilla) lx_.fail("application is not a vanilla term");
      acc = Term::app(acc, parse_atom());
    }
    return acc;
  }

  Term parse_atom() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::ident) {
      Token v = lx_.next();
      return Term::var(Var{v.text, v.tag});
    }
    if (t.kind == Token::Kind::lparen) {
      lx_.next();
      Term inner = parse_term();
      expect(Token::Kind::rparen, "')'");
      return inner;
    }
    lx_.fail("expected a term");
  }

  static bool starts_atom(Token::Kind k) {
    return k == Token::Kind::ident || k == Token::Kind::lparen;
  }

  Var expect_ident(const std::string& what) {
    if (lx_.peek().kind != Token::Kind::ident) lx_.fail("expected " + what);
    Token t = lx_.next();
    return Var{t.text, t.tag};
  }

  void expect(Token::Kind k, const std::string& what) {
    if (lx_.peek().kind != k) lx_.fail("expected " + what);
    lx_.next();
  }

  Lexer& lx_;
  Calculus cal_;
};

}  // namespace detail

inline Term parse_term(const std::string& src, Calculus cal) {
  detail::Lexer lx(src);
  detail::TermParser p(lx, cal);
  Term t = p.parse_term();
  if (lx.peek().kind != detail::Token::Kind::end) lx.fail("trailing input after term");
  return t;
}

namespace detail {

inline void print_rec(const Term& t, std::string& out);

inline void print_atomic(const Term& t, std::string& out) {
  if (t.kind() == Kind::var) {
    out += t.name().str();
  } else {
    out += '(';
    print_rec(t, out);
    out += ')';
  }
}

inline void print_rec(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Kind::var:
      out += t.name().str();
      return;
    case Kind::lam:
      out += '\\';
      out += t.binder().str();
      out += ". ";
      print_rec(t.body(), out);
      return;
    case Kind::app: {
      if (t.fun().kind() == Kind::app) {
        print_rec(t.fun(), out);
      } else {
        print_atomic(t.fun(), out);
      }
      out += ' ';
      print_atomic(t.arg(), out);
      return;
    }
    case Kind::esub:
    case Kind::cut: {
      out += "let ";
      out += t.binder().str();
      out += " = ";
      Term c = t.content();
      if (c.kind() == Kind::esub || c.kind() == Kind::cut || c.kind() == Kind::subtr) {
        print_atomic(c, out);
      } else {
        print_rec(c, out);
      }
      out += " in ";
      print_rec(t.body(), out);
      return;
    }
    case Kind::subtr: {
      out += "let ";
      out += t.binder().str();
      out += " = ";
      out += t.head().str();
      out += " @ ";
      Term c = t.content();
      if (c.kind() == Kind::cut || c.kind() == Kind::subtr) {
        print_atomic(c, out);
      } else {
        print_rec(c, out);
      }
      out += " in ";
      print_rec(t.body(), out);
      return;
    }
  }
}

}  // namespace detail

inline std::string print_term(const Term& t) {
  std::string out;
  detail::print_rec(t, out);
  return out;
}

}  // namespace vanilla
