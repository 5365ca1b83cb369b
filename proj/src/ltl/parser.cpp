// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include <cctype>

#include "pox/ltl/formula.hpp"

namespace pox::ltl {

ParseError::ParseError(std::size_t column, const std::string& what)
    : std::runtime_error("column " + std::to_string(column + 1) + ": " + what), column_(column) {}

namespace {

enum class Tok { End, LParen, RParen, Not, And, Or, Implies, Until, Before, Next, Future, Globally, True, False, Ident };

struct Token {
  Tok kind;
  std::string text;
  std::size_t col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::size_t col = pos_;
    if (pos_ >= s_.size()) return {Tok::End, "", col};
    const char c = s_[pos_];
    auto two = [&](char second) { return pos_ + 1 < s_.size() && s_[pos_ + 1] == second; };
    switch (c) {
      case '(': ++pos_; return {Tok::LParen, "(", col};
      case ')': ++pos_; return {Tok::RParen, ")", col};
      case '!': ++pos_; return {Tok::Not, "!", col};
      case '&': pos_ += two('&') ? 2 : 1; return {Tok::And, "&", col};
      case '|': pos_ += two('|') ? 2 : 1; return {Tok::Or, "|", col};
      case '-':
        if (two('>')) {
          pos_ += 2;
          return {Tok::Implies, "->", col};
        }
        throw ParseError(col, "expected '->'");
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      std::string word(s_.substr(pos_, end - pos_));
      pos_ = end;
      if (word == "X") return {Tok::Next, word, col};
      if (word == "F") return {Tok::Future, word, col};
      if (word == "G") return {Tok::Globally, word, col};
      if (word == "U") return {Tok::Until, word, col};
      if (word == "B") return {Tok::Before, word, col};
      if (word == "true") return {Tok::True, word, col};
      if (word == "false") return {Tok::False, word, col};
      return {Tok::Ident, std::move(word), col};
    }
    throw ParseError(col, std::string("unexpected character '") + c + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  Formula parse_all() {
    Formula f = implication();
    if (cur_.kind != Tok::End) throw ParseError(cur_.col, "unexpected '" + cur_.text + "'");
    return f;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  Formula implication() {
    Formula lhs = disjunction();
    if (cur_.kind == Tok::Implies) {
      advance();
      return implies(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (cur_.kind == Tok::Or) {
      advance();
      f = std::move(f) || conjunction();
    }
    return f;
  }

  Formula conjunction() {
    Formula f = temporal();
    while (cur_.kind == Tok::And) {
      advance();
      f = std::move(f) && temporal();
    }
    return f;
  }

  Formula temporal() {
    Formula lhs = unary();
    if (cur_.kind == Tok::Until || cur_.kind == Tok::Before) {
      const Op op = cur_.kind == Tok::Until ? Op::Until : Op::Before;
      advance();
      return Formula::binary(op, std::move(lhs), temporal());
    }
    return lhs;
  }

  Formula unary() {
    switch (cur_.kind) {
      case Tok::Not: advance(); return Formula::unary(Op::Not, unary());
      case Tok::Next: advance(); return Formula::unary(Op::Next, unary());
      case Tok::Future: advance(); return Formula::unary(Op::Future, unary());
      case Tok::Globally: advance(); return Formula::unary(Op::Globally, unary());
      default: return atom();
    }
  }

  Formula atom() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::True: advance(); return Formula::constant(true);
      case Tok::False: advance(); return Formula::constant(false);
      case Tok::Ident: advance(); return Formula::prop(t.text);
      case Tok::LParen: {
        advance();
        Formula f = implication();
        if (cur_.kind != Tok::RParen) throw ParseError(cur_.col, "expected ')'");
        advance();
        return f;
      }
      case Tok::End: throw ParseError(t.col, "unexpected end of formula");
      default: throw ParseError(t.col, "unexpected '" + t.text + "'");
    }
  }

  Lexer lex_;
  Token cur_{Tok::End, "", 0};
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace pox::ltl
