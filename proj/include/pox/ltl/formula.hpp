// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pox::ltl {

enum class Op : std::uint8_t { True, False, Prop, Not, And, Or, Implies, Next, Future, Globally, Until, Before };

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;

// Immutable formula tree with shared subterms.
class Formula {
 public:
  Formula();  // true

  static Formula constant(bool v);
  static Formula prop(std::string name);
  static Formula unary(Op op, Formula f);
  static Formula binary(Op op, Formula a, Formula b);

  Op op() const noexcept;
  const std::string& name() const noexcept;  // Prop only
  const Formula& lhs() const;                // unary operand or left operand
  const Formula& rhs() const;

  // Atoms have depth 1.
  std::size_t depth() const noexcept;
  std::size_t size() const noexcept;
  // Fully parenthesized; parse(to_string(f)) == f.
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  const void* identity() const noexcept { return node_.get(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Formula operator!(Formula f);
Formula operator&&(Formula a, Formula b);
Formula operator||(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula X(Formula f);
Formula F(Formula f);
Formula G(Formula f);
Formula U(Formula a, Formula b);
Formula B(Formula a, Formula b);
Formula prop(std::string name);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t column, const std::string& what);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// Syntax: true false ident ( ) ! X F G & | -> U B  (U and B bind tighter
// than &, and both associate to the right, as does ->).
Formula parse(std::string_view text);

}  // namespace pox::ltl
