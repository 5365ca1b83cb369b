// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/ltl/formula.hpp"

#include <algorithm>

namespace pox::ltl {

struct Formula::Node {
  Op op = Op::True;
  std::string name;
  Formula a;
  Formula b;
  std::size_t depth = 1;
  std::size_t size = 1;
};

bool is_unary(Op op) noexcept {
  return op == Op::Not || op == Op::Next || op == Op::Future || op == Op::Globally;
}

bool is_binary(Op op) noexcept {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Until || op == Op::Before;
}

Formula::Formula() : node_(nullptr) {}

Formula Formula::constant(bool v) {
  auto n = std::make_shared<Node>();
  n->op = v ? Op::True : Op::False;
  return Formula(std::move(n));
}

Formula Formula::prop(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty proposition name");
  auto n = std::make_shared<Node>();
  n->op = Op::Prop;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::unary(Op op, Formula f) {
  if (!is_unary(op)) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->depth = f.depth() + 1;
  n->size = f.size() + 1;
  n->a = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::binary(Op op, Formula a, Formula b) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->depth = std::max(a.depth(), b.depth()) + 1;
  n->size = a.size() + b.size() + 1;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Op Formula::op() const noexcept { return node_ ? node_->op : Op::True; }

const std::string& Formula::name() const noexcept {
  static const std::string kEmpty;
  return node_ ? node_->name : kEmpty;
}

const Formula& Formula::lhs() const {
  if (!node_ || !(is_unary(node_->op) || is_binary(node_->op))) throw std::logic_error("formula has no operand");
  return node_->a;
}

const Formula& Formula::rhs() const {
  if (!node_ || !is_binary(node_->op)) throw std::logic_error("formula has no right operand");
  return node_->b;
}

std::size_t Formula::depth() const noexcept { return node_ ? node_->depth : 1; }
std::size_t Formula::size() const noexcept { return node_ ? node_->size : 1; }

std::string Formula::to_string() const {
  switch (op()) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Prop: return name();
    case Op::Not: return "!" + lhs().to_string();
    case Op::Next: return "X " + lhs().to_string();
    case Op::Future: return "F " + lhs().to_string();
    case Op::Globally: return "G " + lhs().to_string();
    case Op::And: return "(" + lhs().to_string() + " & " + rhs().to_string() + ")";
    case Op::Or: return "(" + lhs().to_string() + " | " + rhs().to_string() + ")";
    case Op::Implies: return "(" + lhs().to_string() + " -> " + rhs().to_string() + ")";
    case Op::Until: return "(" + lhs().to_string() + " U " + rhs().to_string() + ")";
    case Op::Before: return "(" + lhs().to_string() + " B " + rhs().to_string() + ")";
  }
  return "?";
}

bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::True:
    case Op::False:
      return true;
    case Op::Prop:
      return a.name() == b.name();
    default:
      break;
  }
  if (is_unary(a.op())) return a.lhs() == b.lhs();
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

Formula operator!(Formula f) { return Formula::unary(Op::Not, std::move(f)); }
Formula operator&&(Formula a, Formula b) { return Formula::binary(Op::And, std::move(a), std::move(b)); }
Formula operator||(Formula a, Formula b) { return Formula::binary(Op::Or, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return Formula::binary(Op::Implies, std::move(a), std::move(b)); }
Formula X(Formula f) { return Formula::unary(Op::Next, std::move(f)); }
Formula F(Formula f) { return Formula::unary(Op::Future, std::move(f)); }
Formula G(Formula f) { return Formula::unary(Op::Globally, std::move(f)); }
Formula U(Formula a, Formula b) { return Formula::binary(Op::Until, std::move(a), std::move(b)); }
Formula B(Formula a, Formula b) { return Formula::binary(Op::Before, std::move(a), std::move(b)); }
Formula prop(std::string name) { return Formula::prop(std::move(name)); }

}  // namespace pox::ltl
