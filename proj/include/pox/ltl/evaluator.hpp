// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "pox/ltl/formula.hpp"
#include "pox/ltl/prop_trace.hpp"

namespace pox::ltl {

// Finite-trace semantics: X is strong (false at the last position), U is
// strong, and a B b is !(!a U b). Propositions are resolved against a fixed
// name list when compiling; evaluation then works on bitset columns.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, std::span<const std::string> prop_names);

  // Truth value at every position. The returned view aliases an internal
  // buffer and stays valid until the next call.
  std::span<const Word> eval(std::span<const Word* const> columns, std::size_t length);
  // Traces of at most 64 positions; column k holds prop k.
  Word eval_word(std::span<const Word> columns, std::size_t length);

  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Op op;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t prop = 0;
  };
  std::uint32_t compile(const Formula& f, std::span<const std::string> names);

  std::vector<Node> nodes_;
  std::vector<Word> scratch_;
  std::vector<Word> word_scratch_;
};

bool eval(const Formula& f, const PropTrace& trace, std::size_t pos);
std::vector<bool> eval_all(const Formula& f, const PropTrace& trace);

}  // namespace pox::ltl
