// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/ltl/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace pox::ltl {
namespace {

Word low_mask(std::size_t bits) noexcept { return bits >= kWordBits ? ~Word{0} : (Word{1} << bits) - 1; }

// Bits at or below the highest set bit.
Word smear_down(Word w) noexcept {
  if (w == 0) return 0;
  return low_mask(kWordBits - static_cast<std::size_t>(std::countl_zero(w)));
}

// r = b | (a & next(r)), evaluated right to left within one word.
Word until_word(Word a, Word b, bool carry_in) noexcept {
  if (a == 0) return b;
  Word r = 0;
  bool next = carry_in;
  for (int i = static_cast<int>(kWordBits) - 1; i >= 0; --i) {
    const Word m = Word{1} << i;
    const bool v = (b & m) || ((a & m) && next);
    if (v) r |= m;
    next = v;
  }
  return r;
}

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f, std::span<const std::string> prop_names) { compile(f, prop_names); }

std::uint32_t CompiledFormula::compile(const Formula& f, std::span<const std::string> names) {
  Node n{f.op()};
  switch (f.op()) {
    case Op::True:
    case Op::False:
      break;
    case Op::Prop: {
      const auto it = std::find(names.begin(), names.end(), f.name());
      if (it == names.end()) throw std::invalid_argument("unknown proposition '" + f.name() + "'");
      n.prop = static_cast<std::uint32_t>(it - names.begin());
      break;
    }
    default:
      n.a = compile(f.lhs(), names);
      if (is_binary(f.op())) n.b = compile(f.rhs(), names);
      break;
  }
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::span<const Word> CompiledFormula::eval(std::span<const Word* const> columns, std::size_t length) {
  const std::size_t nw = words_for(length);
  if (scratch_.size() < nodes_.size() * nw) scratch_.resize(nodes_.size() * nw);
  const Word tail = length % kWordBits == 0 ? ~Word{0} : low_mask(length % kWordBits);
  auto row = [&](std::uint32_t k) { return scratch_.data() + static_cast<std::size_t>(k) * nw; };
  auto valid = [&](std::size_t w) { return w + 1 == nw ? tail : ~Word{0}; };

  for (std::uint32_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    Word* r = row(k);
    const Word* a = row(n.a);
    const Word* b = row(n.b);
    switch (n.op) {
      case Op::True:
        for (std::size_t w = 0; w < nw; ++w) r[w] = valid(w);
        break;
      case Op::False:
        std::fill(r, r + nw, 0);
        break;
      case Op::Prop: {
        if (n.prop >= columns.size()) throw std::out_of_range("missing proposition column");
        const Word* c = columns[n.prop];
        for (std::size_t w = 0; w < nw; ++w) r[w] = c[w] & valid(w);
        break;
      }
      case Op::Not:
        for (std::size_t w = 0; w < nw; ++w) r[w] = ~a[w] & valid(w);
        break;
      case Op::And:
        for (std::size_t w = 0; w < nw; ++w) r[w] = a[w] & b[w];
        break;
      case Op::Or:
        for (std::size_t w = 0; w < nw; ++w) r[w] = a[w] | b[w];
        break;
      case Op::Implies:
        for (std::size_t w = 0; w < nw; ++w) r[w] = (~a[w] | b[w]) & valid(w);
        break;
      case Op::Next:
        // bits past the end are zero, so the last position reads false
        for (std::size_t w = 0; w < nw; ++w) r[w] = (a[w] >> 1) | (w + 1 < nw ? a[w + 1] << 63 : 0);
        break;
      case Op::Future: {
        bool later = false;
        for (std::size_t w = nw; w-- > 0;) {
          r[w] = (later ? ~Word{0} : smear_down(a[w])) & valid(w);
          later = later || a[w] != 0;
        }
        break;
      }
      case Op::Globally: {
        bool broken = false;
        for (std::size_t w = nw; w-- > 0;) {
          const Word bad = ~a[w] & valid(w);
          r[w] = (broken ? 0 : ~smear_down(bad)) & valid(w);
          broken = broken || bad != 0;
        }
        break;
      }
      case Op::Until:
      case Op::Before: {
        const bool before = n.op == Op::Before;
        bool carry = false;
        for (std::size_t w = nw; w-- > 0;) {
          const Word lhs = before ? ~a[w] & valid(w) : a[w];
          const Word u = until_word(lhs, b[w], carry);
          r[w] = before ? ~u & valid(w) : u;
          carry = u & 1U;
        }
        break;
      }
    }
  }
  return {row(static_cast<std::uint32_t>(nodes_.size() - 1)), nw};
}

Word CompiledFormula::eval_word(std::span<const Word> columns, std::size_t length) {
  if (length > kWordBits) throw std::invalid_argument("eval_word supports at most 64 positions");
  if (word_scratch_.size() < nodes_.size()) word_scratch_.resize(nodes_.size());
  Word* s = word_scratch_.data();
  const Word valid = low_mask(length);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    const Word a = s[n.a];
    const Word b = s[n.b];
    Word r = 0;
    switch (n.op) {
      case Op::True: r = valid; break;
      case Op::False: r = 0; break;
      case Op::Prop: r = columns[n.prop] & valid; break;
      case Op::Not: r = ~a & valid; break;
      case Op::And: r = a & b; break;
      case Op::Or: r = a | b; break;
      case Op::Implies: r = (~a | b) & valid; break;
      case Op::Next: r = a >> 1; break;
      case Op::Future: r = smear_down(a); break;
      case Op::Globally: r = ~smear_down(~a & valid) & valid; break;
      case Op::Until: r = until_word(a, b, false); break;
      case Op::Before: r = ~until_word(~a & valid, b, false) & valid; break;
    }
    s[k] = r;
  }
  return s[nodes_.size() - 1];
}

bool eval(const Formula& f, const PropTrace& trace, std::size_t pos) {
  if (pos >= trace.length()) throw std::out_of_range("position past end of trace");
  CompiledFormula cf(f, trace.names());
  const auto cols = trace.column_pointers();
  return test_bit(cf.eval(cols, trace.length()), pos);
}

std::vector<bool> eval_all(const Formula& f, const PropTrace& trace) {
  CompiledFormula cf(f, trace.names());
  const auto cols = trace.column_pointers();
  const auto bits = cf.eval(cols, trace.length());
  std::vector<bool> out(trace.length());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = test_bit(bits, i);
  return out;
}

}  // namespace pox::ltl
