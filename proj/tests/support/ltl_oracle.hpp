// Textbook finite-trace LTL semantics, written position by position straight
// from the definitions. Used to cross-check the bit-parallel evaluator.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pox/ltl/formula.hpp"
#include "pox/ltl/prop_trace.hpp"

namespace pox::test {

// rows[i][k] is proposition k at position i.
struct SmallTrace {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> rows;
  std::size_t size() const { return rows.size(); }
};

inline bool naive_holds(const ltl::Formula& f, const SmallTrace& t, std::size_t i) {
  using ltl::Op;
  const std::size_t n = t.size();
  switch (f.op()) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Prop:
      for (std::size_t k = 0; k < t.names.size(); ++k) {
        if (t.names[k] == f.name()) return t.rows[i][k];
      }
      throw std::out_of_range("unknown proposition " + f.name());
    case Op::Not:
      return !naive_holds(f.lhs(), t, i);
    case Op::And:
      return naive_holds(f.lhs(), t, i) && naive_holds(f.rhs(), t, i);
    case Op::Or:
      return naive_holds(f.lhs(), t, i) || naive_holds(f.rhs(), t, i);
    case Op::Implies:
      return !naive_holds(f.lhs(), t, i) || naive_holds(f.rhs(), t, i);
    case Op::Next:
      return i + 1 < n && naive_holds(f.lhs(), t, i + 1);
    case Op::Future:
      for (std::size_t k = i; k < n; ++k) {
        if (naive_holds(f.lhs(), t, k)) return true;
      }
      return false;
    case Op::Globally:
      for (std::size_t k = i; k < n; ++k) {
        if (!naive_holds(f.lhs(), t, k)) return false;
      }
      return true;
    case Op::Until:
      // some k >= i has rhs, and lhs holds on [i, k)
      for (std::size_t k = i; k < n; ++k) {
        if (naive_holds(f.rhs(), t, k)) return true;
        if (!naive_holds(f.lhs(), t, k)) return false;
      }
      return false;
    case Op::Before:
      // every k >= i with rhs is preceded, strictly and within [i, k), by lhs
      for (std::size_t k = i; k < n; ++k) {
        if (naive_holds(f.rhs(), t, k)) return false;
        if (naive_holds(f.lhs(), t, k)) return true;
      }
      return true;
  }
  return false;
}

// Every formula of depth <= max_depth over the given atoms, built with all
// unary (! X F G) and binary (& | -> U B) connectives.
inline std::vector<ltl::Formula> formulas_up_to(std::size_t max_depth, const std::vector<ltl::Formula>& atoms) {
  using ltl::Op;
  std::vector<ltl::Formula> level = atoms;
  for (std::size_t d = 2; d <= max_depth; ++d) {
    std::vector<ltl::Formula> next = atoms;
    for (Op op : {Op::Not, Op::Next, Op::Future, Op::Globally}) {
      for (const auto& a : level) next.push_back(ltl::Formula::unary(op, a));
    }
    for (Op op : {Op::And, Op::Or, Op::Implies, Op::Until, Op::Before}) {
      for (const auto& a : level) {
        for (const auto& b : level) next.push_back(ltl::Formula::binary(op, a, b));
      }
    }
    level = std::move(next);
  }
  return level;
}

// All assignments of `props` propositions over lengths 1..max_len. Trace
// number r of length n reads proposition k at position i from bit i*props+k.
inline std::vector<SmallTrace> traces_up_to(std::size_t max_len, const std::vector<std::string>& names) {
  std::vector<SmallTrace> out;
  const std::size_t props = names.size();
  for (std::size_t n = 1; n <= max_len; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (n * props);
    for (std::uint64_t code = 0; code < count; ++code) {
      SmallTrace t{names, std::vector<std::vector<bool>>(n, std::vector<bool>(props))};
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < props; ++k) t.rows[i][k] = (code >> (i * props + k)) & 1U;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

inline ltl::PropTrace to_prop_trace(const SmallTrace& t) {
  ltl::PropTrace out(t.names, t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t k = 0; k < t.names.size(); ++k) out.set(k, i, t.rows[i][k]);
  }
  return out;
}

}  // namespace pox::test
