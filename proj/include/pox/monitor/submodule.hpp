// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pox/monitor/abstract_input.hpp"

namespace pox::monitor {

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A letter is the sub-module's own view of an AbstractInput: bit j is the
// value of inputs[j].
using Letter = std::uint32_t;

// Conjunction of literals over the table inputs; care == 0 means "true".
struct Guard {
  Letter care = 0;
  Letter value = 0;
  bool matches(Letter l) const noexcept { return (l & care) == value; }
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct Transition {
  std::uint8_t from = 0;
  Guard guard;
  std::uint8_t to = 0;
  bool exec = false;
  friend bool operator==(const Transition&, const Transition&) = default;
};

inline constexpr std::string_view kNotExecState = "NotExec";

// Mealy machine given as an ordered transition list; for each state the
// first row whose guard matches fires.
struct SubmoduleTable {
  std::string name;
  std::vector<InputBit> inputs;
  std::vector<std::string> states;
  std::uint8_t initial = 0;
  std::vector<Transition> rows;

  std::size_t letter_count() const noexcept { return std::size_t{1} << inputs.size(); }
  Letter letter_of(const AbstractInput& in) const noexcept;
  AbstractInput input_of(Letter l) const noexcept;
  std::uint8_t state_index(std::string_view s) const;
  bool is_not_exec(std::uint8_t state) const noexcept { return states[state] == kNotExecState; }
  // Throws TableError when a (state, letter) pair has no row, or a row's
  // exec bit disagrees with its target state.
  void validate() const;

  friend bool operator==(const SubmoduleTable&, const SubmoduleTable&) = default;
};

struct Step {
  std::uint8_t next = 0;
  bool exec = false;
};

Step tick_submodule(const SubmoduleTable& table, std::uint8_t state, const AbstractInput& in);
Step tick_submodule(const SubmoduleTable& table, std::uint8_t state, Letter letter);

// Dense lookup table for the hot path.
class CompiledSubmodule {
 public:
  explicit CompiledSubmodule(SubmoduleTable table);

  const SubmoduleTable& table() const noexcept { return table_; }
  Step step(std::uint8_t state, Letter l) const noexcept { return steps_[(state << width_) | l]; }
  Step step(std::uint8_t state, const AbstractInput& in) const noexcept { return step(state, table_.letter_of(in)); }

 private:
  SubmoduleTable table_;
  unsigned width_;
  std::vector<Step> steps_;
};

std::string guard_to_string(const SubmoduleTable& t, const Guard& g);
Guard parse_guard(const SubmoduleTable& t, std::string_view text);

// Text form: header lines ("submodule", "inputs", "states", "initial"),
// then one "state | guard | next-state | exec-bit" line per transition.
void write_table(std::ostream& os, const SubmoduleTable& t);
SubmoduleTable read_table(std::istream& is);

}  // namespace pox::monitor
