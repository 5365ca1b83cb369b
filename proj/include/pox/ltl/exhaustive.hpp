// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pox/ltl/properties.hpp"
#include "pox/monitor/monitor.hpp"

namespace pox::ltl {

// One input per letter of the sub-module that some consistent cycle can
// produce, completed with the smallest consistent setting of the other bits.
std::vector<monitor::AbstractInput> pruned_alphabet(const monitor::SubmoduleTable& table);

// Number of input words of length 1..depth over an alphabet of the given size.
std::uint64_t sequence_count(std::uint64_t alphabet_size, std::size_t depth);

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t estimate, std::uint64_t budget);
  std::uint64_t estimate() const noexcept { return estimate_; }

 private:
  std::uint64_t estimate_;
};

struct Counterexample {
  std::string submodule;
  std::string property;
  std::vector<monitor::AbstractInput> inputs;
  std::vector<bool> exec;
  std::size_t position = 0;  // first position where the invariant body fails
};

struct SubmoduleVerdict {
  std::string submodule;
  std::vector<std::string> properties;
  std::size_t alphabet_size = 0;
  std::uint64_t sequences = 0;
  std::uint64_t counterexamples = 0;
  std::vector<Counterexample> samples;
};

struct ExhaustiveOptions {
  std::size_t depth = 8;
  std::uint64_t budget = 1'000'000'000;  // total input words across sub-modules
  std::size_t max_samples = 3;           // kept per sub-module
};

struct ExhaustiveReport {
  std::size_t depth = 0;
  std::vector<SubmoduleVerdict> submodules;
  double seconds = 0;
  std::uint64_t sequences() const noexcept;
  std::uint64_t counterexamples() const noexcept;
};

// Every input word up to the depth bound, fed to one sub-module; each prefix
// is a finite trace on which every invariant must hold.
SubmoduleVerdict check_submodule(const monitor::SubmoduleTable& table, const std::vector<NamedProperty>& properties,
                                 const ExhaustiveOptions& opts);

struct SubmoduleUnderTest {
  monitor::SubmoduleId id;
  monitor::SubmoduleTable table;
};
std::vector<SubmoduleUnderTest> standard_units();

// Throws BudgetExceeded before doing any work when the total is too large.
ExhaustiveReport check_submodules(const std::vector<SubmoduleUnderTest>& units, const ExhaustiveOptions& opts);

// Runs the sub-module on the inputs from its initial state.
std::vector<bool> replay(const monitor::SubmoduleTable& table, const std::vector<monitor::AbstractInput>& inputs);
// Proposition trace of a replayed counterexample.
PropTrace counterexample_trace(const Counterexample& c);

std::string format_report(const ExhaustiveReport& r);
std::string format_counterexample(const Counterexample& c);

}  // namespace pox::ltl
