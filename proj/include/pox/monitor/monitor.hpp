// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "pox/monitor/submodule.hpp"

namespace pox::monitor {

enum class SubmoduleId : std::uint8_t {
  Immutability = 1,
  Atomicity,
  OutputProtection,
  Boundaries,
  ErCrDisjoint,
  MetadataFsm,
  ResetGate,
};
inline constexpr std::array<SubmoduleId, 7> kAllSubmodules{
    SubmoduleId::Immutability, SubmoduleId::Atomicity,    SubmoduleId::OutputProtection, SubmoduleId::Boundaries,
    SubmoduleId::ErCrDisjoint, SubmoduleId::MetadataFsm, SubmoduleId::ResetGate};

SubmoduleTable standard_table(SubmoduleId id);
std::vector<SubmoduleTable> standard_tables();
// File-friendly name, e.g. "atomicity".
std::string submodule_name(SubmoduleId id);

// A planted single-row change, used to show the checkers catch bugs.
struct Mutation {
  std::string description;
  std::size_t row = 0;
  Transition replacement;
};
Mutation standard_mutation(SubmoduleId id);
SubmoduleTable apply(SubmoduleTable table, const Mutation& m);

struct MonitorState {
  std::vector<std::uint8_t> states;
  bool exec = false;
  friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

class Monitor {
 public:
  Monitor();
  explicit Monitor(std::vector<SubmoduleTable> tables);

  // Ticks every sub-module on the same input; exec is the AND of outputs.
  bool tick(const AbstractInput& in);
  // project + tick, backfilling s.exec.
  bool tick(machine::SignalSnapshot& s, const MetadataRegisters& md, const machine::MemoryLayout& layout);

  const MonitorState& state() const noexcept { return state_; }
  bool exec() const noexcept { return state_.exec; }
  const std::vector<CompiledSubmodule>& submodules() const noexcept { return subs_; }
  std::vector<bool> outputs() const { return outputs_; }
  void restart();

 private:
  std::vector<CompiledSubmodule> subs_;
  MonitorState state_;
  std::vector<bool> outputs_;
};

}  // namespace pox::monitor
