// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/monitor/monitor.hpp"

namespace pox::monitor {

Monitor::Monitor() : Monitor(standard_tables()) {}

Monitor::Monitor(std::vector<SubmoduleTable> tables) {
  subs_.reserve(tables.size());
  for (auto& t : tables) subs_.emplace_back(std::move(t));
  restart();
}

void Monitor::restart() {
  state_.states.clear();
  for (const auto& s : subs_) state_.states.push_back(s.table().initial);
  state_.exec = false;
  outputs_.assign(subs_.size(), false);
}

bool Monitor::tick(const AbstractInput& in) {
  bool all = true;
  for (std::size_t i = 0; i < subs_.size(); ++i) {
    const Step st = subs_[i].step(state_.states[i], in);
    state_.states[i] = st.next;
    outputs_[i] = st.exec;
    all = all && st.exec;
  }
  state_.exec = all;
  return all;
}

bool Monitor::tick(machine::SignalSnapshot& s, const MetadataRegisters& md, const machine::MemoryLayout& layout) {
  s.exec = tick(project(s, md, layout));
  return s.exec;
}

}  // namespace pox::monitor
