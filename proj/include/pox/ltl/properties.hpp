// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pox/ltl/evaluator.hpp"
#include "pox/monitor/monitor.hpp"

namespace pox::ltl {

// An invariant G(body); body is usually an implication.
struct NamedProperty {
  std::string name;
  Formula body;
  Formula formula() const { return G(body); }
};

// The ten hardware invariants the monitor must enforce.
const std::vector<NamedProperty>& monitor_properties();
const NamedProperty& monitor_property(const std::string& name);
// Invariants owned by one sub-module, plus the shared response invariant.
std::vector<NamedProperty> submodule_properties(monitor::SubmoduleId id);

// Execution proof: the antecedent must hold strictly before the first cycle
// that has exec set while running attestation code.
Formula execution_antecedent();
Formula attestation_with_exec();
Formula execution_proof();  // antecedent B attestation_with_exec

struct Verdict {
  std::string name;
  std::string formula;
  bool holds = true;
  bool vacuous = false;  // the trigger never occurred
  std::optional<std::size_t> first_violation;
  std::optional<std::uint64_t> violation_cycle;
};

Verdict check_property(const NamedProperty& p, const PropTrace& trace);
// Passes when no attestation cycle has exec set, or when the antecedent holds
// at some earlier position of the trace cut at that first cycle.
Verdict check_execution_proof(const PropTrace& trace);

// Per-attestation form used by the fuzzer: every attestation cycle with exec
// set is justified by the latest ER entry before it, judged on the window
// from that entry to the cycle.
Verdict check_execution_windows(const PropTrace& trace);

struct CheckReport {
  std::vector<Verdict> verdicts;
  std::size_t length = 0;
  bool ok() const noexcept;
};

CheckReport check_trace(const PropTrace& trace);
std::string format_report(const CheckReport& r);

}  // namespace pox::ltl
