// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pox/ltl/properties.hpp"
#include "pox/monitor/monitor.hpp"

namespace pox::ltl {

struct FuzzOptions {
  std::size_t traces = 10'000;
  std::uint64_t seed = 1;
  // Monitor tables to run; defaults to the standard set.
  std::optional<std::vector<monitor::SubmoduleTable>> tables;
  std::size_t max_details = 5;
};

struct FuzzFinding {
  std::size_t trace = 0;
  std::string scenario;
  std::string property;
  std::size_t position = 0;
  std::uint64_t cycle = 0;
  friend bool operator==(const FuzzFinding&, const FuzzFinding&) = default;
};

struct FuzzReport {
  std::size_t traces = 0;
  std::size_t non_vacuous = 0;    // traces where attestation ran with exec set
  std::size_t discrepancies = 0;  // traces failing any check
  std::uint64_t cycles = 0;
  std::map<std::string, std::size_t> failures_by_property;
  std::vector<FuzzFinding> details;
  friend bool operator==(const FuzzReport&, const FuzzReport&) = default;
};

// Random programs, bounds, DMA/IRQ schedules, resets and metadata tampering,
// each run on a full device; every trace must satisfy all monitor invariants
// and the execution proof.
FuzzReport execution_fuzz(const FuzzOptions& opts);

// Every sub-module with its planted mutation applied.
std::vector<monitor::SubmoduleTable> broken_tables();

std::string format_report(const FuzzReport& r);

}  // namespace pox::ltl
