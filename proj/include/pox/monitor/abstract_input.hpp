// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pox/machine/machine.hpp"
#include "pox/monitor/metadata.hpp"

namespace pox::monitor {

enum class InputBit : std::uint8_t {
  PcInEr,
  PcEqErMin,
  PcEqErMax,
  PcInCr,
  PcEqCrMin,
  Irq,
  Reset,
  DmaEn,
  WEr,
  DmaEr,
  WOr,
  DmaOr,
  WMeta,
  DmaMeta,
  BoundsValid,
  ErCrDisjoint,
};
inline constexpr std::size_t kInputBitCount = 16;

std::string_view input_bit_name(InputBit b) noexcept;
std::optional<InputBit> input_bit_from_name(std::string_view name) noexcept;

struct AbstractInput {
  std::uint32_t bits = 0;

  bool operator[](InputBit b) const noexcept { return (bits >> static_cast<unsigned>(b)) & 1u; }
  AbstractInput& set(InputBit b, bool v = true) noexcept {
    const auto m = 1u << static_cast<unsigned>(b);
    bits = v ? (bits | m) : (bits & ~m);
    return *this;
  }
  friend bool operator==(const AbstractInput&, const AbstractInput&) = default;
};

std::string to_string(const AbstractInput& in);

// pc_eq_ermax holds when the 4-byte instruction at pc covers er_max.
AbstractInput project(const machine::SignalSnapshot& s, const MetadataRegisters& md,
                      const machine::MemoryLayout& layout) noexcept;

// Combinations a real cycle can produce. The exhaustive checker enumerates
// only these.
bool structurally_consistent(const AbstractInput& in) noexcept;

}  // namespace pox::monitor
