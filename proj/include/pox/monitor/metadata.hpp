// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "pox/machine/layout.hpp"

namespace pox::monitor {

// OR = ⊥ is encoded by setting both bounds to this sentinel.
inline constexpr Address kNoOutput = 0xFFFF;

using Challenge = std::array<std::uint8_t, machine::kChallengeBytes>;

struct MetadataRegisters {
  Address er_min = 0;
  Address er_max = 0;
  Address or_min = kNoOutput;
  Address or_max = kNoOutput;
  std::uint8_t exec = 0;
  Challenge chal{};

  AddressRange er() const noexcept { return {er_min, er_max}; }
  bool output_absent() const noexcept { return or_min == kNoOutput && or_max == kNoOutput; }
  // Empty (min > max) when OR is absent.
  AddressRange output() const noexcept {
    return output_absent() ? AddressRange{1, 0} : AddressRange{or_min, or_max};
  }

  friend bool operator==(const MetadataRegisters&, const MetadataRegisters&) = default;
};

// Bytes of register file, excluding the challenge slot.
constexpr std::size_t register_file_size() noexcept {
  return sizeof(MetadataRegisters::er_min) + sizeof(MetadataRegisters::er_max) +
         sizeof(MetadataRegisters::or_min) + sizeof(MetadataRegisters::or_max) +
         sizeof(MetadataRegisters::exec);
}
static_assert(register_file_size() == machine::kRegisterFileBytes);

enum class MetadataField : std::uint8_t { ErMin, ErMax, OrMin, OrMax, Exec, Chal };
enum class WriteSource : std::uint8_t { Software, Dma };

Address field_address(MetadataField f, const machine::MemoryLayout& layout) noexcept;

// `block` is the 41-byte metadata region.
std::array<std::uint8_t, machine::kMetadataBytes> encode_metadata(const MetadataRegisters& md);
MetadataRegisters decode_metadata(std::span<const std::uint8_t> block);
MetadataRegisters read_metadata(std::span<const std::uint8_t> mem, const machine::MemoryLayout& layout);
void store_metadata(std::span<std::uint8_t> mem, const machine::MemoryLayout& layout, const MetadataRegisters& md);

// Untrusted write of one field. Writes to exec are ignored.
MetadataRegisters write_metadata(MetadataRegisters md, MetadataField field, std::uint16_t value, WriteSource via);
MetadataRegisters write_challenge(MetadataRegisters md, const Challenge& chal, WriteSource via);

}  // namespace pox::monitor
