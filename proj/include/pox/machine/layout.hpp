// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "pox/machine/types.hpp"

namespace pox::machine {

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Byte offsets inside the metadata block. The EXEC byte sits first so that
// the block base can be odd while every 16-bit field stays writable.
inline constexpr std::size_t kExecOffset = 0;
inline constexpr std::size_t kErMinOffset = 1;
inline constexpr std::size_t kErMaxOffset = 3;
inline constexpr std::size_t kOrMinOffset = 5;
inline constexpr std::size_t kOrMaxOffset = 7;
inline constexpr std::size_t kChalOffset = 9;
inline constexpr std::size_t kRegisterFileBytes = 9;
inline constexpr std::size_t kChallengeBytes = 32;
inline constexpr std::size_t kMetadataBytes = kRegisterFileBytes + kChallengeBytes;
inline constexpr std::size_t kKeyBytes = 32;

struct MemoryLayout {
  AddressRange cr{0xA000, 0xBFFF};
  AddressRange kr{0x9F00, 0x9F1F};
  AddressRange mr{0x9E00, 0x9E1F};
  AddressRange xs{0x9C00, 0x9DFF};
  AddressRange metadata{0x0021, 0x0049};
  AddressRange prog{0xE000, 0xFFFF};
  AddressRange data{0x1000, 0x8FFF};
  AddressRange gpio{0x001C, 0x001F};
  // Where host-driven untrusted instructions are considered to execute.
  Address runtime_pc = 0x8F00;

  Address exec_address() const noexcept { return static_cast<Address>(metadata.min + kExecOffset); }
  // Metadata bytes software could change; the EXEC byte is hardware-owned.
  AddressRange protected_metadata() const noexcept {
    return {static_cast<Address>(metadata.min + kErMinOffset), metadata.max};
  }

  // Throws LayoutError naming the first broken invariant.
  void validate() const;

  friend bool operator==(const MemoryLayout&, const MemoryLayout&) = default;
};

}  // namespace pox::machine
