// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "pox/machine/machine.hpp"
#include "pox/monitor/metadata.hpp"
#include "pox/swatt/hmac.hpp"

namespace pox::swatt {

using Key = std::array<std::uint8_t, machine::kKeyBytes>;
using monitor::Challenge;
using monitor::MetadataRegisters;

Digest derive_key(const Key& master, const Challenge& chal);

// chal ∥ or_min ∥ or_max ∥ er_min ∥ er_max ∥ exec, little-endian (41 bytes).
Bytes serialize_metadata(const MetadataRegisters& md);
// ER bytes ∥ OR bytes ∥ serialize_metadata(md). Inverted ranges and an
// absent OR contribute no bytes.
Bytes serialize_attested(std::span<const std::uint8_t> mem, const MetadataRegisters& md);
Bytes serialize_attested(std::span<const std::uint8_t> er_bytes, std::span<const std::uint8_t> or_bytes,
                         const MetadataRegisters& md);

// HMAC(derive_key(master, chal), serialization) without running the machine.
Digest attest_token(const Key& master, const Challenge& chal, std::span<const std::uint8_t> serialization);

// Affine runtime model of the attestation routine.
struct CostModel {
  std::uint64_t base = 10000;
  std::uint64_t per_byte = 878;
};
inline constexpr CostModel kFastCostModel{128, 1};

std::uint64_t cycle_cost(std::size_t attested_bytes, const CostModel& model = {}) noexcept;
// Cycles the routine actually occupies: never fewer than its bus accesses.
std::uint64_t routine_cycles(std::size_t attested_bytes, const CostModel& model = {}) noexcept;

enum class AttestStatus : std::uint8_t { Completed, AbortedByReset };

struct AttestResult {
  AttestStatus status = AttestStatus::Completed;
  Digest h{};
  std::uint64_t cycles = 0;
};

using CycleSink = std::function<void(machine::SignalSnapshot)>;

// Runs the trusted routine starting at pc = cr.min. Every cycle is handed
// to `emit` before the next one starts. Reads Chal from mr, K from kr, then
// ER, OR and the metadata block, and finally writes h into mr. A DMA or IRQ
// event while it runs resets the device and aborts.
AttestResult attest(machine::Machine& m, const CycleSink& emit, const CostModel& model = {});

}  // namespace pox::swatt
