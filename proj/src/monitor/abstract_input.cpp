// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/monitor/abstract_input.hpp"

#include <array>

namespace pox::monitor {
namespace {

constexpr std::array<std::string_view, kInputBitCount> kNames{
    "pc_in_er", "pc_eq_ermin", "pc_eq_ermax", "pc_in_cr", "pc_eq_crmin", "irq",
    "reset",    "dma_en",      "w_er",        "dma_er",   "w_or",        "dma_or",
    "w_meta",   "dma_meta",    "bounds_valid", "er_cr_disjoint"};

}  // namespace

std::string_view input_bit_name(InputBit b) noexcept { return kNames[static_cast<std::size_t>(b)]; }

std::optional<InputBit> input_bit_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<InputBit>(i);
  }
  return std::nullopt;
}

std::string to_string(const AbstractInput& in) {
  std::string out;
  for (std::size_t i = 0; i < kInputBitCount; ++i) {
    if (!in[static_cast<InputBit>(i)]) continue;
    if (!out.empty()) out += ' ';
    out += kNames[i];
  }
  return out.empty() ? "-" : out;
}

AbstractInput project(const machine::SignalSnapshot& s, const MetadataRegisters& md,
                      const machine::MemoryLayout& layout) noexcept {
  const AddressRange er = md.er();
  const AddressRange out = md.output();
  const AddressRange meta = layout.protected_metadata();
  const AddressRange& cr = layout.cr;

  AbstractInput in;
  const bool in_er = er.contains(s.pc);
  in.set(InputBit::PcInEr, in_er);
  in.set(InputBit::PcEqErMin, in_er && s.pc == er.min);
  in.set(InputBit::PcEqErMax, in_er && er.max - s.pc < static_cast<int>(machine::kInstructionBytes));
  in.set(InputBit::PcInCr, cr.contains(s.pc));
  in.set(InputBit::PcEqCrMin, s.pc == cr.min);
  in.set(InputBit::Irq, s.irq);
  in.set(InputBit::Reset, s.reset);
  in.set(InputBit::DmaEn, s.dma_en);
  in.set(InputBit::WEr, s.w_en && er.contains(s.d_addr));
  in.set(InputBit::DmaEr, s.dma_en && er.contains(s.dma_addr));
  in.set(InputBit::WOr, s.w_en && out.contains(s.d_addr));
  in.set(InputBit::DmaOr, s.dma_en && out.contains(s.dma_addr));
  in.set(InputBit::WMeta, s.w_en && meta.contains(s.d_addr));
  in.set(InputBit::DmaMeta, s.dma_en && meta.contains(s.dma_addr));
  in.set(InputBit::BoundsValid, md.er_min <= md.er_max && md.or_min <= md.or_max);
  in.set(InputBit::ErCrDisjoint, er.max < cr.min || er.min > cr.max);
  return in;
}

bool structurally_consistent(const AbstractInput& in) noexcept {
  using B = InputBit;
  if (in[B::PcEqErMin] && !in[B::PcInEr]) return false;
  if (in[B::PcEqErMax] && !in[B::PcInEr]) return false;
  if (in[B::PcEqCrMin] && !in[B::PcInCr]) return false;
  // pc can sit in both ranges only when they overlap
  if (in[B::PcInEr] && in[B::PcInCr] && in[B::ErCrDisjoint]) return false;
  const bool cpu_write = in[B::WEr] || in[B::WOr] || in[B::WMeta];
  const bool dma_region = in[B::DmaEr] || in[B::DmaOr] || in[B::DmaMeta];
  if (dma_region && !in[B::DmaEn]) return false;
  // DMA stalls the CPU; an IRQ cycle is a CPU cycle
  if (cpu_write && in[B::DmaEn]) return false;
  if (in[B::Irq] && in[B::DmaEn]) return false;
  if (in[B::Reset] && (in[B::Irq] || in[B::DmaEn] || cpu_write)) return false;
  return true;
}

}  // namespace pox::monitor
