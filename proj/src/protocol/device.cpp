// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/protocol/device.hpp"

namespace pox::protocol {

using machine::Instruction;
namespace ins = machine::ins;

Device::Device(const swatt::Key& master, DeviceConfig cfg)
    : m_(cfg.layout), mon_(std::move(cfg.tables)), cost_(cfg.cost), record_trace_(cfg.record_trace) {
  const auto& layout = m_.layout();
  const auto halt = machine::encode(ins::halt());
  m_.provision(0x0000, halt);
  m_.provision(layout.kr.min, master);
  m_.provision(layout.metadata.min, monitor::encode_metadata(monitor::MetadataRegisters{}));
  record(m_.trigger_reset());
  run(kSettleBudget);
}

monitor::MetadataRegisters Device::metadata() const { return monitor::read_metadata(m_.state().mem, layout()); }

void Device::record(machine::SignalSnapshot s) {
  const auto md = metadata();
  mon_.tick(s, md, layout());
  m_.hw_write(layout().exec_address(), s.exec ? 1 : 0);
  if (md.er().contains(s.pc) && s.pc == md.er_min) last_entry_ = s.cycle;
  BoundsChange b{s.cycle, md.er_min, md.er_max, md.or_min, md.or_max};
  if (timeline_.empty() || timeline_.back().er_min != b.er_min || timeline_.back().er_max != b.er_max ||
      timeline_.back().or_min != b.or_min || timeline_.back().or_max != b.or_max) {
    timeline_.push_back(b);
  }
  if (record_trace_) trace_.push_back(s);
}

RunStatus Device::run(std::uint64_t max_cycles) {
  const std::uint64_t stop = m_.cycle() + max_cycles;
  while (m_.cycle() < stop) {
    if (!m_.reset_pending() && !m_.halted() && m_.state().pc == layout().cr.min) {
      last_attest_ = swatt::attest(m_, [this](machine::SignalSnapshot s) { record(s); }, cost_);
      continue;
    }
    if (m_.halted() && !m_.reset_pending() && !m_.event_due()) return RunStatus::Idle;
    record(m_.step());
  }
  return m_.halted() && !m_.reset_pending() && !m_.event_due() ? RunStatus::Idle : RunStatus::BudgetExhausted;
}

void Device::settle() {
  if (m_.reset_pending() || m_.event_due()) run(kSettleBudget);
}

void Device::sw_exec(const Instruction& i) {
  settle();
  record(m_.inject(i));
}

void Device::sw_store(Address a, std::uint8_t v) {
  sw_exec(ins::movi(0, v));
  sw_exec(ins::store(0, a));
}

std::uint8_t Device::sw_load(Address a) {
  sw_exec(ins::load(0, a));
  return static_cast<std::uint8_t>(m_.state().regs[0] & 0xFF);
}

void Device::sw_write(Address at, std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < bytes.size(); ++i) sw_store(static_cast<Address>(at + i), bytes[i]);
}

Bytes Device::sw_read(AddressRange r) {
  Bytes out;
  for (std::size_t i = 0; i < r.size(); ++i) out.push_back(sw_load(static_cast<Address>(r.min + i)));
  return out;
}

void Device::sw_set_sp(std::uint16_t sp) { sw_exec(ins::movi(machine::kSp, sp)); }

void Device::sw_jump(Address target) { sw_exec(ins::jmp(target)); }

void Device::dma_write(Address a, std::uint8_t v) {
  settle();
  record(m_.dma(machine::DmaOp::Write, a, v));
}

std::uint8_t Device::dma_read(Address a) {
  settle();
  record(m_.dma(machine::DmaOp::Read, a));
  return m_.last_dma_read();
}

void Device::irq(Address vector) {
  settle();
  record(m_.raise_irq(vector));
}

void Device::reset() {
  record(m_.trigger_reset());
  run(kSettleBudget);
}

void Device::idle(std::uint64_t n) {
  const std::uint64_t stop = m_.cycle() + n;
  while (m_.cycle() < stop) {
    if (m_.reset_pending() || m_.event_due() || !m_.halted()) {
      run(1);
    } else {
      record(m_.inject(ins::nop()));
    }
  }
}

}  // namespace pox::protocol
