// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/machine/machine.hpp"

#include <algorithm>
#include <stdexcept>

namespace pox::machine {

AccessOutcome guarded_access(const MemoryLayout& layout, Address pc, Address addr, AccessKind kind) {
  switch (kind) {
    case AccessKind::Read:
      if (layout.kr.contains(addr) && !layout.cr.contains(pc)) return AccessOutcome::DenyAndReset;
      return AccessOutcome::Allow;
    case AccessKind::DmaRead:
      return layout.kr.contains(addr) ? AccessOutcome::DenyAndReset : AccessOutcome::Allow;
    case AccessKind::Write:
    case AccessKind::DmaWrite:
      if (addr == layout.exec_address()) return AccessOutcome::Ignore;
      if (layout.cr.contains(addr) || layout.kr.contains(addr)) return AccessOutcome::Ignore;
      return AccessOutcome::Allow;
  }
  return AccessOutcome::Allow;
}

Machine::Machine(MemoryLayout layout) : layout_(layout), gpio_(layout.gpio) { layout_.validate(); }

void Machine::provision(Address at, std::span<const std::uint8_t> bytes) {
  if (static_cast<std::size_t>(at) + bytes.size() > st_.mem.size()) {
    throw std::out_of_range("provision past end of memory");
  }
  std::copy(bytes.begin(), bytes.end(), st_.mem.begin() + at);
}

Bytes Machine::peek(AddressRange r) const {
  if (!r.well_formed()) return {};
  return Bytes(st_.mem.begin() + r.min, st_.mem.begin() + r.max + 1);
}

void Machine::schedule(const DmaEvent& e) {
  auto it = std::upper_bound(dma_.begin(), dma_.end(), e.fire_cycle,
                             [](std::uint64_t c, const DmaEvent& x) { return c < x.fire_cycle; });
  dma_.insert(it, e);
}

void Machine::schedule(const IrqEvent& e) {
  auto it = std::upper_bound(irq_.begin(), irq_.end(), e.fire_cycle,
                             [](std::uint64_t c, const IrqEvent& x) { return c < x.fire_cycle; });
  irq_.insert(it, e);
}

bool Machine::event_due() const noexcept {
  return (!dma_.empty() && dma_.front().fire_cycle <= st_.cycle) ||
         (!irq_.empty() && irq_.front().fire_cycle <= st_.cycle);
}

std::optional<SignalSnapshot> Machine::fire_due_event() {
  if (!dma_.empty() && dma_.front().fire_cycle <= st_.cycle) {
    DmaEvent e = dma_.front();
    dma_.erase(dma_.begin());
    return dma(e.op, e.addr, e.value);
  }
  while (!irq_.empty() && irq_.front().fire_cycle <= st_.cycle) {
    IrqEvent e = irq_.front();
    irq_.erase(irq_.begin());
    if (st_.irq_enabled && !st_.in_isr) return raise_irq(e.vector);
    // masked or nested: dropped
  }
  return std::nullopt;
}

SignalSnapshot Machine::step() {
  if (st_.reset_pending) return trigger_reset();
  const bool had_event = event_due();
  if (auto s = fire_due_event()) return *s;
  if (st_.halted) {
    if (!had_event) throw std::logic_error("step() on an idle machine");
    return finish(begin(st_.pc));  // only a masked IRQ was due: the CPU idles
  }
  // Fetch faults reset in the same cycle: the faulting pc never retires.
  const Address pc = st_.pc;
  if (pc % kInstructionBytes != 0 || layout_.cr.contains(pc) || layout_.kr.contains(pc)) return trigger_reset();
  auto ins = decode(std::span<const std::uint8_t, kInstructionBytes>(st_.mem.data() + pc, kInstructionBytes));
  if (!ins) return trigger_reset();
  return execute(*ins, pc, false);
}

SignalSnapshot Machine::trigger_reset() {
  SignalSnapshot s = begin(0);
  s.reset = true;
  st_.pc = 0;
  st_.regs.fill(0);
  st_.sp = 0;
  st_.halted = false;
  st_.in_isr = false;
  st_.reset_pending = false;
  return finish(s);
}

SignalSnapshot Machine::raise_irq(Address vector) {
  if (!st_.irq_enabled || st_.in_isr) throw std::logic_error("raise_irq with interrupts masked");
  SignalSnapshot s = begin(st_.pc);
  s.irq = true;
  const std::uint32_t lo = static_cast<std::uint32_t>(st_.sp) - 2;
  if (st_.sp < 2 || !stack_ok(lo)) return trap(s);
  bus_write(static_cast<Address>(lo), static_cast<std::uint8_t>(st_.pc & 0xFF));
  bus_write(static_cast<Address>(lo + 1), static_cast<std::uint8_t>(st_.pc >> 8));
  s.w_en = true;
  s.d_addr = static_cast<Address>(lo);
  st_.sp = static_cast<std::uint16_t>(lo);
  st_.pc = vector;
  st_.in_isr = true;
  st_.halted = false;
  return finish(s);
}

SignalSnapshot Machine::dma(DmaOp op, Address addr, std::uint8_t value) {
  SignalSnapshot s = begin(st_.pc);
  s.dma_en = true;
  s.dma_addr = addr;
  const auto kind = op == DmaOp::Read ? AccessKind::DmaRead : AccessKind::DmaWrite;
  switch (guarded_access(layout_, st_.pc, addr, kind)) {
    case AccessOutcome::DenyAndReset:
      st_.reset_pending = true;
      break;
    case AccessOutcome::Ignore:
      break;
    case AccessOutcome::Allow:
      if (op == DmaOp::Read) {
        last_dma_read_ = st_.mem[addr];
      } else {
        st_.mem[addr] = value;
        if (gpio_.handles(addr)) gpio_.write(st_.cycle, addr, value);
      }
      break;
  }
  return finish(s);
}

SignalSnapshot Machine::inject(const Instruction& ins) {
  if (!decode(encode(ins))) throw std::invalid_argument("inject: non-canonical instruction");
  st_.pc = layout_.runtime_pc;
  return execute(ins, layout_.runtime_pc, true);
}

void Machine::rom_check(Address pc) const {
  if (!layout_.cr.contains(pc)) throw std::logic_error("trusted cycle with pc outside cr");
}

SignalSnapshot Machine::rom_idle(Address pc) {
  rom_check(pc);
  st_.pc = pc;
  return finish(begin(pc));
}

SignalSnapshot Machine::rom_read(Address pc, Address addr, std::uint8_t& out) {
  rom_check(pc);
  st_.pc = pc;
  SignalSnapshot s = begin(pc);
  s.r_en = true;
  s.d_addr = addr;
  out = st_.mem[addr];
  return finish(s);
}

SignalSnapshot Machine::rom_write(Address pc, Address addr, std::uint8_t value) {
  rom_check(pc);
  st_.pc = pc;
  SignalSnapshot s = begin(pc);
  s.w_en = true;
  s.d_addr = addr;
  if (guarded_access(layout_, pc, addr, AccessKind::Write) == AccessOutcome::Allow) st_.mem[addr] = value;
  return finish(s);
}

SignalSnapshot Machine::begin(Address pc) {
  SignalSnapshot s;
  s.cycle = st_.cycle;
  s.pc = pc;
  return s;
}

SignalSnapshot Machine::finish(SignalSnapshot s) {
  ++st_.cycle;
  return s;
}

SignalSnapshot Machine::trap(SignalSnapshot s) {
  st_.reset_pending = true;
  return finish(s);
}

std::uint16_t Machine::reg(std::uint8_t i) const noexcept { return i == kSp ? st_.sp : st_.regs[i]; }

void Machine::set_reg(std::uint8_t i, std::uint16_t v) noexcept {
  if (i == kSp) {
    st_.sp = static_cast<std::uint16_t>(v & ~1u);
  } else {
    st_.regs[i] = v;
  }
}

std::uint8_t Machine::bus_read(Address a) {
  if (gpio_.handles(a)) return gpio_.read(a, st_.mem[a]);
  return st_.mem[a];
}

void Machine::bus_write(Address a, std::uint8_t v) {
  st_.mem[a] = v;
  if (gpio_.handles(a)) gpio_.write(st_.cycle, a, v);
}

bool Machine::stack_ok(std::uint32_t lo) const noexcept {
  return lo >= layout_.data.min && lo + 1 <= layout_.data.max;
}

SignalSnapshot Machine::execute(const Instruction& ins, Address pc, bool injected) {
  SignalSnapshot s = begin(pc);
  const auto next = static_cast<Address>(pc + kInstructionBytes);
  // Injected code returns to the idle runtime unless it transfers control.
  auto fallthrough = [&] {
    if (injected) {
      st_.halted = true;
    } else {
      st_.pc = next;
    }
  };
  auto transfer = [&](Address target) {
    st_.pc = target;
    st_.halted = false;
  };
  auto operand = [&] { return ins.rb == kNoReg ? ins.imm : reg(ins.rb); };
  auto effective = [&] {
    return static_cast<Address>(ins.rb == kNoReg ? ins.imm : static_cast<std::uint16_t>(reg(ins.rb) + ins.imm));
  };

  switch (ins.op) {
    case Opcode::Nop:
      fallthrough();
      break;
    case Opcode::Movi:
      set_reg(ins.ra, ins.imm);
      fallthrough();
      break;
    case Opcode::Load: {
      const Address a = effective();
      s.r_en = true;
      s.d_addr = a;
      if (guarded_access(layout_, pc, a, AccessKind::Read) == AccessOutcome::DenyAndReset) return trap(s);
      set_reg(ins.ra, bus_read(a));
      fallthrough();
      break;
    }
    case Opcode::Store: {
      const Address a = effective();
      s.w_en = true;
      s.d_addr = a;
      if (guarded_access(layout_, pc, a, AccessKind::Write) == AccessOutcome::Allow) {
        bus_write(a, static_cast<std::uint8_t>(reg(ins.ra) & 0xFF));
      }
      fallthrough();
      break;
    }
    case Opcode::Add:
      set_reg(ins.ra, static_cast<std::uint16_t>(reg(ins.ra) + operand()));
      fallthrough();
      break;
    case Opcode::Sub:
      set_reg(ins.ra, static_cast<std::uint16_t>(reg(ins.ra) - operand()));
      fallthrough();
      break;
    case Opcode::Jmp:
      transfer(ins.imm);
      break;
    case Opcode::Jz:
      if (reg(ins.ra) == 0) {
        transfer(ins.imm);
      } else {
        fallthrough();
      }
      break;
    case Opcode::Call: {
      const std::uint32_t lo = static_cast<std::uint32_t>(st_.sp) - 2;
      if (st_.sp < 2 || !stack_ok(lo)) return trap(s);
      bus_write(static_cast<Address>(lo), static_cast<std::uint8_t>(next & 0xFF));
      bus_write(static_cast<Address>(lo + 1), static_cast<std::uint8_t>(next >> 8));
      s.w_en = true;
      s.d_addr = static_cast<Address>(lo);
      st_.sp = static_cast<std::uint16_t>(lo);
      transfer(ins.imm);
      break;
    }
    case Opcode::Ret:
    case Opcode::Reti: {
      const std::uint32_t lo = st_.sp;
      s.r_en = true;
      s.d_addr = static_cast<Address>(lo);
      if (!stack_ok(lo)) return trap(s);
      const Address target = static_cast<Address>(st_.mem[lo] | (st_.mem[lo + 1] << 8));
      st_.sp = static_cast<std::uint16_t>(lo + 2);
      if (ins.op == Opcode::Reti) st_.in_isr = false;
      transfer(target);
      break;
    }
    case Opcode::Halt:
      st_.halted = true;
      break;
  }
  return finish(s);
}

}  // namespace pox::machine
