// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pox/machine/gpio.hpp"
#include "pox/machine/isa.hpp"
#include "pox/machine/layout.hpp"

namespace pox::machine {

// Values of the monitored wires during one cycle. exec is filled in by the
// monitor after the cycle retires.
struct SignalSnapshot {
  std::uint64_t cycle = 0;
  Address pc = 0;
  bool r_en = false;
  bool w_en = false;
  Address d_addr = 0;
  bool dma_en = false;
  Address dma_addr = 0;
  bool irq = false;
  bool reset = false;
  bool exec = false;

  friend bool operator==(const SignalSnapshot&, const SignalSnapshot&) = default;
};

using Trace = std::vector<SignalSnapshot>;

enum class DmaOp : std::uint8_t { Read, Write };

struct DmaEvent {
  std::uint64_t fire_cycle = 0;
  DmaOp op = DmaOp::Write;
  Address addr = 0;
  std::uint8_t value = 0;
};

struct IrqEvent {
  std::uint64_t fire_cycle = 0;
  Address vector = 0;
};

using DmaScript = std::vector<DmaEvent>;
using IrqScript = std::vector<IrqEvent>;

enum class AccessKind : std::uint8_t { Read, Write, DmaRead, DmaWrite };
enum class AccessOutcome : std::uint8_t { Allow, DenyAndReset, Ignore };

// Hardware access control. `pc` is the address of the instruction issuing the
// access (for DMA: the stalled instruction).
AccessOutcome guarded_access(const MemoryLayout& layout, Address pc, Address addr, AccessKind kind);

struct MachineState {
  Address pc = 0;
  std::array<std::uint16_t, kRegisterCount> regs{};
  std::uint16_t sp = 0;
  std::vector<std::uint8_t> mem = std::vector<std::uint8_t>(0x10000, 0);
  std::uint64_t cycle = 0;
  bool halted = false;      // idle in the host-driven runtime
  bool irq_enabled = true;  // runtime's interrupt enable; survives reset
  bool in_isr = false;
  bool reset_pending = false;
};

class Machine {
 public:
  explicit Machine(MemoryLayout layout = {});

  const MemoryLayout& layout() const noexcept { return layout_; }
  const MachineState& state() const noexcept { return st_; }
  std::uint64_t cycle() const noexcept { return st_.cycle; }
  GpioPeripheral& gpio() noexcept { return gpio_; }
  const GpioPeripheral& gpio() const noexcept { return gpio_; }

  // Factory provisioning: no bus cycle, no snapshot.
  void provision(Address at, std::span<const std::uint8_t> bytes);
  std::uint8_t peek(Address a) const noexcept { return st_.mem[a]; }
  Bytes peek(AddressRange r) const;
  // Hardware-owned write path (EXEC mirror); bypasses access control.
  void hw_write(Address a, std::uint8_t v) noexcept { st_.mem[a] = v; }

  void schedule(const DmaEvent& e);
  void schedule(const IrqEvent& e);
  std::size_t pending_events() const noexcept { return dma_.size() + irq_.size(); }
  bool event_due() const noexcept;
  void set_interrupts_enabled(bool on) noexcept { st_.irq_enabled = on; }
  bool halted() const noexcept { return st_.halted; }
  bool reset_pending() const noexcept { return st_.reset_pending; }

  // One cycle: a pending reset, else a due DMA/IRQ event, else the
  // instruction at pc. An idle CPU whose only due event was a masked IRQ
  // spends an idle cycle. Throws std::logic_error when idle with nothing due.
  SignalSnapshot step();
  std::optional<SignalSnapshot> fire_due_event();

  SignalSnapshot trigger_reset();
  // Requires irq_enabled and no handler already running.
  SignalSnapshot raise_irq(Address vector);
  SignalSnapshot dma(DmaOp op, Address addr, std::uint8_t value = 0);
  std::uint8_t last_dma_read() const noexcept { return last_dma_read_; }

  // Runs one instruction on behalf of the untrusted runtime. The snapshot
  // shows pc = layout.runtime_pc. Afterwards the CPU is idle again unless the
  // instruction transferred control (JMP/JZ taken/CALL/RET).
  SignalSnapshot inject(const Instruction& ins);

  // Trusted-ROM cycles (pc must be in cr).
  SignalSnapshot rom_idle(Address pc);
  SignalSnapshot rom_read(Address pc, Address addr, std::uint8_t& out);
  SignalSnapshot rom_write(Address pc, Address addr, std::uint8_t value);
  // End of a trusted routine: control returns to the idle runtime.
  void return_to_runtime() noexcept {
    st_.pc = layout_.runtime_pc;
    st_.halted = true;
  }

 private:
  SignalSnapshot begin(Address pc);
  SignalSnapshot finish(SignalSnapshot s);
  SignalSnapshot execute(const Instruction& ins, Address pc, bool injected);
  SignalSnapshot trap(SignalSnapshot s);
  std::uint16_t reg(std::uint8_t i) const noexcept;
  void set_reg(std::uint8_t i, std::uint16_t v) noexcept;
  std::uint8_t bus_read(Address a);
  void bus_write(Address a, std::uint8_t v);
  bool stack_ok(std::uint32_t lo) const noexcept;
  void rom_check(Address pc) const;

  MemoryLayout layout_;
  MachineState st_;
  GpioPeripheral gpio_;
  std::vector<DmaEvent> dma_;  // sorted by fire_cycle, stable
  std::vector<IrqEvent> irq_;
  std::uint8_t last_dma_read_ = 0;
};

}  // namespace pox::machine
