// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "pox/machine/machine.hpp"
#include "pox/monitor/monitor.hpp"
#include "pox/swatt/swatt.hpp"

namespace pox::protocol {

struct DeviceConfig {
  machine::MemoryLayout layout{};
  swatt::CostModel cost{};
  std::vector<monitor::SubmoduleTable> tables = monitor::standard_tables();
  bool record_trace = true;
};

// ER/OR bounds as stored in metadata from `cycle` onwards.
struct BoundsChange {
  std::uint64_t cycle = 0;
  Address er_min = 0;
  Address er_max = 0;
  Address or_min = 0;
  Address or_max = 0;
  friend bool operator==(const BoundsChange&, const BoundsChange&) = default;
};

enum class RunStatus : std::uint8_t { Idle, BudgetExhausted };

// The prover MCU: machine, PoX monitor and the trusted attestation routine,
// stepped together one cycle at a time. Powers on with a reset cycle.
class Device {
 public:
  static constexpr std::uint64_t kSettleBudget = 4096;

  explicit Device(const swatt::Key& master, DeviceConfig cfg = {});

  machine::Machine& machine() noexcept { return m_; }
  const machine::Machine& machine() const noexcept { return m_; }
  const machine::MemoryLayout& layout() const noexcept { return m_.layout(); }
  const monitor::Monitor& monitor() const noexcept { return mon_; }
  const swatt::CostModel& cost_model() const noexcept { return cost_; }
  const machine::Trace& trace() const noexcept { return trace_; }
  machine::Trace take_trace() noexcept { return std::move(trace_); }
  const std::vector<BoundsChange>& bounds_timeline() const noexcept { return timeline_; }
  monitor::MetadataRegisters metadata() const;
  bool exec() const noexcept { return mon_.exec(); }
  std::uint64_t cycle() const noexcept { return m_.cycle(); }
  const std::optional<swatt::AttestResult>& last_attestation() const noexcept { return last_attest_; }
  // Cycle at which the monitor last saw pc = er_min, if ever.
  std::optional<std::uint64_t> last_entry_cycle() const noexcept { return last_entry_; }

  // Untrusted software; each call is one instruction cycle (after any
  // pending reset or due event has been serviced).
  void sw_store(Address a, std::uint8_t v);
  std::uint8_t sw_load(Address a);
  void sw_write(Address at, std::span<const std::uint8_t> bytes);
  Bytes sw_read(AddressRange r);
  void sw_set_sp(std::uint16_t sp);
  void sw_jump(Address target);
  void sw_exec(const machine::Instruction& ins);
  void set_interrupts_enabled(bool on) noexcept { m_.set_interrupts_enabled(on); }

  // Adversary-controlled hardware events, one cycle each.
  void dma_write(Address a, std::uint8_t v);
  std::uint8_t dma_read(Address a);
  void irq(Address vector);
  void reset();
  void schedule(const machine::DmaEvent& e) { m_.schedule(e); }
  void schedule(const machine::IrqEvent& e) { m_.schedule(e); }

  // Runs the CPU until it is idle in the runtime or the budget is spent.
  // Reaching pc = cr.min runs the attestation routine.
  RunStatus run(std::uint64_t max_cycles);
  // Spins the idle runtime for n cycles so scheduled events can fire.
  void idle(std::uint64_t n);

  // Delivers a cycle to the monitor and the trace.
  void record(machine::SignalSnapshot s);

 private:
  void settle();

  machine::Machine m_;
  monitor::Monitor mon_;
  swatt::CostModel cost_;
  bool record_trace_;
  machine::Trace trace_;
  std::vector<BoundsChange> timeline_;
  std::optional<swatt::AttestResult> last_attest_;
  std::optional<std::uint64_t> last_entry_;
};

}  // namespace pox::protocol
