// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pox/ltl/prop_trace.hpp"
#include "pox/machine/machine.hpp"
#include "pox/protocol/wire.hpp"
#include "pox/swatt/swatt.hpp"

namespace pox::scenarios {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Expectation : std::uint8_t { Accept, Reject };

enum class HookPoint : std::uint8_t { BeforeExec, AfterExec, AfterProve };
enum class HookAction : std::uint8_t {
  Store,         // software store of `value` at `addr`
  DmaWrite,      // DMA write of `value` at `addr`
  TamperOutput,  // response.o[index] ^= value
  TamperToken,   // response.h[index] ^= value
};

struct Hook {
  HookPoint when = HookPoint::AfterExec;
  HookAction action = HookAction::Store;
  Address addr = 0;
  std::uint8_t value = 1;
  std::size_t index = 0;
};

// One verifier/prover round. DMA and IRQ fire cycles count from the cycle
// that jumps into ER.
struct Scenario {
  std::string name;
  std::string source;
  Address er_min = 0xE000;
  std::optional<Address> er_max;
  std::optional<AddressRange> out;
  std::map<std::string, std::uint16_t> defines;
  machine::MemoryLayout layout;
  machine::DmaScript dma;
  machine::IrqScript irq;
  std::vector<std::uint8_t> gpio_bits;
  std::vector<Hook> hooks;
  Expectation expected = Expectation::Accept;
  swatt::CostModel cost;

  // Throws ScenarioError; only a run free of adversary actions may expect
  // acceptance.
  void validate() const;
};

struct ScenarioResult {
  std::string name;
  Expectation expected = Expectation::Accept;
  bool accepted = false;
  protocol::Request request;
  protocol::Response response;
  bool exec_during_prove = false;  // EXEC set on every attestation cycle
  machine::Trace trace;
  ltl::TraceContext context;
  std::vector<machine::GpioWrite> gpio_writes;

  bool as_expected() const noexcept { return accepted == (expected == Expectation::Accept); }
};

inline constexpr Address kStackTop = 0x8E00;

// Device key and challenges both derive from the seed.
ScenarioResult run_scenario(const Scenario& sc, std::uint64_t seed);
swatt::Key device_key(std::uint64_t seed);

// JSON scenario file; "program" paths resolve against the file's directory.
Scenario load_scenario(const std::filesystem::path& path);
std::string format_result(const ScenarioResult& r);

}  // namespace pox::scenarios
