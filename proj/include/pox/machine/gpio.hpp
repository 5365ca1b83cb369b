// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "pox/machine/types.hpp"

namespace pox::machine {

struct GpioWrite {
  std::uint64_t cycle = 0;
  Address addr = 0;
  std::uint8_t value = 0;
  friend bool operator==(const GpioWrite&, const GpioWrite&) = default;
};

// Port block at gpio.min: +0 input, +1 output, +2 direction, +3 function select.
// Reads of the input port return the next scripted bit (0 or 1) and consume it;
// once the script runs dry the line reads low.
class GpioPeripheral {
 public:
  explicit GpioPeripheral(AddressRange ports = {0x001C, 0x001F}) : ports_(ports) {}

  AddressRange ports() const noexcept { return ports_; }
  Address input_port() const noexcept { return ports_.min; }
  Address output_port() const noexcept { return static_cast<Address>(ports_.min + 1); }

  void script_input(std::vector<std::uint8_t> bits);
  std::size_t bits_consumed() const noexcept { return next_; }
  std::size_t bits_remaining() const noexcept { return script_.size() - next_; }

  bool handles(Address a) const noexcept { return ports_.contains(a); }
  std::uint8_t read(Address a, std::uint8_t latched);
  void write(std::uint64_t cycle, Address a, std::uint8_t value);

  const std::vector<GpioWrite>& writes() const noexcept { return writes_; }

 private:
  AddressRange ports_;
  std::vector<std::uint8_t> script_;
  std::size_t next_ = 0;
  std::vector<GpioWrite> writes_;
};

}  // namespace pox::machine
