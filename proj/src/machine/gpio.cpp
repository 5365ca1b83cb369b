// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/machine/gpio.hpp"

namespace pox::machine {

void GpioPeripheral::script_input(std::vector<std::uint8_t> bits) {
  for (auto& b : bits) b = b ? 1 : 0;
  script_ = std::move(bits);
  next_ = 0;
}

std::uint8_t GpioPeripheral::read(Address a, std::uint8_t latched) {
  if (a != input_port()) return latched;
  if (next_ >= script_.size()) return 0;
  return script_[next_++];
}

void GpioPeripheral::write(std::uint64_t cycle, Address a, std::uint8_t value) {
  writes_.push_back({cycle, a, value});
}

}  // namespace pox::machine
