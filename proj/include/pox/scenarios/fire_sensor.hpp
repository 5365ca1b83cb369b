// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pox/scenarios/scenario.hpp"

namespace pox::scenarios {

// Five-byte sensor frame: humidity, humidity fraction, temperature,
// temperature fraction, checksum (sum of the first four, mod 256).
using SensorFrame = std::array<std::uint8_t, 5>;

inline constexpr std::uint8_t kAlarmThreshold = 50;  // degrees, temperature byte
inline constexpr Address kSensorBuffer = 0x2000;
inline constexpr AddressRange kSensorOutput{0x2100, 0x2104};

std::string_view fire_sensor_source();
SensorFrame sensor_frame(std::uint64_t seed);
// Frame bytes, most significant bit first, one line sample per bit.
std::vector<std::uint8_t> sensor_bits(const SensorFrame& frame);

// The application polls the input port for 40 bits, raises the output port
// when the temperature reaches the threshold, and copies the frame to OR.
Scenario fire_sensor_scenario(std::uint64_t seed);

}  // namespace pox::scenarios
