// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/scenarios/fire_sensor.hpp"

#include <random>

namespace pox::scenarios {

std::string_view fire_sensor_source() {
  return R"(; read a 40-bit frame, MSB first, one bit per input-port read
        MOVI r2, 0
next_byte:
        MOVI r0, 0
        MOVI r3, 8
next_bit:
        LOAD r1, GPIO_IN
        ADD r0, r0
        ADD r0, r1
        SUB r3, 1
        JZ r3, byte_done
        JMP next_bit
byte_done:
        STORE r0, [r2+BUF]
        ADD r2, 1
        MOVI r1, 0
        ADD r1, r2
        SUB r1, 5
        JZ r1, check
        JMP next_byte

; sound the alarm when temperature >= THRESHOLD
check:
        LOAD r1, BUF+2
        MOVI r3, THRESHOLD
compare:
        JZ r3, alarm
        JZ r1, copy
        SUB r1, 1
        SUB r3, 1
        JMP compare
alarm:
        MOVI r0, 1
        STORE r0, GPIO_OUT

; memcpy(OR, BUF, 5)
copy:
        MOVI r2, 0
copy_byte:
        LOAD r0, [r2+BUF]
        STORE r0, [r2+OR_MIN]
        ADD r2, 1
        MOVI r1, 0
        ADD r1, r2
        SUB r1, 5
        JZ r1, done
        JMP copy_byte
done:
        HALT
)";
}

SensorFrame sensor_frame(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return static_cast<std::uint8_t>(std::uniform_int_distribution<std::uint64_t>(lo, hi)(g));
  };
  SensorFrame f{};
  f[0] = pick(20, 90);
  f[1] = pick(0, 9);
  f[2] = pick(15, 70);
  f[3] = pick(0, 9);
  f[4] = static_cast<std::uint8_t>(f[0] + f[1] + f[2] + f[3]);
  return f;
}

std::vector<std::uint8_t> sensor_bits(const SensorFrame& frame) {
  std::vector<std::uint8_t> bits;
  for (auto byte : frame) {
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1U);
  }
  return bits;
}

Scenario fire_sensor_scenario(std::uint64_t seed) {
  Scenario sc;
  sc.name = "fire-sensor";
  sc.source = std::string(fire_sensor_source());
  sc.er_min = 0xE000;
  sc.out = kSensorOutput;
  sc.defines = {{"BUF", kSensorBuffer}, {"THRESHOLD", kAlarmThreshold}};
  sc.gpio_bits = sensor_bits(sensor_frame(seed));
  sc.expected = Expectation::Accept;
  return sc;
}

}  // namespace pox::scenarios
