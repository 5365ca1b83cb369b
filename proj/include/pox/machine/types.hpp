// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pox {

using Address = std::uint16_t;
using Bytes = std::vector<std::uint8_t>;

// Inclusive address interval.
struct AddressRange {
  Address min = 0;
  Address max = 0;

  constexpr bool contains(Address a) const noexcept { return min <= a && a <= max; }
  constexpr bool well_formed() const noexcept { return min <= max; }
  constexpr std::size_t size() const noexcept {
    return well_formed() ? static_cast<std::size_t>(max) - min + 1 : 0;
  }
  constexpr bool overlaps(const AddressRange& o) const noexcept {
    return well_formed() && o.well_formed() && min <= o.max && o.min <= max;
  }
  constexpr bool covers(const AddressRange& o) const noexcept {
    return o.well_formed() && min <= o.min && o.max <= max;
  }
  friend constexpr bool operator==(const AddressRange&, const AddressRange&) = default;
};

std::string to_string(const AddressRange& r);
std::string hex16(std::uint16_t v);

inline std::uint16_t load_le16(const std::uint8_t* p) noexcept {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline void store_le16(std::uint8_t* p, std::uint16_t v) noexcept {
  p[0] = static_cast<std::uint8_t>(v & 0xFF);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

}  // namespace pox
