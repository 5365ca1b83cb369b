// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/machine/layout.hpp"

#include <array>
#include <cstdio>
#include <utility>

namespace pox {

std::string hex16(std::uint16_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", static_cast<unsigned>(v));
  return buf;
}

std::string to_string(const AddressRange& r) { return "[" + hex16(r.min) + "," + hex16(r.max) + "]"; }

}  // namespace pox

namespace pox::machine {

void MemoryLayout::validate() const {
  const std::array<std::pair<const char*, AddressRange>, 8> named{{
      {"cr", cr}, {"kr", kr}, {"mr", mr}, {"xs", xs},
      {"metadata", metadata}, {"prog", prog}, {"data", data}, {"gpio", gpio}}};
  for (const auto& [name, r] : named) {
    if (!r.well_formed()) throw LayoutError(std::string(name) + " range is inverted: " + to_string(r));
  }
  // prog and data are one group: they may not overlap the trusted regions
  // but are allowed to sit next to each other.
  const std::array<std::pair<const char*, AddressRange>, 7> disjoint{{
      {"cr", cr}, {"kr", kr}, {"mr", mr}, {"xs", xs},
      {"metadata", metadata}, {"prog", prog}, {"data", data}}};
  for (std::size_t i = 0; i < disjoint.size(); ++i) {
    for (std::size_t j = i + 1; j < disjoint.size(); ++j) {
      if (disjoint[i].second.overlaps(disjoint[j].second)) {
        throw LayoutError(std::string(disjoint[i].first) + " overlaps " + disjoint[j].first);
      }
    }
  }
  if (gpio.overlaps(metadata)) throw LayoutError("gpio overlaps metadata");
  if (metadata.size() != kMetadataBytes) throw LayoutError("metadata must span exactly 41 bytes");
  if (kr.size() != kKeyBytes) throw LayoutError("kr must span exactly 32 bytes");
  if (mr.size() != kChallengeBytes) throw LayoutError("mr must span exactly 32 bytes");
  if (exec_address() % 2 == 0) throw LayoutError("metadata must start at an odd address");
  if (cr.size() < 4 || cr.min % 4 != 0) throw LayoutError("cr must be 4-byte aligned");
  if (data.contains(runtime_pc) == false) throw LayoutError("runtime_pc must lie in data");
}

}  // namespace pox::machine
