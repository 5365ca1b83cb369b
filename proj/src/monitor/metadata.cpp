// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/monitor/metadata.hpp"

#include <algorithm>
#include <stdexcept>

namespace pox::monitor {

using machine::MemoryLayout;

Address field_address(MetadataField f, const MemoryLayout& layout) noexcept {
  std::size_t off = 0;
  switch (f) {
    case MetadataField::ErMin: off = machine::kErMinOffset; break;
    case MetadataField::ErMax: off = machine::kErMaxOffset; break;
    case MetadataField::OrMin: off = machine::kOrMinOffset; break;
    case MetadataField::OrMax: off = machine::kOrMaxOffset; break;
    case MetadataField::Exec: off = machine::kExecOffset; break;
    case MetadataField::Chal: off = machine::kChalOffset; break;
  }
  return static_cast<Address>(layout.metadata.min + off);
}

MetadataRegisters decode_metadata(std::span<const std::uint8_t> block) {
  if (block.size() != machine::kMetadataBytes) throw std::invalid_argument("metadata block must be 41 bytes");
  const std::uint8_t* base = block.data();
  MetadataRegisters md;
  md.exec = base[machine::kExecOffset];
  md.er_min = load_le16(base + machine::kErMinOffset);
  md.er_max = load_le16(base + machine::kErMaxOffset);
  md.or_min = load_le16(base + machine::kOrMinOffset);
  md.or_max = load_le16(base + machine::kOrMaxOffset);
  std::copy_n(base + machine::kChalOffset, md.chal.size(), md.chal.begin());
  return md;
}

MetadataRegisters read_metadata(std::span<const std::uint8_t> mem, const MemoryLayout& layout) {
  if (mem.size() < static_cast<std::size_t>(layout.metadata.max) + 1) throw std::out_of_range("memory too small");
  return decode_metadata(mem.subspan(layout.metadata.min, machine::kMetadataBytes));
}

std::array<std::uint8_t, machine::kMetadataBytes> encode_metadata(const MetadataRegisters& md) {
  std::array<std::uint8_t, machine::kMetadataBytes> block{};
  std::uint8_t* base = block.data();
  base[machine::kExecOffset] = md.exec;
  store_le16(base + machine::kErMinOffset, md.er_min);
  store_le16(base + machine::kErMaxOffset, md.er_max);
  store_le16(base + machine::kOrMinOffset, md.or_min);
  store_le16(base + machine::kOrMaxOffset, md.or_max);
  std::copy(md.chal.begin(), md.chal.end(), base + machine::kChalOffset);
  return block;
}

void store_metadata(std::span<std::uint8_t> mem, const MemoryLayout& layout, const MetadataRegisters& md) {
  if (mem.size() < static_cast<std::size_t>(layout.metadata.max) + 1) throw std::out_of_range("memory too small");
  const auto block = encode_metadata(md);
  std::copy(block.begin(), block.end(), mem.begin() + layout.metadata.min);
}

MetadataRegisters write_metadata(MetadataRegisters md, MetadataField field, std::uint16_t value, WriteSource) {
  switch (field) {
    case MetadataField::ErMin: md.er_min = value; break;
    case MetadataField::ErMax: md.er_max = value; break;
    case MetadataField::OrMin: md.or_min = value; break;
    case MetadataField::OrMax: md.or_max = value; break;
    case MetadataField::Exec: break;  // hardware-owned
    case MetadataField::Chal: throw std::invalid_argument("use write_challenge for the challenge slot");
  }
  return md;
}

MetadataRegisters write_challenge(MetadataRegisters md, const Challenge& chal, WriteSource) {
  md.chal = chal;
  return md;
}

}  // namespace pox::monitor
