// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/swatt/swatt.hpp"

#include <algorithm>

namespace pox::swatt {

using machine::MemoryLayout;

Digest derive_key(const Key& master, const Challenge& chal) { return hmac_sha256(master, chal); }

Bytes serialize_metadata(const MetadataRegisters& md) {
  Bytes out(md.chal.begin(), md.chal.end());
  out.resize(out.size() + 9);
  std::uint8_t* p = out.data() + md.chal.size();
  store_le16(p, md.or_min);
  store_le16(p + 2, md.or_max);
  store_le16(p + 4, md.er_min);
  store_le16(p + 6, md.er_max);
  p[8] = md.exec;
  return out;
}

Bytes serialize_attested(std::span<const std::uint8_t> er_bytes, std::span<const std::uint8_t> or_bytes,
                         const MetadataRegisters& md) {
  Bytes out;
  out.reserve(er_bytes.size() + or_bytes.size() + machine::kMetadataBytes);
  out.insert(out.end(), er_bytes.begin(), er_bytes.end());
  out.insert(out.end(), or_bytes.begin(), or_bytes.end());
  const Bytes meta = serialize_metadata(md);
  out.insert(out.end(), meta.begin(), meta.end());
  return out;
}

Bytes serialize_attested(std::span<const std::uint8_t> mem, const MetadataRegisters& md) {
  auto region = [&](AddressRange r) {
    return r.well_formed() ? mem.subspan(r.min, r.size()) : std::span<const std::uint8_t>{};
  };
  return serialize_attested(region(md.er()), region(md.output()), md);
}

Digest attest_token(const Key& master, const Challenge& chal, std::span<const std::uint8_t> serialization) {
  const Digest k = derive_key(master, chal);
  return hmac_sha256(k, serialization);
}

std::uint64_t cycle_cost(std::size_t n, const CostModel& model) noexcept { return model.base + model.per_byte * n; }

std::uint64_t routine_cycles(std::size_t n, const CostModel& model) noexcept {
  const std::uint64_t bus = machine::kChallengeBytes + machine::kKeyBytes + n + machine::kMetadataBytes + kDigestBytes;
  return std::max(cycle_cost(n, model), bus);
}

AttestResult attest(machine::Machine& m, const CycleSink& emit, const CostModel& model) {
  const MemoryLayout& layout = m.layout();
  const MetadataRegisters md = monitor::read_metadata(m.state().mem, layout);
  const AddressRange er = md.er();
  const AddressRange out = md.output();

  // Bus schedule: chal, key, ER, OR, metadata block, then h back into mr.
  std::vector<Address> reads;
  for (std::size_t i = 0; i < machine::kChallengeBytes; ++i) reads.push_back(static_cast<Address>(layout.mr.min + i));
  for (std::size_t i = 0; i < machine::kKeyBytes; ++i) reads.push_back(static_cast<Address>(layout.kr.min + i));
  for (std::size_t i = 0; i < er.size(); ++i) reads.push_back(static_cast<Address>(er.min + i));
  for (std::size_t i = 0; i < out.size(); ++i) reads.push_back(static_cast<Address>(out.min + i));
  for (std::size_t i = 0; i < machine::kMetadataBytes; ++i) reads.push_back(static_cast<Address>(layout.metadata.min + i));

  const std::size_t attested = er.size() + out.size();
  const std::uint64_t total = routine_cycles(attested, model);
  const std::uint64_t write_start = total - kDigestBytes;
  const std::uint64_t words = layout.cr.size() / machine::kInstructionBytes;
  auto pc_at = [&](std::uint64_t i) {
    const std::uint64_t w = total > 1 ? i * (words - 1) / (total - 1) : 0;
    return static_cast<Address>(layout.cr.min + w * machine::kInstructionBytes);
  };

  AttestResult result;
  Bytes fetched;
  fetched.reserve(reads.size());
  for (std::uint64_t i = 0; i < total; ++i) {
    if (auto ev = m.fire_due_event()) {
      emit(*ev);
      emit(m.trigger_reset());
      result.status = AttestStatus::AbortedByReset;
      result.cycles = i + 2;
      return result;
    }
    const Address pc = pc_at(i);
    if (i < reads.size()) {
      std::uint8_t v = 0;
      emit(m.rom_read(pc, reads[i], v));
      fetched.push_back(v);
      if (fetched.size() == reads.size()) {
        // All inputs are in: compute the token.
        Challenge chal;
        Key key;
        std::copy_n(fetched.begin(), chal.size(), chal.begin());
        std::copy_n(fetched.begin() + chal.size(), key.size(), key.begin());
        const auto body = std::span<const std::uint8_t>(fetched).subspan(chal.size() + key.size());
        const auto er_bytes = body.first(er.size());
        const auto or_bytes = body.subspan(er.size(), out.size());
        const auto meta = monitor::decode_metadata(body.subspan(attested));
        result.h = hmac_sha256(derive_key(key, chal), serialize_attested(er_bytes, or_bytes, meta));
      }
    } else if (i >= write_start) {
      emit(m.rom_write(pc, static_cast<Address>(layout.mr.min + (i - write_start)), result.h[i - write_start]));
    } else {
      emit(m.rom_idle(pc));
    }
  }
  m.return_to_runtime();
  result.cycles = total;
  return result;
}

}  // namespace pox::swatt
