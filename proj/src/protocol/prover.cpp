// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/protocol/prover.hpp"

namespace pox::protocol {

using monitor::MetadataField;

void Prover::install(const Request& req) {
  const AddressRange er = req.er();
  if (req.s.size() > er.size()) throw InstallError("s does not fit in ER");
  const auto& layout = dev_.layout();
  dev_.sw_write(er.min, req.s);
  auto put16 = [&](MetadataField f, std::uint16_t v) {
    const Address a = monitor::field_address(f, layout);
    dev_.sw_store(a, static_cast<std::uint8_t>(v & 0xFF));
    dev_.sw_store(static_cast<Address>(a + 1), static_cast<std::uint8_t>(v >> 8));
  };
  put16(MetadataField::ErMin, req.er_min);
  put16(MetadataField::ErMax, req.er_max);
  put16(MetadataField::OrMin, req.or_min);
  put16(MetadataField::OrMax, req.or_max);
  dev_.sw_write(monitor::field_address(MetadataField::Chal, layout), req.chal);
}

ExecOutcome Prover::xatomic_exec(std::uint64_t budget) {
  const auto md = dev_.metadata();
  dev_.sw_jump(md.er_min);
  ExecOutcome out;
  out.completed = dev_.run(budget) == RunStatus::Idle;
  out.o = dev_.machine().peek(md.output());
  return out;
}

Response Prover::xprove() {
  const auto& layout = dev_.layout();
  const Address chal_at = monitor::field_address(MetadataField::Chal, layout);
  for (std::size_t i = 0; i < machine::kChallengeBytes; ++i) {
    dev_.sw_store(static_cast<Address>(layout.mr.min + i), dev_.sw_load(static_cast<Address>(chal_at + i)));
  }
  dev_.sw_jump(layout.cr.min);
  dev_.run(swatt::routine_cycles(0xFFFF, dev_.cost_model()) + Device::kSettleBudget);
  Response r;
  const Bytes h = dev_.sw_read(layout.mr);
  std::copy(h.begin(), h.end(), r.h.begin());
  r.o = dev_.sw_read(dev_.metadata().output());
  return r;
}

Bytes serve_request(Prover& prover, std::span<const std::uint8_t> request_frame) {
  const Request req = decode_request(request_frame);
  prover.install(req);
  prover.xatomic_exec();
  return encode(prover.xprove());
}

}  // namespace pox::protocol
