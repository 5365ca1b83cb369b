// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/protocol/wire.hpp"

#include <algorithm>

namespace pox::protocol {
namespace {

void put16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::span<const std::uint8_t> take(std::size_t n) {
    if (b_.size() - pos_ < n) throw WireError("frame truncated");
    auto out = b_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint16_t u16() { return load_le16(take(2).data()); }
  void finish() const {
    if (pos_ != b_.size()) throw WireError("trailing bytes after frame");
  }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes encode(const Request& r) {
  if (r.s.size() > 0xFFFF) throw WireError("s longer than 65535 bytes");
  Bytes out;
  out.reserve(kRequestHeaderBytes + r.s.size());
  out.push_back(r.version);
  out.insert(out.end(), r.chal.begin(), r.chal.end());
  put16(out, r.er_min);
  put16(out, r.er_max);
  put16(out, r.or_min);
  put16(out, r.or_max);
  put16(out, static_cast<std::uint16_t>(r.s.size()));
  out.insert(out.end(), r.s.begin(), r.s.end());
  return out;
}

Bytes encode(const Response& r) {
  if (r.o.size() > 0xFFFF) throw WireError("o longer than 65535 bytes");
  Bytes out(r.h.begin(), r.h.end());
  put16(out, static_cast<std::uint16_t>(r.o.size()));
  out.insert(out.end(), r.o.begin(), r.o.end());
  return out;
}

Request decode_request(std::span<const std::uint8_t> frame) {
  Reader rd(frame);
  Request r;
  r.version = rd.take(1)[0];
  if (r.version != kWireVersion) throw WireError("unsupported version " + std::to_string(r.version));
  auto chal = rd.take(r.chal.size());
  std::copy(chal.begin(), chal.end(), r.chal.begin());
  r.er_min = rd.u16();
  r.er_max = rd.u16();
  r.or_min = rd.u16();
  r.or_max = rd.u16();
  auto s = rd.take(rd.u16());
  r.s.assign(s.begin(), s.end());
  rd.finish();
  return r;
}

Response decode_response(std::span<const std::uint8_t> frame) {
  Reader rd(frame);
  Response r;
  auto h = rd.take(r.h.size());
  std::copy(h.begin(), h.end(), r.h.begin());
  auto o = rd.take(rd.u16());
  r.o.assign(o.begin(), o.end());
  rd.finish();
  return r;
}

}  // namespace pox::protocol
