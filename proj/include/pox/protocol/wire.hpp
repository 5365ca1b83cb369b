// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>

#include "pox/monitor/metadata.hpp"
#include "pox/swatt/hmac.hpp"

namespace pox::protocol {

inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kRequestHeaderBytes = 1 + machine::kChallengeBytes + 4 * 2 + 2;  // 43
inline constexpr std::size_t kResponseHeaderBytes = swatt::kDigestBytes + 2;                 // 34

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An empty `s` means the prover runs whatever ER already holds.
struct Request {
  std::uint8_t version = kWireVersion;
  monitor::Challenge chal{};
  Address er_min = 0;
  Address er_max = 0;
  Address or_min = monitor::kNoOutput;
  Address or_max = monitor::kNoOutput;
  Bytes s;

  AddressRange er() const noexcept { return {er_min, er_max}; }
  bool output_absent() const noexcept { return or_min == monitor::kNoOutput && or_max == monitor::kNoOutput; }
  friend bool operator==(const Request&, const Request&) = default;
};

struct Response {
  swatt::Digest h{};
  Bytes o;
  friend bool operator==(const Response&, const Response&) = default;
};

// Little-endian, fixed layout:
//   request:  version | chal[32] | er_min | er_max | or_min | or_max | s_len | s
//   response: h[32] | o_len | o
Bytes encode(const Request& r);
Bytes encode(const Response& r);
Request decode_request(std::span<const std::uint8_t> frame);
Response decode_response(std::span<const std::uint8_t> frame);

}  // namespace pox::protocol
