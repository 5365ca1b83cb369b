// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

namespace pox::swatt {

inline constexpr std::size_t kDigestBytes = 32;
using Digest = std::array<std::uint8_t, kDigestBytes>;

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message);

// Streaming HMAC-SHA-256.
class HmacSha256 {
 public:
  explicit HmacSha256(std::span<const std::uint8_t> key);
  ~HmacSha256();
  HmacSha256(const HmacSha256&) = delete;
  HmacSha256& operator=(const HmacSha256&) = delete;
  HmacSha256(HmacSha256&&) noexcept;
  HmacSha256& operator=(HmacSha256&&) noexcept;

  HmacSha256& update(std::span<const std::uint8_t> data);
  HmacSha256& update(std::uint8_t byte) { return update(std::span<const std::uint8_t>(&byte, 1)); }
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Comparison whose running time does not depend on where the inputs differ.
bool digest_equal(const Digest& a, const Digest& b) noexcept;

}  // namespace pox::swatt
