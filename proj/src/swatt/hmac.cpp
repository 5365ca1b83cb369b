// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/swatt/hmac.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/params.h>

#include <stdexcept>

namespace pox::swatt {
namespace {

struct MacDeleter {
  void operator()(EVP_MAC* m) const noexcept { EVP_MAC_free(m); }
};
struct CtxDeleter {
  void operator()(EVP_MAC_CTX* c) const noexcept { EVP_MAC_CTX_free(c); }
};

EVP_MAC* hmac_algorithm() {
  static const std::unique_ptr<EVP_MAC, MacDeleter> mac(EVP_MAC_fetch(nullptr, "HMAC", nullptr));
  if (!mac) throw std::runtime_error("OpenSSL HMAC unavailable");
  return mac.get();
}

}  // namespace

struct HmacSha256::Impl {
  std::unique_ptr<EVP_MAC_CTX, CtxDeleter> ctx;
};

HmacSha256::HmacSha256(std::span<const std::uint8_t> key) : impl_(std::make_unique<Impl>()) {
  impl_->ctx.reset(EVP_MAC_CTX_new(hmac_algorithm()));
  if (!impl_->ctx) throw std::runtime_error("EVP_MAC_CTX_new failed");
  char digest[] = "SHA256";
  OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest, 0), OSSL_PARAM_construct_end()};
  static const std::uint8_t kEmpty = 0;
  const std::uint8_t* k = key.empty() ? &kEmpty : key.data();
  if (EVP_MAC_init(impl_->ctx.get(), k, key.size(), params) != 1) throw std::runtime_error("EVP_MAC_init failed");
}

HmacSha256::~HmacSha256() = default;
HmacSha256::HmacSha256(HmacSha256&&) noexcept = default;
HmacSha256& HmacSha256::operator=(HmacSha256&&) noexcept = default;

HmacSha256& HmacSha256::update(std::span<const std::uint8_t> data) {
  if (!data.empty() && EVP_MAC_update(impl_->ctx.get(), data.data(), data.size()) != 1) {
    throw std::runtime_error("EVP_MAC_update failed");
  }
  return *this;
}

Digest HmacSha256::finish() {
  Digest out{};
  std::size_t len = 0;
  if (EVP_MAC_final(impl_->ctx.get(), out.data(), &len, out.size()) != 1 || len != out.size()) {
    throw std::runtime_error("EVP_MAC_final failed");
  }
  return out;
}

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message) {
  return HmacSha256(key).update(message).finish();
}

bool digest_equal(const Digest& a, const Digest& b) noexcept {
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<std::uint8_t>(a[i] ^ b[i]);
  return diff == 0;
}

}  // namespace pox::swatt
