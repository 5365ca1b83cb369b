// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pox/machine/types.hpp"

namespace pox::protocol {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxFrameBytes = 1 << 20;

// Reliable, ordered, message-framed endpoint.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const Bytes& frame) = 0;
  // nullopt when the peer closed or the timeout elapsed.
  virtual std::optional<Bytes> receive(std::chrono::milliseconds timeout = std::chrono::seconds(30)) = 0;
  virtual void close() = 0;
};

// Two connected in-process endpoints.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_duplex_pair();

// TCP on 127.0.0.1; each frame travels as a 4-byte big-endian length and
// the frame bytes.
class LoopbackListener {
 public:
  // port 0 picks a free port.
  explicit LoopbackListener(std::uint16_t port = 0);
  ~LoopbackListener();
  LoopbackListener(const LoopbackListener&) = delete;
  LoopbackListener& operator=(const LoopbackListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<Channel> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::unique_ptr<Channel> connect_loopback(std::uint16_t port);

}  // namespace pox::protocol
