// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/protocol/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace pox::protocol {
namespace {

struct Mailbox {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> frames;
  bool closed = false;
};

class QueueChannel final : public Channel {
 public:
  QueueChannel(std::shared_ptr<Mailbox> in, std::shared_ptr<Mailbox> out) : in_(std::move(in)), out_(std::move(out)) {}
  ~QueueChannel() override { close(); }

  void send(const Bytes& frame) override {
    if (frame.size() > kMaxFrameBytes) throw TransportError("frame too large");
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportError("peer closed");
    out_->frames.push_back(frame);
    out_->cv.notify_one();
  }

  std::optional<Bytes> receive(std::chrono::milliseconds timeout) override {
    std::unique_lock lock(in_->mu);
    in_->cv.wait_for(lock, timeout, [&] { return !in_->frames.empty() || in_->closed; });
    if (in_->frames.empty()) return std::nullopt;
    Bytes f = std::move(in_->frames.front());
    in_->frames.pop_front();
    return f;
  }

  void close() override {
    for (auto* box : {in_.get(), out_.get()}) {
      std::lock_guard lock(box->mu);
      box->closed = true;
      box->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Mailbox> in_;
  std::shared_ptr<Mailbox> out_;
};

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

class SocketChannel final : public Channel {
 public:
  explicit SocketChannel(int fd) : fd_(fd) {}
  ~SocketChannel() override { close(); }

  void send(const Bytes& frame) override {
    if (frame.size() > kMaxFrameBytes) throw TransportError("frame too large");
    const auto n = static_cast<std::uint32_t>(frame.size());
    const std::uint8_t len[4] = {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                                 static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
    write_all(len, 4);
    write_all(frame.data(), frame.size());
  }

  std::optional<Bytes> receive(std::chrono::milliseconds timeout) override {
    std::uint8_t len[4];
    if (!read_all(len, 4, timeout)) return std::nullopt;
    const std::uint32_t n = (std::uint32_t{len[0]} << 24) | (std::uint32_t{len[1]} << 16) |
                            (std::uint32_t{len[2]} << 8) | std::uint32_t{len[3]};
    if (n > kMaxFrameBytes) throw TransportError("incoming frame too large");
    Bytes frame(n);
    if (n > 0 && !read_all(frame.data(), n, timeout)) throw TransportError("connection closed mid-frame");
    return frame;
  }

  void close() override {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  void write_all(const std::uint8_t* p, std::size_t n) {
    while (n > 0) {
      const ssize_t w = ::send(fd_, p, n, MSG_NOSIGNAL);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw TransportError(errno_text("send"));
      }
      p += w;
      n -= static_cast<std::size_t>(w);
    }
  }

  bool read_all(std::uint8_t* p, std::size_t n, std::chrono::milliseconds timeout) {
    while (n > 0) {
      pollfd pfd{fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
      if (ready < 0 && errno == EINTR) continue;
      if (ready < 0) throw TransportError(errno_text("poll"));
      if (ready == 0) return false;
      const ssize_t r = ::recv(fd_, p, n, 0);
      if (r < 0 && errno == EINTR) continue;
      if (r < 0) throw TransportError(errno_text("recv"));
      if (r == 0) return false;
      p += r;
      n -= static_cast<std::size_t>(r);
    }
    return true;
  }

  int fd_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_duplex_pair() {
  auto a = std::make_shared<Mailbox>();
  auto b = std::make_shared<Mailbox>();
  return {std::make_unique<QueueChannel>(a, b), std::make_unique<QueueChannel>(b, a)};
}

LoopbackListener::LoopbackListener(std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(errno_text("socket"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 8) < 0) {
    const auto msg = errno_text("bind/listen");
    ::close(fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

LoopbackListener::~LoopbackListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Channel> LoopbackListener::accept() {
  for (;;) {
    const int c = ::accept(fd_, nullptr, nullptr);
    if (c >= 0) return std::make_unique<SocketChannel>(c);
    if (errno != EINTR) throw TransportError(errno_text("accept"));
  }
}

std::unique_ptr<Channel> connect_loopback(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError(errno_text("socket"));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const auto msg = errno_text("connect");
    ::close(fd);
    throw TransportError(msg);
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return std::make_unique<SocketChannel>(fd);
}

}  // namespace pox::protocol
