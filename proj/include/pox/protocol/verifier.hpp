// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "pox/machine/layout.hpp"
#include "pox/protocol/wire.hpp"
#include "pox/swatt/swatt.hpp"

namespace pox::protocol {

class RequestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ChallengeSource {
 public:
  virtual ~ChallengeSource() = default;
  virtual monitor::Challenge next() = 0;
};

// HMAC(seed-key, counter): reproducible runs.
class SeededChallenges final : public ChallengeSource {
 public:
  explicit SeededChallenges(std::uint64_t seed);
  monitor::Challenge next() override;

 private:
  swatt::Digest key_;
  std::uint64_t counter_ = 0;
};

// Operating-system randomness.
class SystemChallenges final : public ChallengeSource {
 public:
  monitor::Challenge next() override;
};

using SessionId = std::uint64_t;
enum class SessionState : std::uint8_t { Outstanding, Closed };

struct VerifierSession {
  SessionId id = 0;
  monitor::Challenge chal{};
  Bytes expected_s;
  AddressRange er;
  std::optional<AddressRange> out;
  std::uint64_t t_req = 0;
  std::optional<std::uint64_t> t_verif;
  SessionState state = SessionState::Outstanding;
  bool accepted = false;
};

struct Issued {
  SessionId session = 0;
  Request request;
};

// Sessions are one-shot. Times are caller-supplied ticks (the harness uses
// device cycles); a session older than `ttl` ticks is closed unanswered.
class Verifier {
 public:
  Verifier(const swatt::Key& master, std::unique_ptr<ChallengeSource> challenges, machine::MemoryLayout layout = {},
           std::uint64_t ttl = UINT64_MAX);

  // `s` is sent to the prover; when absent, `expected_s` must hold the ER
  // contents the prover is believed to have pre-installed.
  Issued xrequest(std::optional<Bytes> s, AddressRange er, std::optional<AddressRange> out, std::uint64_t now,
                  std::optional<Bytes> expected_s = std::nullopt);
  bool xverify(SessionId id, const Response& resp, std::uint64_t now);

  std::optional<VerifierSession> session(SessionId id) const;
  std::size_t expire(std::uint64_t now);
  const machine::MemoryLayout& layout() const noexcept { return layout_; }

 private:
  swatt::Key master_;
  std::unique_ptr<ChallengeSource> challenges_;
  machine::MemoryLayout layout_;
  std::uint64_t ttl_;
  mutable std::mutex mu_;
  std::map<SessionId, VerifierSession> sessions_;
  SessionId next_id_ = 1;
};

// Token the verifier expects for an honest, completed run.
swatt::Digest expected_token(const swatt::Key& master, const monitor::Challenge& chal, AddressRange er,
                             std::optional<AddressRange> out, std::span<const std::uint8_t> s,
                             std::span<const std::uint8_t> o);

}  // namespace pox::protocol
