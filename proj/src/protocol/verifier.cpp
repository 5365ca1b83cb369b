// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/protocol/verifier.hpp"

#include <openssl/rand.h>

#include <stdexcept>

namespace pox::protocol {

SeededChallenges::SeededChallenges(std::uint64_t seed) {
  std::array<std::uint8_t, 8> s{};
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  static constexpr std::string_view kLabel = "pox-challenge-seed";
  key_ = swatt::hmac_sha256(std::span(reinterpret_cast<const std::uint8_t*>(kLabel.data()), kLabel.size()), s);
}

monitor::Challenge SeededChallenges::next() {
  std::array<std::uint8_t, 8> c{};
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
  ++counter_;
  const auto d = swatt::hmac_sha256(key_, c);
  monitor::Challenge out;
  std::copy(d.begin(), d.end(), out.begin());
  return out;
}

monitor::Challenge SystemChallenges::next() {
  monitor::Challenge out;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) throw std::runtime_error("RAND_bytes failed");
  return out;
}

Verifier::Verifier(const swatt::Key& master, std::unique_ptr<ChallengeSource> challenges,
                   machine::MemoryLayout layout, std::uint64_t ttl)
    : master_(master), challenges_(std::move(challenges)), layout_(layout), ttl_(ttl) {
  if (!challenges_) throw std::invalid_argument("verifier needs a challenge source");
}

swatt::Digest expected_token(const swatt::Key& master, const monitor::Challenge& chal, AddressRange er,
                             std::optional<AddressRange> out, std::span<const std::uint8_t> s,
                             std::span<const std::uint8_t> o) {
  monitor::MetadataRegisters md;
  md.er_min = er.min;
  md.er_max = er.max;
  md.or_min = out ? out->min : monitor::kNoOutput;
  md.or_max = out ? out->max : monitor::kNoOutput;
  md.exec = 1;
  md.chal = chal;
  return swatt::attest_token(master, chal, swatt::serialize_attested(s, o, md));
}

Issued Verifier::xrequest(std::optional<Bytes> s, AddressRange er, std::optional<AddressRange> out,
                          std::uint64_t now, std::optional<Bytes> expected_s) {
  if (!er.well_formed() || !layout_.prog.covers(er)) throw RequestError("ER must lie inside prog");
  if (er.min % machine::kInstructionBytes != 0 || er.size() % machine::kInstructionBytes != 0) {
    throw RequestError("ER must be a whole number of 4-byte instructions");
  }
  if (out) {
    if (!out->well_formed() || !layout_.data.covers(*out)) throw RequestError("OR must lie inside data");
    if (out->min % 2 != 0) throw RequestError("OR must start at an even address");
    if (out->min == monitor::kNoOutput && out->max == monitor::kNoOutput) throw RequestError("OR collides with the absent-OR sentinel");
  }
  Bytes expect;
  if (s) {
    if (s->size() != er.size()) throw RequestError("s must fill ER exactly");
    expect = *s;
  } else {
    if (!expected_s || expected_s->size() != er.size()) {
      throw RequestError("without s the verifier must know the installed ER contents");
    }
    expect = *expected_s;
  }

  std::lock_guard lock(mu_);
  VerifierSession sess;
  sess.id = next_id_++;
  sess.chal = challenges_->next();
  sess.expected_s = std::move(expect);
  sess.er = er;
  sess.out = out;
  sess.t_req = now;

  Issued issued;
  issued.session = sess.id;
  issued.request.chal = sess.chal;
  issued.request.er_min = er.min;
  issued.request.er_max = er.max;
  issued.request.or_min = out ? out->min : monitor::kNoOutput;
  issued.request.or_max = out ? out->max : monitor::kNoOutput;
  if (s) issued.request.s = std::move(*s);
  sessions_.emplace(sess.id, std::move(sess));
  return issued;
}

bool Verifier::xverify(SessionId id, const Response& resp, std::uint64_t now) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return false;
  VerifierSession& sess = it->second;
  if (sess.state == SessionState::Closed) return false;
  sess.state = SessionState::Closed;
  sess.t_verif = now;
  if (now < sess.t_req || now - sess.t_req > ttl_) return false;
  const std::size_t or_size = sess.out ? sess.out->size() : 0;
  if (resp.o.size() != or_size) return false;
  const auto want = expected_token(master_, sess.chal, sess.er, sess.out, sess.expected_s, resp.o);
  sess.accepted = swatt::digest_equal(want, resp.h);
  return sess.accepted;
}

std::optional<VerifierSession> Verifier::session(SessionId id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::size_t Verifier::expire(std::uint64_t now) {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (auto& [id, sess] : sessions_) {
    if (sess.state == SessionState::Outstanding && now > sess.t_req && now - sess.t_req > ttl_) {
      sess.state = SessionState::Closed;
      ++n;
    }
  }
  return n;
}

}  // namespace pox::protocol
