// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

#include "pox/protocol/device.hpp"
#include "pox/protocol/wire.hpp"

namespace pox::protocol {

class InstallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExecOutcome {
  Bytes o;
  bool completed = false;
};

// The untrusted prover-side software: installs requests, runs ER, and asks
// the trusted routine for a proof. Nothing here is trusted by the verifier.
class Prover {
 public:
  static constexpr std::uint64_t kDefaultExecBudget = 1'000'000;

  explicit Prover(Device& device) : dev_(device) {}

  Device& device() noexcept { return dev_; }

  // Copies s into ER and writes bounds and chal into metadata.
  void install(const Request& req);
  ExecOutcome xatomic_exec(std::uint64_t budget = kDefaultExecBudget);
  Response xprove();

 private:
  Device& dev_;
};

// One full round on the prover side: decode, install, run, prove, encode.
Bytes serve_request(Prover& prover, std::span<const std::uint8_t> request_frame);

}  // namespace pox::protocol
