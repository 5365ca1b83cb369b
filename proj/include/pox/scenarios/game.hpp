// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pox/machine/machine.hpp"
#include "pox/monitor/metadata.hpp"
#include "pox/protocol/wire.hpp"
#include "pox/scenarios/scenario.hpp"

namespace pox::scenarios {

class UnknownStrategy : public std::invalid_argument {
 public:
  explicit UnknownStrategy(const std::string& name);
};

// Adversary strategies, plus "honest" as the sanity leg.
const std::vector<std::string>& strategy_names();
const std::vector<std::string>& adversary_strategies();
bool is_adversary(const std::string& strategy);

struct Transcript {
  monitor::Challenge chal{};
  swatt::Digest h{};
  Bytes o;
  bool accepted = false;
  bool win = false;
};

struct GameResult {
  std::string strategy;
  std::size_t trials = 0;
  std::size_t wins = 0;
  std::size_t accepts = 0;
  std::vector<Transcript> transcripts;
};

struct GameOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  bool keep_transcripts = true;
  // When set, the first trial's trace and bound history are kept.
  bool record_first_trace = false;
};

struct GameRun {
  GameResult result;
  std::optional<machine::Trace> trace;
  std::optional<ltl::TraceContext> context;
};

// Each trial: fresh challenge, the adversary acts with full software
// control of the prover, the verifier decides. The adversary wins when the
// verifier accepts a run that skipped, cut short or tampered with the
// execution, or altered its output.
GameRun run_security_game(const std::string& strategy, const GameOptions& opts);

// Default trial counts used by the full game: 10^5 for forge_guess, 100
// otherwise.
std::size_t default_trials(const std::string& strategy);

std::string format_result(const GameResult& r, bool with_transcripts = false);

}  // namespace pox::scenarios
