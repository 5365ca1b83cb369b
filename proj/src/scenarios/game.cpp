// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/scenarios/game.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "pox/protocol/prover.hpp"
#include "pox/protocol/verifier.hpp"
#include "pox/scenarios/program.hpp"

namespace pox::scenarios {
namespace {

using protocol::Device;
using protocol::Prover;
using protocol::Request;
using protocol::Response;
using monitor::MetadataField;

constexpr Address kErMin = 0xE000;
constexpr AddressRange kOutput{0x2100, 0x2107};
constexpr Address kInput = 0x2000;
constexpr Address kIsr = 0xF800;

// Reads an input byte and fills OR with values derived from it.
constexpr const char* kProgram = R"(
        LOAD r1, INPUT
        MOVI r0, 0x50
        STORE r0, OR_MIN
        ADD r0, r1
        STORE r0, OR_MIN+1
        ADD r0, r0
        STORE r0, OR_MIN+2
        MOVI r2, 3
fill:
        ADD r0, 7
        STORE r0, [r2+OR_MIN]
        ADD r2, 1
        MOVI r3, 0
        ADD r3, r2
        SUB r3, 8
        JZ r3, done
        JMP fill
done:
        HALT
)";

// Writes the output the verifier would expect, without reading input.
constexpr const char* kForgedProgram = R"(
        MOVI r0, 0x42
        STORE r0, OR_MIN
        STORE r0, OR_MIN+1
        STORE r0, OR_MIN+2
        STORE r0, OR_MIN+3
        STORE r0, OR_MIN+4
        STORE r0, OR_MIN+5
        STORE r0, OR_MIN+6
        STORE r0, OR_MIN+7
        NOP
        NOP
        NOP
        NOP
        NOP
        NOP
        NOP
        HALT
)";

const std::vector<std::string> kAdversaries{
    "forge_guess",     "wrong_region", "wrong_code",  "tamper_output",   "overwrite_after_exec", "interrupt_resume",
    "jump_mid_entry",  "dma_mid_exec", "metadata_tamper", "replay_chal", "reset_mid_exec",       "incomplete_exec"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(g_); }
  std::uint8_t byte() { return static_cast<std::uint8_t>(below(256)); }
  std::uint64_t next() { return g_(); }

 private:
  std::mt19937_64 g_;
};

const BuiltProgram& program() {
  static const BuiltProgram kBuilt =
      build_program(kProgram, kErMin, std::nullopt, {{"INPUT", kInput}, {"OR_MIN", kOutput.min}});
  return kBuilt;
}

Bytes forged_image() {
  return build_program(kForgedProgram, kErMin, program().er.max, {{"OR_MIN", kOutput.min}}).image;
}

// Everything one trial needs: a fresh device, its prover software and the
// verifier's open session.
struct Trial {
  Trial(const swatt::Key& key, protocol::Verifier& verifier, Rng& rng, bool record)
      : dev(key, config(record)), prover(dev) {
    dev.machine().provision(kIsr, machine::encode(machine::ins::reti()));
    const auto issued = verifier.xrequest(program().image, program().er, kOutput, dev.cycle());
    session = issued.session;
    req = issued.request;
    dev.sw_set_sp(kStackTop);
    dev.sw_store(kInput, rng.byte());
  }

  static protocol::DeviceConfig config(bool record) {
    protocol::DeviceConfig cfg;
    cfg.cost = swatt::kFastCostModel;
    cfg.record_trace = record;
    return cfg;
  }

  void install() { prover.install(req); }
  void honest_exec() { prover.xatomic_exec(); }
  Address instruction(std::size_t i) const { return static_cast<Address>(req.er_min + 4 * i); }
  std::size_t instructions() const { return req.er().size() / 4; }

  Device dev;
  Prover prover;
  protocol::SessionId session = 0;
  Request req;
};

void store16(Device& dev, MetadataField f, std::uint16_t v) {
  const Address a = monitor::field_address(f, dev.layout());
  dev.sw_store(a, static_cast<std::uint8_t>(v & 0xFF));
  dev.sw_store(static_cast<Address>(a + 1), static_cast<std::uint8_t>(v >> 8));
}

// The adversary's answer for one trial. `rng` drives every choice.
Response play(const std::string& s, Trial& t, Rng& rng, protocol::Verifier& verifier) {
  Device& dev = t.dev;
  const auto& layout = dev.layout();
  if (s == "honest") {
    t.install();
    t.honest_exec();
    return t.prover.xprove();
  }
  if (s == "forge_guess") {
    // Run S for a plausible output, but answer with a guessed token.
    t.install();
    t.honest_exec();
    Response r;
    r.o = dev.machine().peek(kOutput);
    for (auto& b : r.h) b = rng.byte();
    return r;
  }
  if (s == "wrong_region") {
    // Same code, shifted to different bounds.
    Request moved = t.req;
    const auto shift = static_cast<Address>(4 * (1 + rng.below(64)));
    moved.er_min = static_cast<Address>(t.req.er_min + shift);
    moved.er_max = static_cast<Address>(t.req.er_max + shift);
    moved.s = build_program(kProgram, moved.er_min, std::nullopt, {{"INPUT", kInput}, {"OR_MIN", kOutput.min}}).image;
    t.prover.install(moved);
    t.honest_exec();
    return t.prover.xprove();
  }
  if (s == "wrong_code") {
    Request other = t.req;
    other.s = forged_image();
    t.prover.install(other);
    t.honest_exec();
    return t.prover.xprove();
  }
  if (s == "tamper_output") {
    t.install();
    t.honest_exec();
    const auto pos = static_cast<Address>(kOutput.min + rng.below(kOutput.size()));
    const std::uint8_t delta = static_cast<std::uint8_t>(1 + rng.below(255));
    if (rng.below(2) == 0) {
      // change OR in memory between execution and proof
      dev.sw_store(pos, static_cast<std::uint8_t>(dev.machine().peek(pos) ^ delta));
      return t.prover.xprove();
    }
    Response r = t.prover.xprove();
    r.o[pos - kOutput.min] ^= delta;
    return r;
  }
  if (s == "overwrite_after_exec") {
    // Run other code in ER, then put S back before proving.
    Request other = t.req;
    other.s = forged_image();
    t.prover.install(other);
    t.honest_exec();
    dev.sw_write(t.req.er_min, t.req.s);
    return t.prover.xprove();
  }
  if (s == "interrupt_resume") {
    // The ISR resumes ER at a different instruction.
    t.install();
    const Address resume = t.instruction(1 + rng.below(t.instructions() - 2));
    dev.machine().provision(kIsr, machine::encode(machine::ins::jmp(resume)));
    dev.schedule(machine::IrqEvent{dev.cycle() + 2 + rng.below(t.instructions()), kIsr});
    t.honest_exec();
    return t.prover.xprove();
  }
  if (s == "jump_mid_entry") {
    t.install();
    dev.sw_jump(t.instruction(1 + rng.below(t.instructions() - 1)));
    dev.run(protocol::Prover::kDefaultExecBudget);
    return t.prover.xprove();
  }
  if (s == "dma_mid_exec") {
    t.install();
    const auto pos = static_cast<Address>(kOutput.min + rng.below(kOutput.size()));
    dev.schedule(machine::DmaEvent{dev.cycle() + 2 + rng.below(t.instructions()), machine::DmaOp::Write, pos,
                                   rng.byte()});
    t.honest_exec();
    return t.prover.xprove();
  }
  if (s == "metadata_tamper") {
    t.install();
    t.honest_exec();
    switch (rng.below(4)) {
      case 0: store16(dev, MetadataField::OrMax, static_cast<std::uint16_t>(kOutput.max - 1 - rng.below(4))); break;
      case 1: store16(dev, MetadataField::ErMin, static_cast<std::uint16_t>(t.req.er_min + 4)); break;
      case 2: store16(dev, MetadataField::OrMin, static_cast<std::uint16_t>(kOutput.min + 2)); break;
      default: {
        // rewrite a field with the value it already holds
        const Address a = monitor::field_address(MetadataField::ErMax, layout);
        dev.sw_store(a, dev.machine().peek(a));
        break;
      }
    }
    return t.prover.xprove();
  }
  if (s == "replay_chal") {
    // Execute and prove an earlier request, then answer a new challenge
    // without executing again.
    t.install();
    t.honest_exec();
    const Response first = t.prover.xprove();
    if (!verifier.xverify(t.session, first, dev.cycle())) throw std::logic_error("honest first round rejected");
    const auto fresh = verifier.xrequest(program().image, program().er, kOutput, dev.cycle());
    t.session = fresh.session;
    t.req = fresh.request;
    if (rng.below(2) == 0) {
      // new chal into metadata, then prove
      dev.sw_write(monitor::field_address(MetadataField::Chal, layout), fresh.request.chal);
      return t.prover.xprove();
    }
    // leave metadata alone and feed the new chal to the routine directly
    dev.sw_write(layout.mr.min, fresh.request.chal);
    dev.sw_jump(layout.cr.min);
    dev.run(swatt::routine_cycles(0xFFFF, dev.cost_model()) + Device::kSettleBudget);
    Response r;
    const Bytes h = dev.sw_read(layout.mr);
    std::copy(h.begin(), h.end(), r.h.begin());
    r.o = dev.sw_read(kOutput);
    return r;
  }
  if (s == "reset_mid_exec") {
    t.install();
    const std::size_t cut = 1 + rng.below(t.instructions() - 1);
    dev.sw_jump(t.req.er_min);
    dev.run(cut);
    dev.reset();
    // resume where execution stopped
    dev.sw_set_sp(kStackTop);
    dev.sw_jump(t.instruction(std::min(cut, t.instructions() - 1)));
    dev.run(protocol::Prover::kDefaultExecBudget);
    return t.prover.xprove();
  }
  if (s == "incomplete_exec") {
    t.install();
    dev.sw_jump(t.req.er_min);
    dev.run(1 + rng.below(t.instructions() - 1));
    return t.prover.xprove();
  }
  throw UnknownStrategy(s);
}

}  // namespace

UnknownStrategy::UnknownStrategy(const std::string& name) : std::invalid_argument("unknown strategy '" + name + "'") {}

const std::vector<std::string>& adversary_strategies() { return kAdversaries; }

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> kAll = [] {
    std::vector<std::string> v{"honest"};
    v.insert(v.end(), kAdversaries.begin(), kAdversaries.end());
    return v;
  }();
  return kAll;
}

bool is_adversary(const std::string& strategy) {
  return std::find(kAdversaries.begin(), kAdversaries.end(), strategy) != kAdversaries.end();
}

std::size_t default_trials(const std::string& strategy) { return strategy == "forge_guess" ? 100'000 : 100; }

GameRun run_security_game(const std::string& strategy, const GameOptions& opts) {
  const auto& names = strategy_names();
  if (std::find(names.begin(), names.end(), strategy) == names.end()) throw UnknownStrategy(strategy);

  GameRun run;
  GameResult& res = run.result;
  res.strategy = strategy;
  Rng rng(opts.seed);
  const swatt::Key key = device_key(opts.seed);
  protocol::Verifier verifier(key, std::make_unique<protocol::SeededChallenges>(opts.seed));
  const bool adversary = is_adversary(strategy);

  // forge_guess needs no prover per trial beyond the first: the token is a
  // guess either way, so later trials reuse the honest output.
  std::optional<Bytes> forge_output;
  for (std::size_t i = 0; i < opts.trials; ++i) {
    Rng trial_rng(rng.next());
    Transcript tr;
    Response resp;
    protocol::SessionId session = 0;
    std::uint64_t now = 0;
    if (strategy == "forge_guess" && forge_output) {
      const auto issued = verifier.xrequest(program().image, program().er, kOutput, 0);
      session = issued.session;
      tr.chal = issued.request.chal;
      resp.o = *forge_output;
      for (auto& b : resp.h) b = trial_rng.byte();
    } else {
      const bool record = opts.record_first_trace && i == 0;
      Trial t(key, verifier, trial_rng, record);
      resp = play(strategy, t, trial_rng, verifier);
      session = t.session;
      tr.chal = t.req.chal;
      now = t.dev.cycle();
      if (strategy == "forge_guess") forge_output = resp.o;
      if (record) {
        run.context = ltl::TraceContext{t.dev.layout(), t.dev.bounds_timeline()};
        run.trace = t.dev.take_trace();
      }
    }
    tr.accepted = verifier.xverify(session, resp, now);
    tr.win = adversary && tr.accepted;
    tr.h = resp.h;
    tr.o = resp.o;
    ++res.trials;
    res.accepts += tr.accepted;
    res.wins += tr.win;
    if (opts.keep_transcripts) res.transcripts.push_back(std::move(tr));
  }
  return run;
}

std::string format_result(const GameResult& r, bool with_transcripts) {
  auto hexbytes = [](std::span<const std::uint8_t> b) {
    static const char* d = "0123456789abcdef";
    std::string s;
    for (auto x : b) {
      s += d[x >> 4];
      s += d[x & 15];
    }
    return s;
  };
  std::ostringstream os;
  os << "strategy " << r.strategy << ": trials " << r.trials << ", accepts " << r.accepts << ", adversary wins "
     << r.wins << '\n';
  if (with_transcripts) {
    for (std::size_t i = 0; i < r.transcripts.size(); ++i) {
      const auto& t = r.transcripts[i];
      os << "  " << i << " chal=" << hexbytes(t.chal) << " h=" << hexbytes(t.h) << " o=" << hexbytes(t.o)
         << " verdict=" << (t.accepted ? "accept" : "reject") << (t.win ? " WIN" : "") << '\n';
    }
  }
  return os.str();
}

}  // namespace pox::scenarios
