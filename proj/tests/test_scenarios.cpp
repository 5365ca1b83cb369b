#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pox/ltl/properties.hpp"
#include "pox/scenarios/fire_sensor.hpp"
#include "pox/scenarios/game.hpp"
#include "pox/scenarios/program.hpp"
#include "pox/scenarios/scenario.hpp"

using namespace pox;
using namespace pox::scenarios;
namespace fs = std::filesystem;

namespace {

bool trace_clean(const machine::Trace& t, const ltl::TraceContext& ctx) {
  const auto report = ltl::check_trace(ltl::build_prop_trace(t, ctx));
  for (const auto& v : report.verdicts) {
    if (!v.holds) MESSAGE("violated: " << v.name);
  }
  return report.ok();
}

// Rebuild the bytes from the line samples without going through the frame.
Bytes decode_bits(const std::vector<std::uint8_t>& bits) {
  Bytes out;
  for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 8; ++k) v = v * 2 + bits[i + k];
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::uint64_t seed_with_alarm(bool on) {
  for (std::uint64_t s = 1;; ++s) {
    if ((sensor_frame(s)[2] >= kAlarmThreshold) == on) return s;
  }
}

}  // namespace

TEST_CASE("build_program lays out a single-entry single-exit region") {
  SUBCASE("minimal output writer") {
    const auto p = build_program("MOVI r0, 42\nSTORE r0, OR_MIN\nHALT\n", 0xE000, std::nullopt, {{"OR_MIN", 0x2100}});
    CHECK(p.er == AddressRange{0xE000, 0xE00F});
    CHECK(p.image.size() == 16);
    CHECK(p.exits_rewritten == 1);
    CHECK(p.symbols.at("entry") == 0xE000);
    CHECK(p.symbols.at("exit") == 0xE00C);
    const auto last = machine::decode(std::span<const std::uint8_t, 4>(p.image.data() + 12, 4));
    REQUIRE(last);
    CHECK(last->op == machine::Opcode::Halt);
  }
  SUBCASE("every exit funnels into the last word") {
    const char* src =
        "JZ r0, early\n"
        "MOVI r1, 1\n"
        "HALT\n"
        "early:\n"
        "MOVI r1, 2\n"
        "HALT\n";
    const auto p = build_program(src, 0xE000, 0xE01F);
    CHECK(p.exits_rewritten == 2);
    CHECK(p.image.size() == 32);
    int halts = 0;
    for (std::size_t off = 0; off < p.image.size(); off += 4) {
      const auto ins = machine::decode(std::span<const std::uint8_t, 4>(p.image.data() + off, 4));
      REQUIRE(ins);
      if (ins->op == machine::Opcode::Halt) {
        ++halts;
        CHECK(off == 28);
      }
      if (ins->op == machine::Opcode::Jmp) CHECK(ins->imm == 0xE01C);
    }
    CHECK(halts == 1);
  }
  SUBCASE("a jump out of the region is refused") {
    try {
      build_program("JMP 0xF000\n", 0xE000);
      FAIL("expected BuildError");
    } catch (const BuildError& e) {
      CHECK(std::string(e.what()).find("atomicity") != std::string::npos);
    }
  }
  SUBCASE("region too small, misaligned, or outside program memory") {
    CHECK_THROWS_AS(build_program("NOP\nNOP\nHALT\n", 0xE000, 0xE007), BuildError);
    CHECK_THROWS_AS(build_program("HALT\n", 0xE002), BuildError);
    CHECK_THROWS_AS(build_program("HALT\n", 0xE000, 0xE006), BuildError);
    CHECK_THROWS_AS(build_program("HALT\n", 0x2000), BuildError);
    CHECK_THROWS_AS(build_program("BOGUS r0\n", 0xE000), BuildError);
  }
}

TEST_CASE("fire sensor frame") {
  for (std::uint64_t s : {0, 1, 2, 99}) {
    const auto f = sensor_frame(s);
    CHECK(static_cast<std::uint8_t>(f[0] + f[1] + f[2] + f[3]) == f[4]);
    const auto bits = sensor_bits(f);
    CHECK(bits.size() == 40);
    CHECK(decode_bits(bits) == Bytes(f.begin(), f.end()));
  }
  CHECK(sensor_frame(1) == sensor_frame(1));
  CHECK(sensor_frame(1) != sensor_frame(2));
}

TEST_CASE("fire sensor run is attested end to end") {
  const auto sc = fire_sensor_scenario(1);
  const auto r = run_scenario(sc, 1);
  CHECK(r.accepted);
  CHECK(r.as_expected());
  CHECK(r.exec_during_prove);
  CHECK(r.response.o == decode_bits(sc.gpio_bits));
  CHECK(trace_clean(r.trace, r.context));

  const auto again = run_scenario(fire_sensor_scenario(1), 1);
  CHECK(again.response.o == r.response.o);
  CHECK(again.response.h == r.response.h);
  CHECK(again.trace == r.trace);

  CHECK(run_scenario(fire_sensor_scenario(2), 2).response.h != r.response.h);
}

TEST_CASE("the alarm follows the temperature byte") {
  const auto hot = run_scenario(fire_sensor_scenario(seed_with_alarm(true)), 7);
  CHECK(hot.accepted);
  REQUIRE(hot.gpio_writes.size() == 1);
  CHECK(hot.gpio_writes[0].value == 1);
  CHECK(hot.gpio_writes[0].addr == machine::MemoryLayout{}.gpio.min + 1);

  const auto cold = run_scenario(fire_sensor_scenario(seed_with_alarm(false)), 7);
  CHECK(cold.accepted);
  CHECK(cold.gpio_writes.empty());
}

TEST_CASE("any single tampered output byte is rejected") {
  for (std::size_t i = 0; i < kSensorOutput.size(); ++i) {
    for (std::uint8_t mask : {0x01, 0x80, 0xFF}) {
      auto sc = fire_sensor_scenario(4);
      sc.hooks.push_back({HookPoint::AfterProve, HookAction::TamperOutput, 0, mask, i});
      sc.expected = Expectation::Reject;
      const auto r = run_scenario(sc, 4);
      CAPTURE(i);
      CHECK_FALSE(r.accepted);
    }
  }
}

TEST_CASE("adversary actions during a scenario") {
  auto sc = fire_sensor_scenario(3);
  sc.expected = Expectation::Reject;
  SUBCASE("dma into the output region") {
    sc.dma.push_back({40, machine::DmaOp::Write, 0x2102, 0x55});
  }
  SUBCASE("interrupt in the middle") {
    sc.irq.push_back({50, 0xF000});
  }
  SUBCASE("output rewritten after the run") {
    sc.hooks.push_back({HookPoint::AfterExec, HookAction::Store, 0x2100, 0x00, 0});
  }
  SUBCASE("code patched before the run") {
    sc.hooks.push_back({HookPoint::BeforeExec, HookAction::DmaWrite, 0xE004, 0x00, 0});
  }
  SUBCASE("token bit flipped") {
    sc.hooks.push_back({HookPoint::AfterProve, HookAction::TamperToken, 0, 0x01, 5});
  }
  const auto r = run_scenario(sc, 3);
  CHECK_FALSE(r.accepted);
  CHECK(r.as_expected());
  CHECK(trace_clean(r.trace, r.context));
}

TEST_CASE("scenario validation") {
  auto sc = fire_sensor_scenario(1);
  sc.hooks.push_back({HookPoint::AfterExec, HookAction::Store, 0x2100, 1, 0});
  CHECK_THROWS_AS(sc.validate(), ScenarioError);
  sc.expected = Expectation::Reject;
  CHECK_NOTHROW(sc.validate());

  Scenario empty;
  empty.name = "x";
  CHECK_THROWS_AS(empty.validate(), ScenarioError);
}

TEST_CASE("scenario files") {
  const fs::path dir = POX_SCENARIO_DIR;
  SUBCASE("bundled examples meet their expectation") {
    std::size_t seen = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() != ".json") continue;
      ++seen;
      CAPTURE(e.path().string());
      const auto r = run_scenario(load_scenario(e.path()), 3);
      CHECK(r.as_expected());
      CHECK(trace_clean(r.trace, r.context));
    }
    CHECK(seen >= 5);
  }
  SUBCASE("fields are read") {
    const auto sc = load_scenario(dir / "dma_into_er.json");
    CHECK(sc.name == "dma-into-er");
    CHECK(sc.expected == Expectation::Reject);
    REQUIRE(sc.dma.size() == 1);
    CHECK(sc.dma[0].addr == 0xE004);
    CHECK(sc.dma[0].op == machine::DmaOp::Write);
    REQUIRE(sc.out);
    CHECK(*sc.out == AddressRange{0x2100, 0x2101});
    CHECK(sc.source.find("STORE") != std::string::npos);
  }
  SUBCASE("bad files") {
    const auto tmp = fs::temp_directory_path() / "pox_scenario_test.json";
    auto load_text = [&](const std::string& text) {
      std::ofstream(tmp) << text;
      return load_scenario(tmp);
    };
    CHECK_THROWS_AS(load_text("{"), ScenarioError);
    CHECK_THROWS_AS(load_text(R"({"source": "HALT"})"), ScenarioError);
    CHECK_THROWS_AS(load_text(R"({"name": "a", "source": "HALT", "er_min": "0x1FFFF"})"), ScenarioError);
    CHECK_THROWS_AS(load_text(R"({"name": "a", "source": "HALT", "expect": "maybe"})"), ScenarioError);
    CHECK_THROWS_AS(load_text(R"({"name": "a", "source": "HALT",
        "hooks": [{"when": "after_exec", "action": "store", "addr": 1}]})"),
                    ScenarioError);
    CHECK_THROWS_AS(load_text(R"({"name": "a", "program": "nope.asm"})"), ScenarioError);
    CHECK_NOTHROW(load_text(R"({"name": "a", "source": "HALT", "or": [8448, "0x2100"]})"));
    fs::remove(tmp);
  }
}

TEST_CASE("security game: no strategy wins") {
  for (const auto& s : adversary_strategies()) {
    CAPTURE(s);
    GameOptions opts;
    opts.trials = 10;
    opts.seed = 21;
    opts.record_first_trace = true;
    const auto run = run_security_game(s, opts);
    CHECK(run.result.trials == 10);
    CHECK(run.result.wins == 0);
    CHECK(run.result.transcripts.size() == 10);
    if (run.trace) {
      REQUIRE(run.context);
      CHECK(trace_clean(*run.trace, *run.context));
    }
  }
}

TEST_CASE("security game: honest runs are accepted") {
  GameOptions opts;
  opts.trials = 100;
  opts.seed = 8;
  opts.record_first_trace = true;
  const auto run = run_security_game("honest", opts);
  CHECK(run.result.accepts == 100);
  CHECK(run.result.wins == 0);
  REQUIRE(run.trace);
  CHECK(trace_clean(*run.trace, *run.context));
  // Fresh challenge every trial.
  for (std::size_t i = 1; i < run.result.transcripts.size(); ++i) {
    CHECK(run.result.transcripts[i].chal != run.result.transcripts[i - 1].chal);
  }
}

TEST_CASE("security game bookkeeping") {
  CHECK(adversary_strategies().size() == 12);
  CHECK(strategy_names().size() == 13);
  CHECK_FALSE(is_adversary("honest"));
  CHECK(is_adversary("replay_chal"));
  CHECK(default_trials("forge_guess") == 100000);
  CHECK(default_trials("dma_mid_exec") == 100);
  CHECK_THROWS_AS(run_security_game("guess_harder", {}), UnknownStrategy);

  GameOptions opts;
  opts.trials = 5;
  opts.seed = 2;
  const auto a = run_security_game("wrong_code", opts).result;
  const auto b = run_security_game("wrong_code", opts).result;
  CHECK(format_result(a, true) == format_result(b, true));
  opts.keep_transcripts = false;
  CHECK(run_security_game("wrong_code", opts).result.transcripts.empty());
}
