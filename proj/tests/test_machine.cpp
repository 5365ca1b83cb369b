#include <doctest.h>

#include <random>
#include <sstream>

#include "pox/machine/assembler.hpp"
#include "pox/machine/machine.hpp"
#include "pox/machine/trace_io.hpp"

using namespace pox;
using namespace pox::machine;

namespace {

std::span<const std::uint8_t, kInstructionBytes> word_at(const Bytes& image, std::size_t index) {
  return std::span<const std::uint8_t, kInstructionBytes>(image.data() + index * kInstructionBytes, kInstructionBytes);
}

// Boots the CPU at `entry` with a stack in data, the way the runtime would.
Machine booted(const Assembly& a, Address entry = 0xE000) {
  Machine m;
  m.provision(a.base, a.image);
  m.trigger_reset();
  m.inject(ins::movi(kSp, 0x8E00));
  m.inject(ins::jmp(entry));
  return m;
}

}  // namespace

TEST_CASE("assemble: single NOP") {
  const auto a = assemble("NOP");
  REQUIRE(a.image.size() == 4);
  CHECK(disassemble(*decode(word_at(a.image, 0))) == "NOP");
  CHECK(a.symbols.at("entry") == 0xE000);
}

TEST_CASE("assemble: operand fields survive a disassembly round trip") {
  const auto a = assemble("MOVI r0, 5 / STORE r0, 0xEEE0");
  REQUIRE(a.image.size() == 8);
  const auto second = decode(word_at(a.image, 1));
  REQUIRE(second);
  CHECK(second->op == Opcode::Store);
  CHECK(second->imm == 0xEEE0);
  CHECK(assemble(disassemble(a.image)).image == a.image);
}

TEST_CASE("assemble: forward labels resolve in the second pass") {
  const auto a = assemble(R"(
      MOVI r1, 1
      JMP end        ; skip the next two
      NOP
      NOP
    end:
      HALT
  )",
                          0xE100);
  // end is the fifth instruction
  CHECK(a.symbols.at("end") == 0xE100 + 4 * 4);
  CHECK(decode(word_at(a.image, 1))->imm == a.symbols.at("end"));
  CHECK(a.symbols.at("exit") == a.symbols.at("end"));
}

TEST_CASE("assemble: constants, indirect operands and label offsets") {
  const auto a = assemble(R"(
    .equ OUT, 0x2100
      MOVI r1, OUT
      STORE r0, [r1+2]
      LOAD r2, OUT+1
      JZ r2, tail+4
    tail:
      NOP
      HALT
  )");
  CHECK(a.symbols.at("OUT") == 0x2100);
  const auto st = *decode(word_at(a.image, 1));
  CHECK(st.rb == 1);
  CHECK(st.imm == 2);
  CHECK(decode(word_at(a.image, 2))->imm == 0x2101);
  CHECK(decode(word_at(a.image, 3))->imm == a.symbols.at("tail") + 4);
}

TEST_CASE("assemble: errors carry the offending line") {
  auto line_of = [](std::string_view src) {
    try {
      assemble(src);
    } catch (const AssemblyError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("NOP\nFROB r0\n") == 2);
  CHECK(line_of("NOP\nNOP\nJMP nowhere\n") == 3);
  CHECK(line_of("x:\nx:\nNOP\n") == 2);
  CHECK_THROWS_AS(assemble("NOP / NOP / NOP", 0xE000, AddressRange{0xE000, 0xE007}), AssemblyError);
  CHECK_NOTHROW(assemble("NOP / NOP", 0xE000, AddressRange{0xE000, 0xE007}));
}

TEST_CASE("encode/decode round trip for every opcode") {
  std::mt19937 rng(3);
  const std::vector<Instruction> samples{
      ins::nop(),          ins::movi(2, 0xBEEF), ins::load(1, 0x1234),     ins::load_indirect(0, 3, 7),
      ins::store(3, 0x22), ins::store_indirect(2, 1), ins::add(0, 1),      ins::addi(1, 0xFFFF),
      ins::sub(3, 2),      ins::subi(0, 9),      ins::jmp(0xE010),         ins::jz(2, 0xE020),
      ins::call(0xE030),   ins::ret(),           ins::reti(),              ins::halt(),
      ins::movi(kSp, 0x8E00)};
  for (const auto& i : samples) {
    CAPTURE(disassemble(i));
    const auto back = decode(encode(i));
    REQUIRE(back);
    CHECK(*back == i);
    CHECK(opcode_from_mnemonic(mnemonic(i.op)) == i.op);
  }
  // Random words decode only if they re-encode to themselves.
  for (int n = 0; n < 20000; ++n) {
    Encoded w{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
              static_cast<std::uint8_t>(rng())};
    if (auto d = decode(w)) CHECK(encode(*d) == w);
  }
  CHECK_FALSE(decode(Encoded{0, 0, 0, 0}));
  CHECK_FALSE(decode(Encoded{0xFF, 0, 0, 0}));
}

TEST_CASE("symbol map sidecar round trip") {
  const auto a = assemble("start: NOP\nloop: JMP loop\n");
  std::stringstream ss;
  write_symbol_map(ss, a.symbols);
  CHECK(ss.str().find("loop=0xE004") != std::string::npos);
  CHECK(read_symbol_map(ss) == a.symbols);
  std::istringstream bad("loop=zz\n");
  CHECK_THROWS_AS(read_symbol_map(bad), AssemblyError);
}

TEST_CASE("layout validation") {
  CHECK_NOTHROW(MemoryLayout{}.validate());
  MemoryLayout l;
  l.kr = {0xA000, 0xA01F};  // inside cr
  CHECK_THROWS_AS(l.validate(), LayoutError);
  l = {};
  l.metadata = {0x0021, 0x0040};
  CHECK_THROWS_AS(l.validate(), LayoutError);
  l = {};
  l.prog = {0xF000, 0xE000};
  CHECK_THROWS_AS(l.validate(), LayoutError);
}

TEST_CASE("step: wires exercised by single instructions") {
  auto m = booted(assemble("MOVI r0, 0x77 / STORE r0, 0x4000 / NOP / LOAD r1, 0x4000 / HALT"));
  m.step();
  const auto st = m.step();
  CHECK(st.w_en);
  CHECK_FALSE(st.r_en);
  CHECK(st.d_addr == 0x4000);
  CHECK(st.pc == 0xE004);
  CHECK(m.peek(0x4000) == 0x77);

  const auto nop = m.step();
  CHECK_FALSE(nop.r_en);
  CHECK_FALSE(nop.w_en);
  CHECK_FALSE(nop.dma_en);
  CHECK_FALSE(nop.irq);
  CHECK_FALSE(nop.reset);

  const auto ld = m.step();
  CHECK(ld.r_en);
  CHECK(ld.d_addr == 0x4000);
  CHECK(m.state().regs[1] == 0x77);
  m.step();
  CHECK(m.halted());
  CHECK_THROWS_AS(m.step(), std::logic_error);
}

TEST_CASE("step: a due DMA write preempts the CPU") {
  auto m = booted(assemble("NOP / NOP / HALT"));
  m.schedule(DmaEvent{m.cycle(), DmaOp::Write, 0x5000, 0xAB});
  const Address pc = m.state().pc;
  const auto s = m.step();
  CHECK(s.dma_en);
  CHECK(s.dma_addr == 0x5000);
  CHECK_FALSE(s.w_en);
  CHECK(m.peek(0x5000) == 0xAB);
  CHECK(m.state().pc == pc);  // stalled
}

TEST_CASE("reset semantics") {
  Machine m;
  SUBCASE("boot") {
    const auto s = m.trigger_reset();
    CHECK(s.cycle == 0);
    CHECK(s.reset);
  }
  SUBCASE("reset at cycle 100 zeroes pc and registers") {
    m.provision(0xE000, assemble("loop: MOVI r2, 9 / JMP loop").image);
    m.trigger_reset();
    m.inject(ins::jmp(0xE000));
    while (m.cycle() < 100) m.step();
    CHECK(m.state().regs[2] == 9);
    const auto s = m.trigger_reset();
    CHECK(s.cycle == 100);
    CHECK(s.reset);
    CHECK(m.state().pc == 0);
    CHECK(m.state().regs == std::array<std::uint16_t, 4>{});
    CHECK(m.state().sp == 0);
  }
  SUBCASE("consecutive resets") {
    const auto a = m.trigger_reset();
    const auto b = m.trigger_reset();
    CHECK(a.reset);
    CHECK(b.reset);
    CHECK(b.cycle == a.cycle + 1);
    CHECK(m.state().pc == 0);
  }
  SUBCASE("RAM survives reset") {
    m.provision(0x3000, std::array<std::uint8_t, 1>{0x5A});
    m.trigger_reset();
    CHECK(m.peek(0x3000) == 0x5A);
  }
}

TEST_CASE("interrupts") {
  const auto a = assemble(R"(
      NOP
      NOP
      HALT
  )");
  auto m = booted(a);
  m.provision(0x6000, encode(ins::reti()));
  m.step();  // first NOP
  m.schedule(IrqEvent{m.cycle(), 0x6000});
  const auto irq = m.step();
  CHECK(irq.irq);
  CHECK(irq.pc == 0xE004);
  CHECK(m.state().pc == 0x6000);
  const auto reti = m.step();
  CHECK(reti.pc == 0x6000);
  CHECK(m.state().pc == 0xE004);
  const auto resumed = m.step();
  CHECK(resumed.pc == 0xE004);

  SUBCASE("nested and masked requests are dropped") {
    auto n = booted(a);
    n.set_interrupts_enabled(false);
    n.schedule(IrqEvent{n.cycle(), 0x6000});
    const auto s = n.step();
    CHECK_FALSE(s.irq);
    CHECK(s.pc == 0xE000);
  }
  SUBCASE("a masked request while idle costs one idle cycle") {
    auto n = booted(assemble("HALT"));
    n.step();
    REQUIRE(n.halted());
    n.set_interrupts_enabled(false);
    n.schedule(IrqEvent{n.cycle(), 0x6000});
    const auto s = n.step();
    CHECK_FALSE(s.irq);
    CHECK(n.halted());
    CHECK(n.pending_events() == 0);
  }
  SUBCASE("no stack means a trap") {
    Machine n;
    n.provision(0xE000, a.image);
    n.trigger_reset();
    n.inject(ins::jmp(0xE000));
    const auto s = n.raise_irq(0x6000);
    CHECK(s.irq);
    CHECK(n.reset_pending());
    CHECK(n.step().reset);
  }
}

TEST_CASE("guarded_access outcomes") {
  const MemoryLayout l;
  const Address key = l.kr.min;
  CHECK(guarded_access(l, 0xE000, key, AccessKind::Read) == AccessOutcome::DenyAndReset);
  CHECK(guarded_access(l, 0xE000, key, AccessKind::DmaRead) == AccessOutcome::DenyAndReset);
  CHECK(guarded_access(l, l.cr.min, key, AccessKind::Read) == AccessOutcome::Allow);
  CHECK(guarded_access(l, 0xE000, l.exec_address(), AccessKind::Write) == AccessOutcome::Ignore);
  CHECK(guarded_access(l, 0xE000, l.exec_address(), AccessKind::DmaWrite) == AccessOutcome::Ignore);
  CHECK(guarded_access(l, 0xE000, static_cast<Address>(l.exec_address() + 1), AccessKind::Write) ==
        AccessOutcome::Allow);
  CHECK(guarded_access(l, 0xE000, l.cr.min, AccessKind::Write) == AccessOutcome::Ignore);
  CHECK(guarded_access(l, 0xE000, 0x4000, AccessKind::Read) == AccessOutcome::Allow);
}

TEST_CASE("software reading the key is reset") {
  auto m = booted(assemble("LOAD r0, 0x9F00 / NOP"));
  m.provision(0x9F00, std::array<std::uint8_t, 1>{0xCC});
  const auto ld = m.step();
  CHECK(ld.r_en);
  CHECK(m.state().regs[0] == 0);
  const auto rst = m.step();
  CHECK(rst.reset);
  CHECK(rst.cycle == ld.cycle + 1);
}

TEST_CASE("software cannot write the exec byte") {
  const MemoryLayout l;
  auto m = booted(assemble("MOVI r0, 1 / STORE r0, " + std::to_string(l.exec_address()) + " / HALT"));
  m.hw_write(l.exec_address(), 0);
  m.step();
  const auto s = m.step();
  CHECK(s.w_en);
  CHECK(s.d_addr == l.exec_address());
  CHECK(m.peek(l.exec_address()) == 0);
  m.schedule(DmaEvent{m.cycle(), DmaOp::Write, l.exec_address(), 1});
  m.step();
  CHECK(m.peek(l.exec_address()) == 0);
}

TEST_CASE("fetch faults reset in the same cycle") {
  SUBCASE("jump into cr") {
    auto m = booted(assemble("JMP 0xA000"));
    m.step();
    const auto s = m.step();
    CHECK(s.reset);
    CHECK(m.state().pc == 0);
  }
  SUBCASE("undecodable word") {
    Machine m;
    m.provision(0xE000, std::array<std::uint8_t, 4>{0xFF, 0xFF, 0xFF, 0xFF});
    m.trigger_reset();
    m.inject(ins::jmp(0xE000));
    CHECK(m.step().reset);
  }
}

TEST_CASE("gpio input script and output log") {
  auto m = booted(assemble("LOAD r0, 0x1C / LOAD r1, 0x1C / LOAD r2, 0x1C / MOVI r3, 1 / STORE r3, 0x1D / HALT"));
  m.gpio().script_input({1, 0});
  for (int i = 0; i < 6; ++i) m.step();
  CHECK(m.state().regs[0] == 1);
  CHECK(m.state().regs[1] == 0);
  CHECK(m.state().regs[2] == 0);  // script ran dry
  CHECK(m.gpio().bits_consumed() == 2);
  REQUIRE(m.gpio().writes().size() == 1);
  CHECK(m.gpio().writes()[0].addr == 0x1D);
  CHECK(m.gpio().writes()[0].value == 1);
}

namespace {

// Random program in prog plus a random DMA/IRQ schedule. With check_a2 set,
// every memory change is matched against the cycle's wires.
Trace random_run(std::uint64_t seed, bool check_a2) {
  std::mt19937_64 rng(seed);
  Machine m;
  Bytes image;
  for (int i = 0; i < 48; ++i) {
    Instruction ins;
    switch (rng() % 6) {
      case 0:
        ins = ins::movi(static_cast<std::uint8_t>(rng() % 4), static_cast<std::uint16_t>(0x1000 + rng() % 0x7000));
        break;
      case 1:
        ins = ins::store(static_cast<std::uint8_t>(rng() % 4), static_cast<Address>(0x1000 + rng() % 0x100));
        break;
      case 2:
        ins = ins::load(static_cast<std::uint8_t>(rng() % 4), static_cast<Address>(0x1000 + rng() % 0x100));
        break;
      case 3:
        ins = ins::addi(static_cast<std::uint8_t>(rng() % 4), static_cast<std::uint16_t>(rng()));
        break;
      case 4:
        ins = ins::jz(static_cast<std::uint8_t>(rng() % 4), static_cast<Address>(0xE000 + 4 * (rng() % 48)));
        break;
      default:
        ins = ins::nop();
    }
    const auto w = encode(ins);
    image.insert(image.end(), w.begin(), w.end());
  }
  const auto halt = encode(ins::halt());
  image.insert(image.end(), halt.begin(), halt.end());
  m.provision(0xE000, image);
  m.provision(0x6000, encode(ins::reti()));
  Trace t;
  t.push_back(m.trigger_reset());
  t.push_back(m.inject(ins::movi(kSp, 0x8E00)));
  t.push_back(m.inject(ins::jmp(0xE000)));
  for (int i = 0; i < 6; ++i) {
    const std::uint64_t at = 3 + rng() % 200;
    if (rng() % 2) {
      m.schedule(DmaEvent{at, rng() % 2 ? DmaOp::Write : DmaOp::Read, static_cast<Address>(0x1000 + rng() % 0x100),
                          static_cast<std::uint8_t>(rng())});
    } else {
      m.schedule(IrqEvent{at, 0x6000});
    }
  }
  for (int i = 0; i < 300 && (!m.halted() || m.event_due()); ++i) {
    const Bytes before = m.state().mem;
    const auto s = m.step();
    t.push_back(s);
    if (!check_a2) continue;
    const Bytes& after = m.state().mem;
    for (std::size_t a = 0; a < after.size(); ++a) {
      if (before[a] == after[a]) continue;
      const bool cpu = s.w_en && (a == s.d_addr || a == static_cast<std::size_t>(s.d_addr) + 1);
      const bool dma = s.dma_en && a == s.dma_addr;
      REQUIRE_MESSAGE((cpu || dma), "unattributed change at " << a << " cycle " << s.cycle);
    }
    if (s.w_en && !s.irq && s.d_addr >= 0x1000 && s.d_addr < 0x1100) {
      const auto reg = decode(std::span<const std::uint8_t, 4>(before.data() + s.pc, 4));
      if (reg && reg->op == Opcode::Store) CHECK(after[s.d_addr] == (m.state().regs[reg->ra] & 0xFF));
    }
  }
  return t;
}

}  // namespace

TEST_CASE("trace invariants over random programs") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    const auto t = random_run(seed, true);
    for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t[i].cycle == t[i - 1].cycle + 1);
    for (const auto& s : t) CHECK_FALSE((s.reset && (s.w_en || s.r_en)));
  }
}

TEST_CASE("identical inputs give identical traces") {
  for (std::uint64_t seed : {5, 17, 99}) CHECK(random_run(seed, false) == random_run(seed, false));
}

TEST_CASE("trace JSON lines") {
  const auto t = random_run(8, false);
  std::stringstream ss;
  write_trace(ss, t);
  CHECK(read_trace(ss) == t);

  SignalSnapshot s;
  s.cycle = 3;
  s.pc = 0xE000;
  s.w_en = true;
  s.d_addr = 0x2100;
  CHECK(to_json_line(s) ==
        R"({"cycle":3,"pc":57344,"r_en":0,"w_en":1,"d_addr":8448,"dma_en":0,"dma_addr":0,"irq":0,"reset":0,"exec":0})");

  auto fails_at = [](const std::string& text) {
    std::istringstream is(text);
    try {
      read_trace(is);
    } catch (const TraceParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  const std::string good = to_json_line(s) + "\n";
  s.cycle = 4;
  const std::string next = to_json_line(s) + "\n";
  CHECK(fails_at(good + next) == 0);
  CHECK(fails_at(good + good) == 2);                                       // no gap or repeat
  CHECK(fails_at(good + "{\"cycle\":4}\n") == 2);                          // missing keys
  CHECK(fails_at(good + "not json\n") == 2);
  CHECK(fails_at(R"({"cycle":0,"pc":70000,"r_en":0,"w_en":0,"d_addr":0,"dma_en":0,"dma_addr":0,"irq":0,"reset":0,"exec":0})") == 1);
  CHECK(fails_at(R"({"cycle":0,"pc":0,"r_en":2,"w_en":0,"d_addr":0,"dma_en":0,"dma_addr":0,"irq":0,"reset":0,"exec":0})") == 1);
  CHECK(fails_at(R"({"cycle":0,"pc":0,"r_en":0,"w_en":0,"d_addr":0,"dma_en":0,"dma_addr":0,"irq":0,"reset":0,"exec":0,"x":1})") == 1);
}
