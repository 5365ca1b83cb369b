#include <doctest.h>

#include <random>
#include <sstream>

#include "pox/machine/assembler.hpp"
#include "pox/monitor/monitor.hpp"

using namespace pox;
using namespace pox::monitor;
using machine::SignalSnapshot;

namespace {

using B = InputBit;

AbstractInput bits(std::initializer_list<B> on) {
  AbstractInput in;
  for (auto b : on) in.set(b);
  return in;
}

// Inputs with valid bounds and disjoint ER/CR unless stated otherwise.
AbstractInput quiet(std::initializer_list<B> on) {
  auto in = bits(on);
  return in.set(B::BoundsValid).set(B::ErCrDisjoint);
}

AbstractInput random_consistent(std::mt19937_64& rng) {
  for (;;) {
    AbstractInput in;
    // bias towards the benign bits so runs actually reach exec=1
    in.bits = static_cast<std::uint32_t>(rng() & rng() & 0xFFFF);
    if (rng() % 4) in.set(B::BoundsValid).set(B::ErCrDisjoint);
    if (structurally_consistent(in)) return in;
  }
}

// Machine plus monitor, stepped the way the device does it.
struct Rig {
  machine::Machine m;
  Monitor mon;
  machine::Trace trace;
  MetadataRegisters md;

  explicit Rig(std::string_view er_source, Address er_min = 0xE000) {
    const auto a = machine::assemble(er_source, er_min);
    m.provision(er_min, a.image);
    md.er_min = er_min;
    md.er_max = static_cast<Address>(er_min + a.image.size() - 1);
    md.or_min = 0x2100;
    md.or_max = 0x2100;
    m.provision(m.layout().metadata.min, encode_metadata(md));
    record(m.trigger_reset());
    record(m.inject(machine::ins::movi(machine::kSp, 0x8E00)));
  }

  void record(SignalSnapshot s) {
    mon.tick(s, read_metadata(m.state().mem, m.layout()), m.layout());
    m.hw_write(m.layout().exec_address(), s.exec);
    trace.push_back(s);
  }
  void enter() { record(m.inject(machine::ins::jmp(md.er_min))); }
  void run() {
    while (!m.halted()) record(m.step());
  }
  void attest_cycles(int n) {
    for (int i = 0; i < n; ++i) record(m.rom_idle(static_cast<Address>(m.layout().cr.min + 4 * i)));
    m.return_to_runtime();
  }
  void sw_store(Address a, std::uint8_t v) {
    record(m.inject(machine::ins::movi(0, v)));
    record(m.inject(machine::ins::store(0, a)));
  }
};

constexpr std::string_view kThreeInstructions = "MOVI r0, 42 / STORE r0, 0x2100 / HALT";

}  // namespace

TEST_CASE("metadata register file") {
  CHECK(register_file_size() == 9);
  const machine::MemoryLayout l;
  CHECK(l.metadata.size() == 9 + 32);
  CHECK(field_address(MetadataField::Exec, l) == l.exec_address());
  CHECK(field_address(MetadataField::ErMin, l) == l.metadata.min + 1);
  CHECK(field_address(MetadataField::Chal, l) == l.metadata.min + 9);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    MetadataRegisters md;
    md.er_min = static_cast<Address>(rng());
    md.er_max = static_cast<Address>(rng());
    md.or_min = static_cast<Address>(rng());
    md.or_max = static_cast<Address>(rng());
    md.exec = rng() % 2;
    for (auto& b : md.chal) b = static_cast<std::uint8_t>(rng());
    const auto block = encode_metadata(md);
    CHECK(decode_metadata(block) == md);
    Bytes mem(0x10000);
    store_metadata(mem, l, md);
    CHECK(read_metadata(mem, l) == md);
    CHECK(load_le16(&mem[field_address(MetadataField::OrMax, l)]) == md.or_max);
  }
}

TEST_CASE("write_metadata never touches exec") {
  MetadataRegisters md;
  md.exec = 1;
  for (auto via : {WriteSource::Software, WriteSource::Dma}) {
    CHECK(write_metadata(md, MetadataField::Exec, 0, via) == md);
    CHECK(write_metadata(md, MetadataField::ErMin, 0x1234, via).er_min == 0x1234);
    CHECK(write_metadata(md, MetadataField::OrMax, 0x2222, via).or_max == 0x2222);
  }
  Challenge c;
  c.fill(7);
  CHECK(write_challenge(md, c, WriteSource::Dma).chal == c);
}

TEST_CASE("project") {
  const machine::MemoryLayout l;
  MetadataRegisters md;
  md.er_min = 0xE000;
  md.er_max = 0xE00B;
  md.or_min = 0x2100;
  md.or_max = 0x2103;

  SignalSnapshot s;
  s.pc = 0xE000;
  auto in = project(s, md, l);
  CHECK(in[B::PcEqErMin]);
  CHECK(in[B::PcInEr]);
  CHECK_FALSE(in[B::PcEqErMax]);
  CHECK(in[B::BoundsValid]);
  CHECK(in[B::ErCrDisjoint]);

  s.pc = 0xE008;  // last instruction covers er_max
  CHECK(project(s, md, l)[B::PcEqErMax]);

  s.pc = 0x8F00;
  s.w_en = true;
  s.d_addr = 0xE004;
  in = project(s, md, l);
  CHECK(in[B::WEr]);
  CHECK_FALSE(in[B::PcInEr]);

  s = {};
  s.dma_en = true;
  s.dma_addr = static_cast<Address>(l.metadata.min + 12);
  in = project(s, md, l);
  CHECK(in[B::DmaMeta]);
  CHECK(in[B::DmaEn]);

  s.dma_addr = l.exec_address();  // hardware-owned byte is not a metadata write
  CHECK_FALSE(project(s, md, l)[B::DmaMeta]);

  s = {};
  s.pc = l.cr.min;
  in = project(s, md, l);
  CHECK(in[B::PcEqCrMin]);
  CHECK(in[B::PcInCr]);

  SUBCASE("absent output never matches") {
    md.or_min = md.or_max = kNoOutput;
    SignalSnapshot w;
    w.w_en = true;
    w.d_addr = 0xFFFF;
    CHECK_FALSE(project(w, md, l)[B::WOr]);
    CHECK(project(w, md, l)[B::BoundsValid]);
  }
  SUBCASE("inverted and overlapping bounds") {
    md.er_min = 0xF000;
    md.er_max = 0xE000;
    CHECK_FALSE(project(SignalSnapshot{}, md, l)[B::BoundsValid]);
    md.er_min = 0xB000;
    md.er_max = 0xC000;
    CHECK_FALSE(project(SignalSnapshot{}, md, l)[B::ErCrDisjoint]);
  }
}

TEST_CASE("projected inputs are always structurally consistent") {
  std::mt19937_64 rng(9);
  const machine::MemoryLayout l;
  for (int i = 0; i < 100000; ++i) {
    MetadataRegisters md;
    md.er_min = static_cast<Address>(rng());
    md.er_max = static_cast<Address>(md.er_min + rng() % 64);
    md.or_min = static_cast<Address>(rng());
    md.or_max = static_cast<Address>(md.or_min + rng() % 8);
    SignalSnapshot s;
    s.pc = rng() % 2 ? static_cast<Address>(md.er_min + rng() % 70) : static_cast<Address>(rng());
    // one kind of cycle at a time, as the machine produces them
    switch (rng() % 5) {
      case 0:
        s.reset = true;
        break;
      case 1:
        s.dma_en = true;
        s.dma_addr = static_cast<Address>(rng());
        break;
      case 2:
        s.irq = true;
        s.w_en = true;
        s.d_addr = static_cast<Address>(rng());
        break;
      case 3:
        s.w_en = true;
        s.d_addr = rng() % 2 ? static_cast<Address>(md.or_min) : static_cast<Address>(rng());
        break;
      default:
        s.r_en = rng() % 2;
        s.d_addr = static_cast<Address>(rng());
    }
    const auto in = project(s, md, l);
    REQUIRE_MESSAGE(structurally_consistent(in), to_string(in));
    if (in[B::PcEqErMin] || in[B::PcEqErMax]) CHECK(in[B::PcInEr]);
    if (in[B::WEr]) CHECK((s.w_en && md.er().contains(s.d_addr)));
  }
}

TEST_CASE("sub-module transitions") {
  SUBCASE("atomicity") {
    const auto t = standard_table(SubmoduleId::Atomicity);
    const auto notER = t.state_index("notER"), fst = t.state_index("fstER"), mid = t.state_index("midER"),
               last = t.state_index("lastER"), off = t.state_index("NotExec");
    CHECK(tick_submodule(t, notER, bits({B::PcInEr, B::PcEqErMin})).next == fst);
    const auto irq = tick_submodule(t, mid, bits({B::PcInEr, B::Irq}));
    CHECK(irq.next == off);
    CHECK_FALSE(irq.exec);
    CHECK(tick_submodule(t, fst, bits({B::PcInEr})).next == mid);
    CHECK(tick_submodule(t, mid, bits({B::PcInEr, B::PcEqErMax})).next == last);
    CHECK(tick_submodule(t, last, bits({})).next == notER);
    // leaving ER from the middle
    CHECK(tick_submodule(t, mid, bits({})).next == off);
    // single-instruction ER
    CHECK(tick_submodule(t, off, bits({B::PcInEr, B::PcEqErMin, B::PcEqErMax})).next == last);
  }
  SUBCASE("metadata") {
    const auto t = standard_table(SubmoduleId::MetadataFsm);
    const auto run = t.state_index("Run"), off = t.state_index("NotExec");
    CHECK(tick_submodule(t, run, bits({B::WMeta})).next == off);
    CHECK(tick_submodule(t, run, bits({B::DmaEn, B::DmaMeta})).next == off);
    CHECK(tick_submodule(t, off, bits({B::PcInEr, B::PcEqErMin})).next == run);
    // a violation in the entry cycle wins
    CHECK(tick_submodule(t, off, bits({B::PcInEr, B::PcEqErMin, B::WMeta})).next == off);
  }
  SUBCASE("every standard table exposes exec=0 exactly in NotExec") {
    for (const auto& t : standard_tables()) {
      CAPTURE(t.name);
      CHECK_NOTHROW(t.validate());
      for (const auto& r : t.rows) CHECK(r.exec == !t.is_not_exec(r.to));
      CHECK(t.is_not_exec(t.initial));
    }
  }
}

TEST_CASE("table text round trip") {
  for (const auto& t : standard_tables()) {
    std::stringstream ss;
    write_table(ss, t);
    CHECK(read_table(ss) == t);
  }
  const auto t = standard_table(SubmoduleId::MetadataFsm);
  CHECK(parse_guard(t, "pc_eq_ermin & !w_meta") == Guard{0b011, 0b001});
  CHECK(parse_guard(t, "true") == Guard{});
  CHECK_THROWS_AS(parse_guard(t, "irq"), TableError);
  CHECK_THROWS_AS(parse_guard(t, "w_meta & !w_meta"), TableError);
}

TEST_CASE("table validation") {
  auto t = standard_table(SubmoduleId::ResetGate);
  SUBCASE("a state without a catch-all row") {
    t.rows.pop_back();
    CHECK_THROWS_AS(t.validate(), TableError);
  }
  SUBCASE("exec bit disagreeing with the target") {
    t.rows[0].exec = false;
    CHECK_THROWS_AS(t.validate(), TableError);
  }
  SUBCASE("malformed text") {
    std::istringstream is("submodule x\ninputs reset\nstates NotExec\ninitial NotExec\nNotExec | bogus | NotExec | 0\n");
    try {
      read_table(is);
      FAIL("accepted");
    } catch (const TableError& e) {
      CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
  }
}

TEST_CASE("standard mutations change exactly one row") {
  for (auto id : kAllSubmodules) {
    const auto t = standard_table(id);
    const auto m = standard_mutation(id);
    const auto mutated = apply(t, m);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) diff += t.rows[i] != mutated.rows[i];
    CHECK(diff == 1);
  }
}

TEST_CASE("monitor: boot keeps exec low") {
  Monitor mon;
  CHECK_FALSE(mon.tick(quiet({B::Reset})));
  CHECK_FALSE(mon.tick(quiet({B::Reset, B::PcInEr, B::PcEqErMin})));
}

TEST_CASE("monitor: honest pass over a three-instruction ER") {
  Rig rig(kThreeInstructions);
  rig.enter();
  rig.run();
  rig.attest_cycles(10);
  const auto& t = rig.trace;
  // cycles: reset, sp, jmp, MOVI, STORE, HALT, 10 x cr
  REQUIRE(t.size() == 16);
  CHECK_FALSE(t[2].exec);
  for (std::size_t i = 3; i < t.size(); ++i) CHECK(t[i].exec);
  CHECK(rig.m.peek(0x2100) == 42);
  CHECK(rig.m.peek(rig.m.layout().exec_address()) == 1);
}

TEST_CASE("monitor: violations after the run clear exec") {
  Rig rig(kThreeInstructions);
  rig.enter();
  rig.run();
  REQUIRE(rig.mon.exec());

  SUBCASE("software rewrites or_max") {
    rig.sw_store(field_address(MetadataField::OrMax, rig.m.layout()), 0x22);
    CHECK_FALSE(rig.mon.exec());
  }
  SUBCASE("software writes OR outside ER") {
    rig.sw_store(0x2100, 1);
    CHECK_FALSE(rig.mon.exec());
  }
  SUBCASE("DMA into ER") {
    rig.record(rig.m.dma(machine::DmaOp::Write, 0xE004, 0));
    CHECK_FALSE(rig.mon.exec());
  }
  SUBCASE("bounds inverted") {
    rig.sw_store(field_address(MetadataField::ErMin, rig.m.layout()) + 1, 0xFF);
    CHECK_FALSE(rig.mon.exec());
  }
  SUBCASE("reset") {
    rig.record(rig.m.trigger_reset());
    CHECK_FALSE(rig.mon.exec());
  }
  SUBCASE("unrelated data writes keep it") {
    rig.sw_store(0x3000, 1);
    CHECK(rig.mon.exec());
  }
}

TEST_CASE("monitor: interrupt inside ER clears exec") {
  Rig rig("NOP / NOP / NOP / HALT");
  rig.m.provision(0x6000, machine::encode(machine::ins::reti()));
  rig.enter();
  rig.record(rig.m.step());
  rig.record(rig.m.raise_irq(0x6000));
  CHECK(rig.trace.back().irq);
  CHECK(rig.md.er().contains(rig.trace.back().pc));
  CHECK_FALSE(rig.trace.back().exec);
  rig.run();
  CHECK_FALSE(rig.mon.exec());
}

TEST_CASE("monitor: writes to the exec byte do not change the exec column") {
  const machine::MemoryLayout l;
  auto run = [&](Address target) {
    Rig rig(kThreeInstructions);
    rig.enter();
    rig.run();
    rig.sw_store(target, 1);
    rig.record(rig.m.dma(machine::DmaOp::Write, target, 0));
    rig.sw_store(target, 0);
    rig.attest_cycles(4);
    std::vector<bool> col;
    for (const auto& s : rig.trace) col.push_back(s.exec);
    return col;
  };
  CHECK(run(l.exec_address()) == run(0x3000));
}

TEST_CASE("monitor: properties over random input streams") {
  std::mt19937_64 rng(21);
  for (int run = 0; run < 300; ++run) {
    Monitor a, b;
    bool prev = false;
    for (int i = 0; i < 200; ++i) {
      const auto in = random_consistent(rng);
      const bool exec = a.tick(in);
      // purity
      CHECK(b.tick(in) == exec);
      // composition: exec is the AND of outputs, and high only when no
      // sub-module sits in its NotExec state
      const auto outs = a.outputs();
      CHECK(exec == std::all_of(outs.begin(), outs.end(), [](bool x) { return x; }));
      if (exec) {
        for (std::size_t k = 0; k < a.submodules().size(); ++k) {
          CHECK_FALSE(a.submodules()[k].table().is_not_exec(a.state().states[k]));
        }
      }
      // rising edge only on entry
      if (!prev && exec) CHECK(in[B::PcEqErMin]);
      // reset and irq-in-ER always clear
      if (in[B::Reset]) CHECK_FALSE(exec);
      if (in[B::Irq] && in[B::PcInEr]) CHECK_FALSE(exec);
      if (!in[B::BoundsValid] || !in[B::ErCrDisjoint]) CHECK_FALSE(exec);
      if (in[B::WEr] || in[B::DmaEr] || in[B::WMeta] || in[B::DmaMeta]) CHECK_FALSE(exec);
      prev = exec;
    }
  }
}

TEST_CASE("monitor: restart") {
  Monitor m;
  m.tick(quiet({B::PcInEr, B::PcEqErMin}));
  REQUIRE(m.exec());
  m.restart();
  CHECK_FALSE(m.exec());
  CHECK(m.state() == Monitor().state());
}
