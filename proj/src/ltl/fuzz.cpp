// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/ltl/fuzz.hpp"

#include <random>
#include <sstream>

#include "pox/machine/assembler.hpp"
#include "pox/protocol/prover.hpp"

namespace pox::ltl {
namespace {

using machine::MemoryLayout;
using protocol::Device;

constexpr Address kIsr = 0xFFF0;
constexpr Address kStackTop = 0x8E00;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(g_); }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::bernoulli_distribution(p)(g_); }
  std::uint64_t next() { return g_(); }

 private:
  std::mt19937_64 g_;
};

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

struct Plan {
  protocol::Request req;
  std::string source;
  std::vector<std::string> notes;
};

// Straight-line code with forward branches, ending in HALT on the last word.
std::string random_program(Rng& rng, const protocol::Request& req, const MemoryLayout& layout, std::size_t count,
                           std::vector<std::string>& notes) {
  std::ostringstream src;
  auto reg = [&] { return "r" + std::to_string(rng.below(4)); };
  auto or_addr = [&]() -> std::uint64_t {
    if (req.output_absent()) return layout.data.min + rng.below(0x100);
    return rng.range(req.or_min, req.or_max);
  };
  for (std::size_t i = 0; i + 1 < count; ++i) {
    src << "L" << i << ": ";
    const auto pick = rng.below(100);
    if (pick < 20) {
      src << "MOVI " << reg() << ", " << hex(rng.below(0x10000));
    } else if (pick < 35) {
      src << (rng.chance(0.5) ? "ADD " : "SUB ") << reg() << ", " << (rng.chance(0.5) ? reg() : hex(rng.below(16)));
    } else if (pick < 48) {
      src << "LOAD " << reg() << ", " << hex(layout.data.min + rng.below(0x200));
    } else if (pick < 70) {
      src << "STORE " << reg() << ", " << hex(or_addr());
    } else if (pick < 82) {
      src << "JZ " << reg() << ", L" << rng.range(i + 1, count - 1);
    } else if (pick < 84) {
      // writes that are forbidden while ER runs
      const auto target = rng.below(3);
      const std::uint64_t a = target == 0 ? req.er_min + rng.below(req.er().size())
                              : target == 1 ? layout.metadata.min + 1 + rng.below(layout.metadata.size() - 1)
                                            : layout.data.min + 0x400 + rng.below(0x100);
      src << "STORE " << reg() << ", " << hex(a);
      notes.push_back("store to " + hex(a) + " inside ER");
    } else if (pick < 86) {
      const std::uint64_t t = rng.chance(0.5) ? layout.prog.min + 4 * rng.below(0x100) : kIsr;
      src << (rng.chance(0.5) ? "JMP " : "CALL ") << hex(t);
      notes.push_back("control transfer to " + hex(t) + " inside ER");
    } else {
      src << "NOP";
    }
    src << '\n';
  }
  src << "L" << (count - 1) << ": HALT\n";
  return src.str();
}

Plan make_plan(Rng& rng, const MemoryLayout& layout) {
  Plan p;
  const std::size_t count = rng.range(1, 12);
  // ER in the lower part of prog so the ISR at the top never overlaps it.
  p.req.er_min = static_cast<Address>(layout.prog.min + 4 * rng.below(0x200));
  p.req.er_max = static_cast<Address>(p.req.er_min + 4 * count - 1);
  if (rng.chance(0.15)) {
    p.notes.push_back("no output region");
  } else {
    p.req.or_min = static_cast<Address>(layout.data.min + 2 * rng.below(0x80));
    p.req.or_max = static_cast<Address>(p.req.or_min + rng.range(1, 16));
  }
  for (auto& b : p.req.chal) b = static_cast<std::uint8_t>(rng.below(256));
  p.source = random_program(rng, p.req, layout, count, p.notes);
  const auto image = machine::assemble(p.source, p.req.er_min).image;
  p.req.s = image;
  return p;
}

enum class Perturbation : std::uint8_t {
  None,
  DmaDuringExec,
  IrqDuringExec,
  WriteAfterExec,
  DmaAfterExec,
  ResetDuringExec,
  EnterMidEr,
  IncompleteExec,
  MetadataTamper,
  SecondProve,
  IllegalCrEntry,
};
constexpr std::size_t kPerturbations = 11;

const char* perturbation_name(Perturbation p) {
  switch (p) {
    case Perturbation::None: return "honest";
    case Perturbation::DmaDuringExec: return "dma during exec";
    case Perturbation::IrqDuringExec: return "irq during exec";
    case Perturbation::WriteAfterExec: return "write after exec";
    case Perturbation::DmaAfterExec: return "dma after exec";
    case Perturbation::ResetDuringExec: return "reset during exec";
    case Perturbation::EnterMidEr: return "jump into middle of ER";
    case Perturbation::IncompleteExec: return "incomplete exec";
    case Perturbation::MetadataTamper: return "metadata tamper";
    case Perturbation::SecondProve: return "second prove";
    case Perturbation::IllegalCrEntry: return "illegal CR entry";
  }
  return "?";
}

Address random_target(Rng& rng, const Plan& p, const MemoryLayout& layout) {
  switch (rng.below(5)) {
    case 0: return static_cast<Address>(p.req.er_min + rng.below(p.req.er().size()));
    case 1:
      if (!p.req.output_absent()) return static_cast<Address>(rng.range(p.req.or_min, p.req.or_max));
      [[fallthrough]];
    case 2: return static_cast<Address>(layout.metadata.min + rng.below(layout.metadata.size()));
    case 3: return static_cast<Address>(layout.mr.min + rng.below(layout.mr.size()));
    default: return static_cast<Address>(layout.data.min + rng.below(layout.data.size()));
  }
}

struct Outcome {
  machine::Trace trace;
  TraceContext ctx;
  std::string scenario;
};

Outcome run_case(Rng& rng, const FuzzOptions& opts) {
  protocol::DeviceConfig cfg;
  cfg.cost = swatt::kFastCostModel;
  if (opts.tables) cfg.tables = *opts.tables;
  swatt::Key key{};
  for (auto& b : key) b = static_cast<std::uint8_t>(rng.below(256));
  Device dev(key, cfg);
  const auto& layout = dev.layout();
  protocol::Prover prover(dev);

  Plan plan = make_plan(rng, layout);
  dev.machine().provision(kIsr, machine::encode(machine::ins::reti()));
  dev.sw_set_sp(kStackTop);
  prover.install(plan.req);

  const auto pert =
      rng.chance(0.3) ? Perturbation::None : static_cast<Perturbation>(rng.range(1, kPerturbations - 1));
  std::vector<std::string> notes{perturbation_name(pert)};
  notes.insert(notes.end(), plan.notes.begin(), plan.notes.end());
  const std::uint64_t exec_len = plan.req.er().size() / 4 + 2;

  switch (pert) {
    case Perturbation::DmaDuringExec:
      for (std::uint64_t k = rng.range(1, 2); k > 0; --k) {
        const Address a = random_target(rng, plan, layout);
        dev.schedule(machine::DmaEvent{dev.cycle() + 1 + rng.below(exec_len + 2),
                                       rng.chance(0.7) ? machine::DmaOp::Write : machine::DmaOp::Read, a,
                                       static_cast<std::uint8_t>(rng.below(256))});
        notes.push_back("dma at " + hex(a));
      }
      break;
    case Perturbation::IrqDuringExec:
      if (rng.chance(0.3)) dev.set_interrupts_enabled(false);
      dev.schedule(machine::IrqEvent{dev.cycle() + 1 + rng.below(exec_len + 2), kIsr});
      break;
    case Perturbation::MetadataTamper:
      if (rng.chance(0.5)) {
        const Address a = static_cast<Address>(layout.metadata.min + rng.below(9));
        dev.sw_store(a, static_cast<std::uint8_t>(rng.below(256)));
        notes.push_back("pre-exec store to " + hex(a));
      }
      break;
    default:
      break;
  }

  if (pert == Perturbation::EnterMidEr && plan.req.er().size() > 4) {
    dev.sw_jump(static_cast<Address>(plan.req.er_min + 4 * rng.range(1, plan.req.er().size() / 4 - 1)));
    dev.run(10'000);
  } else if (pert == Perturbation::ResetDuringExec || pert == Perturbation::IncompleteExec) {
    dev.sw_jump(plan.req.er_min);
    dev.run(rng.below(exec_len + 1));
    if (pert == Perturbation::ResetDuringExec) {
      dev.reset();
    } else {
      dev.sw_jump(layout.data.min);  // abandon ER; the fetch faults and resets
    }
  } else {
    prover.xatomic_exec(10'000);
  }

  switch (pert) {
    case Perturbation::WriteAfterExec: {
      const Address a = random_target(rng, plan, layout);
      dev.sw_store(a, static_cast<std::uint8_t>(rng.below(256)));
      notes.push_back("store to " + hex(a));
      break;
    }
    case Perturbation::DmaAfterExec: {
      const Address a = random_target(rng, plan, layout);
      if (rng.chance(0.5)) {
        dev.dma_write(a, static_cast<std::uint8_t>(rng.below(256)));
      } else {
        dev.dma_read(a);
      }
      notes.push_back("dma at " + hex(a));
      break;
    }
    case Perturbation::MetadataTamper: {
      const Address a = static_cast<Address>(layout.metadata.min + rng.below(layout.metadata.size()));
      dev.sw_store(a, static_cast<std::uint8_t>(rng.below(256)));
      notes.push_back("post-exec store to " + hex(a));
      break;
    }
    case Perturbation::IllegalCrEntry: {
      const Address t = static_cast<Address>(layout.cr.min + 4 * rng.range(1, 64));
      dev.sw_jump(t);
      dev.run(Device::kSettleBudget);
      notes.push_back("jump to " + hex(t));
      break;
    }
    default:
      break;
  }

  if (!rng.chance(0.05)) prover.xprove();
  if (pert == Perturbation::SecondProve) {
    if (rng.chance(0.5)) dev.sw_store(static_cast<Address>(layout.mr.min), 0x5A);
    prover.xprove();
  }
  dev.idle(rng.below(4));

  Outcome out;
  out.ctx = {layout, dev.bounds_timeline()};
  out.trace = dev.take_trace();
  std::ostringstream sc;
  for (std::size_t i = 0; i < notes.size(); ++i) sc << (i ? "; " : "") << notes[i];
  out.scenario = sc.str();
  return out;
}

}  // namespace

std::vector<monitor::SubmoduleTable> broken_tables() {
  std::vector<monitor::SubmoduleTable> out;
  for (auto id : monitor::kAllSubmodules) out.push_back(monitor::apply(monitor::standard_table(id), monitor::standard_mutation(id)));
  return out;
}

FuzzReport execution_fuzz(const FuzzOptions& opts) {
  FuzzReport r;
  Rng rng(opts.seed);
  for (std::size_t t = 0; t < opts.traces; ++t) {
    Rng case_rng(rng.next());
    Outcome o = run_case(case_rng, opts);
    const PropTrace pt = build_prop_trace(o.trace, o.ctx);
    CheckReport rep = check_trace(pt);
    rep.verdicts.push_back(check_execution_windows(pt));
    ++r.traces;
    r.cycles += pt.length();
    if (!rep.verdicts.back().vacuous) ++r.non_vacuous;
    bool failed = false;
    for (const auto& v : rep.verdicts) {
      if (v.holds) continue;
      ++r.failures_by_property[v.name];
      if (!failed && r.details.size() < opts.max_details) {
        r.details.push_back({t, o.scenario, v.name, *v.first_violation, *v.violation_cycle});
      }
      failed = true;
    }
    if (failed) ++r.discrepancies;
  }
  return r;
}

std::string format_report(const FuzzReport& r) {
  std::ostringstream os;
  os << "traces: " << r.traces << '\n'
     << "cycles: " << r.cycles << '\n'
     << "attestations with exec set: " << r.non_vacuous << '\n'
     << "discrepancies: " << r.discrepancies << '\n';
  for (const auto& [name, n] : r.failures_by_property) os << "  " << name << ": " << n << " traces\n";
  for (const auto& d : r.details) {
    os << "  trace " << d.trace << " [" << d.scenario << "] fails " << d.property << " at position " << d.position
       << " (cycle " << d.cycle << ")\n";
  }
  return os.str();
}

}  // namespace pox::ltl
