// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/scenarios/program.hpp"

#include <cstdio>

namespace pox::scenarios {
namespace {

constexpr const char* kExitLabel = "__exit";

std::string hex(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", v);
  return buf;
}

}  // namespace

BuiltProgram build_program(std::string_view source, Address er_min, std::optional<Address> er_max,
                           const std::map<std::string, std::uint16_t>& defines, const machine::MemoryLayout& layout) {
  using machine::Opcode;
  constexpr auto kWord = machine::kInstructionBytes;
  if (er_min % kWord != 0) throw BuildError("ER must start on an instruction boundary");
  if (!layout.prog.contains(er_min)) throw BuildError("ER must start inside program memory");

  machine::Program prog;
  try {
    prog = machine::parse_program(source);
  } catch (const machine::AssemblyError& e) {
    throw BuildError(e.what());
  }
  for (const auto& [name, v] : defines) prog.constants.emplace(name, v);

  BuiltProgram out;
  for (auto& line : prog.lines) {
    if (line.ins && line.ins->op == Opcode::Halt) {
      line.ins = machine::SourceInstruction{Opcode::Jmp, 0, machine::kNoReg, {kExitLabel, 0}};
      ++out.exits_rewritten;
    }
  }
  const std::size_t body = prog.instruction_count();
  const std::uint32_t natural_max = er_min + (body + 1) * kWord - 1;
  const std::uint32_t last = er_max ? *er_max : natural_max;
  if (last > 0xFFFF || !layout.prog.contains(static_cast<Address>(last))) throw BuildError("ER must end inside program memory");
  if ((last + 1) % kWord != 0) throw BuildError("ER must end on an instruction boundary");
  if (natural_max > last) {
    throw BuildError("program needs " + std::to_string(natural_max - er_min + 1) + " bytes but ER holds " +
                     std::to_string(last - er_min + 1));
  }
  const std::size_t padding = (last - natural_max) / kWord;
  machine::SourceInstruction filler;
  filler.op = Opcode::Nop;
  for (std::size_t i = 0; i < padding; ++i) prog.lines.push_back({0, {}, filler});
  machine::SourceInstruction halt;
  halt.op = Opcode::Halt;
  prog.lines.push_back({0, {kExitLabel}, halt});

  const AddressRange er{er_min, static_cast<Address>(last)};
  machine::Assembly as;
  try {
    as = machine::assemble(prog, er_min, er);
  } catch (const machine::AssemblyError& e) {
    throw BuildError(e.what());
  }

  for (std::size_t off = 0; off < as.image.size(); off += kWord) {
    const auto ins = machine::decode(std::span<const std::uint8_t, kWord>(as.image.data() + off, kWord));
    if (!ins) continue;
    const bool transfer = ins->op == Opcode::Jmp || ins->op == Opcode::Jz || ins->op == Opcode::Call;
    if (transfer && !er.contains(ins->imm)) {
      throw BuildError("instruction at " + hex(er_min + off) + " transfers control to " + hex(ins->imm) +
                       " outside ER; leaving ER mid-run breaks the atomicity property");
    }
  }
  out.er = er;
  out.image = std::move(as.image);
  out.symbols = std::move(as.symbols);
  out.symbols["entry"] = er.min;
  out.symbols["exit"] = static_cast<Address>(er.max + 1 - kWord);
  return out;
}

}  // namespace pox::scenarios
