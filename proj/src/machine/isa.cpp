// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/machine/isa.hpp"

#include <array>
#include <cstdio>

namespace pox::machine {
namespace {

enum class Form { None, RegImm, RegMem, RegRegOrImm, Target, RegTarget };

Form form_of(Opcode op) {
  switch (op) {
    case Opcode::Nop:
    case Opcode::Ret:
    case Opcode::Reti:
    case Opcode::Halt:
      return Form::None;
    case Opcode::Movi:
      return Form::RegImm;
    case Opcode::Load:
    case Opcode::Store:
      return Form::RegMem;
    case Opcode::Add:
    case Opcode::Sub:
      return Form::RegRegOrImm;
    case Opcode::Jmp:
    case Opcode::Call:
      return Form::Target;
    case Opcode::Jz:
      return Form::RegTarget;
  }
  return Form::None;
}

constexpr std::array<std::string_view, 12> kMnemonics{
    "NOP", "MOVI", "LOAD", "STORE", "ADD", "SUB", "JMP", "JZ", "CALL", "RET", "RETI", "HALT"};

bool valid_reg(std::uint8_t r) { return r <= kSp; }

}  // namespace

std::string_view mnemonic(Opcode op) { return kMnemonics[static_cast<std::size_t>(op) - 1]; }

std::optional<Opcode> opcode_from_mnemonic(std::string_view name) {
  for (std::size_t i = 0; i < kMnemonics.size(); ++i) {
    if (kMnemonics[i] == name) return static_cast<Opcode>(i + 1);
  }
  return std::nullopt;
}

std::string register_name(std::uint8_t index) {
  return index == kSp ? "sp" : "r" + std::to_string(index);
}

Encoded encode(const Instruction& i) {
  return {static_cast<std::uint8_t>(i.op), static_cast<std::uint8_t>((i.ra << 4) | (i.rb & 0x0F)),
          static_cast<std::uint8_t>(i.imm & 0xFF), static_cast<std::uint8_t>(i.imm >> 8)};
}

std::optional<Instruction> decode(std::span<const std::uint8_t, kInstructionBytes> b) {
  if (b[0] < static_cast<std::uint8_t>(Opcode::Nop) || b[0] > static_cast<std::uint8_t>(Opcode::Halt)) {
    return std::nullopt;
  }
  Instruction i;
  i.op = static_cast<Opcode>(b[0]);
  i.ra = b[1] >> 4;
  i.rb = b[1] & 0x0F;
  i.imm = load_le16(&b[2]);
  bool ok = false;
  switch (form_of(i.op)) {
    case Form::None:
      ok = i.ra == 0 && i.rb == kNoReg && i.imm == 0;
      break;
    case Form::RegImm:
      ok = valid_reg(i.ra) && i.rb == kNoReg;
      break;
    case Form::RegMem:
      ok = valid_reg(i.ra) && (i.rb == kNoReg || valid_reg(i.rb));
      break;
    case Form::RegRegOrImm:
      ok = valid_reg(i.ra) && (i.rb == kNoReg || (valid_reg(i.rb) && i.imm == 0));
      break;
    case Form::Target:
      ok = i.ra == 0 && i.rb == kNoReg;
      break;
    case Form::RegTarget:
      ok = valid_reg(i.ra) && i.rb == kNoReg;
      break;
  }
  if (!ok) return std::nullopt;
  return i;
}

std::string disassemble(const Instruction& i) {
  std::string out(mnemonic(i.op));
  const std::string ra = register_name(i.ra);
  switch (form_of(i.op)) {
    case Form::None:
      break;
    case Form::RegImm:
      out += " " + ra + ", " + hex16(i.imm);
      break;
    case Form::RegMem:
      if (i.rb == kNoReg) {
        out += " " + ra + ", " + hex16(i.imm);
      } else {
        out += " " + ra + ", [" + register_name(i.rb);
        if (i.imm != 0) out += "+" + hex16(i.imm);
        out += "]";
      }
      break;
    case Form::RegRegOrImm:
      out += " " + ra + ", " + (i.rb == kNoReg ? hex16(i.imm) : register_name(i.rb));
      break;
    case Form::Target:
      out += " " + hex16(i.imm);
      break;
    case Form::RegTarget:
      out += " " + ra + ", " + hex16(i.imm);
      break;
  }
  return out;
}

std::string disassemble(std::span<const std::uint8_t> image) {
  std::string out;
  for (std::size_t off = 0; off < image.size(); off += kInstructionBytes) {
    if (!out.empty()) out += '\n';
    if (off + kInstructionBytes > image.size()) {
      out += ".byte";
      for (std::size_t k = off; k < image.size(); ++k) {
        char buf[8];
        std::snprintf(buf, sizeof buf, " 0x%02X", static_cast<unsigned>(image[k]));
        out += buf;
      }
      break;
    }
    auto word = image.subspan(off).first<kInstructionBytes>();
    if (auto ins = decode(word)) {
      out += disassemble(*ins);
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, ".word 0x%02X%02X%02X%02X", static_cast<unsigned>(word[0]),
                    static_cast<unsigned>(word[1]), static_cast<unsigned>(word[2]),
                    static_cast<unsigned>(word[3]));
      out += buf;
    }
  }
  return out;
}

namespace ins {
Instruction nop() { return {Opcode::Nop, 0, kNoReg, 0}; }
Instruction movi(std::uint8_t ra, std::uint16_t imm) { return {Opcode::Movi, ra, kNoReg, imm}; }
Instruction load(std::uint8_t ra, Address addr) { return {Opcode::Load, ra, kNoReg, addr}; }
Instruction load_indirect(std::uint8_t ra, std::uint8_t rb, std::uint16_t offset) {
  return {Opcode::Load, ra, rb, offset};
}
Instruction store(std::uint8_t ra, Address addr) { return {Opcode::Store, ra, kNoReg, addr}; }
Instruction store_indirect(std::uint8_t ra, std::uint8_t rb, std::uint16_t offset) {
  return {Opcode::Store, ra, rb, offset};
}
Instruction add(std::uint8_t ra, std::uint8_t rb) { return {Opcode::Add, ra, rb, 0}; }
Instruction addi(std::uint8_t ra, std::uint16_t imm) { return {Opcode::Add, ra, kNoReg, imm}; }
Instruction sub(std::uint8_t ra, std::uint8_t rb) { return {Opcode::Sub, ra, rb, 0}; }
Instruction subi(std::uint8_t ra, std::uint16_t imm) { return {Opcode::Sub, ra, kNoReg, imm}; }
Instruction jmp(Address target) { return {Opcode::Jmp, 0, kNoReg, target}; }
Instruction jz(std::uint8_t ra, Address target) { return {Opcode::Jz, ra, kNoReg, target}; }
Instruction call(Address target) { return {Opcode::Call, 0, kNoReg, target}; }
Instruction ret() { return {Opcode::Ret, 0, kNoReg, 0}; }
Instruction reti() { return {Opcode::Reti, 0, kNoReg, 0}; }
Instruction halt() { return {Opcode::Halt, 0, kNoReg, 0}; }
}  // namespace ins

}  // namespace pox::machine
