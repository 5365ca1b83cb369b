// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pox/machine/types.hpp"

namespace pox::machine {

enum class Opcode : std::uint8_t {
  Nop = 0x01,
  Movi,
  Load,
  Store,
  Add,
  Sub,
  Jmp,
  Jz,
  Call,
  Ret,
  Reti,
  Halt,
};

inline constexpr std::size_t kInstructionBytes = 4;
inline constexpr std::uint8_t kRegisterCount = 4;
inline constexpr std::uint8_t kSp = 4;        // register index of the stack pointer
inline constexpr std::uint8_t kNoReg = 0x0F;  // "use the immediate" in the rb slot

// Byte layout: [opcode][ra<<4 | rb][imm lo][imm hi].
//   MOVI ra, imm          ADD/SUB ra, rb | ra, imm
//   LOAD ra, addr | [rb+imm]     STORE ra, addr | [rb+imm]   (byte accesses)
//   JMP addr   JZ ra, addr   CALL addr   RET   RETI   HALT   NOP
struct Instruction {
  Opcode op = Opcode::Nop;
  std::uint8_t ra = 0;
  std::uint8_t rb = kNoReg;
  std::uint16_t imm = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

using Encoded = std::array<std::uint8_t, kInstructionBytes>;

Encoded encode(const Instruction& ins);
// Only canonical encodings decode; anything else is an invalid instruction.
std::optional<Instruction> decode(std::span<const std::uint8_t, kInstructionBytes> bytes);

std::string_view mnemonic(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view name);
std::string register_name(std::uint8_t index);

std::string disassemble(const Instruction& ins);
// One line per 4-byte word; undecodable words print as ".word".
std::string disassemble(std::span<const std::uint8_t> image);

// Convenience builders used by scenario code and tests.
namespace ins {
Instruction nop();
Instruction movi(std::uint8_t ra, std::uint16_t imm);
Instruction load(std::uint8_t ra, Address addr);
Instruction load_indirect(std::uint8_t ra, std::uint8_t rb, std::uint16_t offset = 0);
Instruction store(std::uint8_t ra, Address addr);
Instruction store_indirect(std::uint8_t ra, std::uint8_t rb, std::uint16_t offset = 0);
Instruction add(std::uint8_t ra, std::uint8_t rb);
Instruction addi(std::uint8_t ra, std::uint16_t imm);
Instruction sub(std::uint8_t ra, std::uint8_t rb);
Instruction subi(std::uint8_t ra, std::uint16_t imm);
Instruction jmp(Address target);
Instruction jz(std::uint8_t ra, Address target);
Instruction call(Address target);
Instruction ret();
Instruction reti();
Instruction halt();
}  // namespace ins

}  // namespace pox::machine
