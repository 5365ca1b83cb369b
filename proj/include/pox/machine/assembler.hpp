// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pox/machine/isa.hpp"

namespace pox::machine {

class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// symbol + offset, or a bare number when symbol is empty.
struct Operand {
  std::string symbol;
  std::int32_t offset = 0;
};

struct SourceInstruction {
  Opcode op = Opcode::Nop;
  std::uint8_t ra = 0;
  std::uint8_t rb = kNoReg;
  Operand imm;
};

struct SourceLine {
  std::size_t line_no = 0;
  std::vector<std::string> labels;
  std::optional<SourceInstruction> ins;
};

struct Program {
  std::vector<SourceLine> lines;
  std::map<std::string, std::uint16_t> constants;  // from .equ

  std::size_t instruction_count() const;
};

using SymbolTable = std::map<std::string, Address>;

struct Assembly {
  Address base = 0;
  Bytes image;
  SymbolTable symbols;  // labels, constants, plus "entry" and "exit"
};

// Syntax: one statement per line (or separated by " / "), labels end in ':',
// comments start with ';' or '#', ".equ NAME, value" defines a constant.
Program parse_program(std::string_view source);

// Two-pass assembly at `base`. When `limit` is given the image must fit in it.
Assembly assemble(const Program& program, Address base, std::optional<AddressRange> limit = {});
Assembly assemble(std::string_view source, Address base = 0xE000, std::optional<AddressRange> limit = {});

// Sidecar symbol map: "name=0xADDR" per line.
void write_symbol_map(std::ostream& os, const SymbolTable& symbols);
SymbolTable read_symbol_map(std::istream& is);

}  // namespace pox::machine
