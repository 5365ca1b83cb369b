// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pox/machine/assembler.hpp"
#include "pox/machine/layout.hpp"

namespace pox::scenarios {

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuiltProgram {
  AddressRange er;
  Bytes image;  // exactly er.size() bytes
  machine::SymbolTable symbols;
  std::size_t exits_rewritten = 0;
};

// Lays out `source` as a single-entry, single-exit region starting at er_min:
// every HALT becomes a jump to one HALT in the last word of the region, and
// NOP padding fills the gap when er_max is given. Control transfers that
// leave the region are refused. `defines` adds assembler constants.
BuiltProgram build_program(std::string_view source, Address er_min, std::optional<Address> er_max = std::nullopt,
                           const std::map<std::string, std::uint16_t>& defines = {},
                           const machine::MemoryLayout& layout = {});

}  // namespace pox::scenarios
