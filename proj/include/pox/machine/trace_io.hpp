// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pox/machine/machine.hpp"

namespace pox::machine {

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// JSON Lines, one object per cycle with the keys
// cycle, pc, r_en, w_en, d_addr, dma_en, dma_addr, irq, reset, exec.
std::string to_json_line(const SignalSnapshot& s);
void write_trace(std::ostream& os, const Trace& trace);
Trace read_trace(std::istream& is);
SignalSnapshot parse_json_line(const std::string& line, std::size_t line_no);

}  // namespace pox::machine
