// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/machine/trace_io.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <string_view>

#include <json.hpp>

namespace pox::machine {
namespace {

constexpr std::array<std::string_view, 10> kKeys{"cycle", "pc",     "r_en", "w_en",  "d_addr",
                                                 "dma_en", "dma_addr", "irq", "reset", "exec"};

std::uint64_t field(const nlohmann::json& j, std::string_view key, std::uint64_t max, std::size_t line) {
  const auto& v = j.at(std::string(key));
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw TraceParseError(line, "field '" + std::string(key) + "' must be an unsigned integer");
  }
  const auto x = v.get<std::uint64_t>();
  if (x > max) throw TraceParseError(line, "field '" + std::string(key) + "' out of range");
  return x;
}

}  // namespace

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}

std::string to_json_line(const SignalSnapshot& s) {
  std::string out;
  out.reserve(128);
  auto num = [&](std::string_view k, std::uint64_t v, bool last = false) {
    out += '"';
    out += k;
    out += "\":";
    out += std::to_string(v);
    if (!last) out += ',';
  };
  out += '{';
  num("cycle", s.cycle);
  num("pc", s.pc);
  num("r_en", s.r_en);
  num("w_en", s.w_en);
  num("d_addr", s.d_addr);
  num("dma_en", s.dma_en);
  num("dma_addr", s.dma_addr);
  num("irq", s.irq);
  num("reset", s.reset);
  num("exec", s.exec, true);
  out += '}';
  return out;
}

void write_trace(std::ostream& os, const Trace& trace) {
  for (const auto& s : trace) os << to_json_line(s) << '\n';
}

SignalSnapshot parse_json_line(const std::string& line, std::size_t n) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw TraceParseError(n, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw TraceParseError(n, "expected a JSON object");
  if (j.size() != kKeys.size()) throw TraceParseError(n, "expected exactly 10 keys");
  for (auto k : kKeys) {
    if (!j.contains(std::string(k))) throw TraceParseError(n, "missing key '" + std::string(k) + "'");
  }
  SignalSnapshot s;
  s.cycle = field(j, "cycle", UINT64_MAX, n);
  s.pc = static_cast<Address>(field(j, "pc", 0xFFFF, n));
  s.r_en = field(j, "r_en", 1, n) != 0;
  s.w_en = field(j, "w_en", 1, n) != 0;
  s.d_addr = static_cast<Address>(field(j, "d_addr", 0xFFFF, n));
  s.dma_en = field(j, "dma_en", 1, n) != 0;
  s.dma_addr = static_cast<Address>(field(j, "dma_addr", 0xFFFF, n));
  s.irq = field(j, "irq", 1, n) != 0;
  s.reset = field(j, "reset", 1, n) != 0;
  s.exec = field(j, "exec", 1, n) != 0;
  return s;
}

Trace read_trace(std::istream& is) {
  Trace out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_json_line(line, n));
    if (out.size() > 1 && out.back().cycle != out[out.size() - 2].cycle + 1) {
      throw TraceParseError(n, "cycle numbers must increase by 1");
    }
  }
  return out;
}

}  // namespace pox::machine
