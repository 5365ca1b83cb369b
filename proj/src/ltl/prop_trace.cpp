// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/ltl/prop_trace.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pox::ltl {

PropTrace::PropTrace(std::vector<std::string> names, std::size_t length)
    : names_(std::move(names)), columns_(names_.size(), std::vector<Word>(words_for(length), 0)), length_(length) {}

std::optional<std::size_t> PropTrace::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

bool PropTrace::get(const std::string& name, std::size_t pos) const {
  const auto i = index_of(name);
  if (!i) throw std::out_of_range("unknown proposition '" + name + "'");
  return get(*i, pos);
}

void PropTrace::set(std::size_t prop, std::size_t pos, bool v) {
  if (pos >= length_) throw std::out_of_range("position past end of trace");
  auto& w = columns_.at(prop)[pos / kWordBits];
  const Word m = Word{1} << (pos % kWordBits);
  w = v ? (w | m) : (w & ~m);
}

std::vector<const Word*> PropTrace::column_pointers() const {
  std::vector<const Word*> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.data());
  return out;
}

void PropTrace::set_cycles(std::vector<std::uint64_t> cycles) {
  if (!cycles.empty() && cycles.size() != length_) throw std::invalid_argument("cycle list does not match trace length");
  cycles_ = std::move(cycles);
}

const std::vector<std::string>& standard_prop_names() {
  static const std::vector<std::string> kNames{
      "pc_in_er", "pc_eq_ermin", "pc_eq_ermax", "pc_in_cr", "pc_eq_crmin", "irq",          "reset",
      "dma_en",   "w_er",        "dma_er",      "w_or",     "dma_or",      "w_meta",       "dma_meta",
      "bounds_valid", "er_cr_disjoint", "exec", "mod_er", "mod_or",     "mod_meta"};
  return kNames;
}

PropTrace build_prop_trace(std::span<const machine::SignalSnapshot> trace, const TraceContext& ctx) {
  if (!trace.empty() && (ctx.bounds.empty() || ctx.bounds.front().cycle > trace.front().cycle)) {
    throw std::invalid_argument("bound history does not cover the start of the trace");
  }
  PropTrace pt(standard_prop_names(), trace.size());
  std::vector<std::uint64_t> cycles;
  cycles.reserve(trace.size());
  const AddressRange cr = ctx.layout.cr;
  const AddressRange meta = ctx.layout.protected_metadata();
  std::size_t bi = 0;
  std::size_t col = 0;
  for (std::size_t pos = 0; pos < trace.size(); ++pos) {
    const auto& s = trace[pos];
    while (bi + 1 < ctx.bounds.size() && ctx.bounds[bi + 1].cycle <= s.cycle) ++bi;
    const auto& b = ctx.bounds[bi];
    const AddressRange er{b.er_min, b.er_max};
    const bool no_output = b.or_min == 0xFFFF && b.or_max == 0xFFFF;
    auto in_or = [&](Address a) { return !no_output && b.or_min <= a && a <= b.or_max; };
    auto in_er = [&](Address a) { return er.min <= a && a <= er.max; };

    const bool pc_in_er = in_er(s.pc);
    const bool w_er = s.w_en && in_er(s.d_addr);
    const bool dma_er = s.dma_en && in_er(s.dma_addr);
    const bool w_or = s.w_en && in_or(s.d_addr);
    const bool dma_or = s.dma_en && in_or(s.dma_addr);
    const bool w_meta = s.w_en && meta.contains(s.d_addr);
    const bool dma_meta = s.dma_en && meta.contains(s.dma_addr);
    const bool values[] = {
        pc_in_er,
        pc_in_er && s.pc == er.min,
        pc_in_er && static_cast<unsigned>(er.max) < static_cast<unsigned>(s.pc) + machine::kInstructionBytes,
        cr.contains(s.pc),
        s.pc == cr.min,
        s.irq,
        s.reset,
        s.dma_en,
        w_er,
        dma_er,
        w_or,
        dma_or,
        w_meta,
        dma_meta,
        b.er_min <= b.er_max && b.or_min <= b.or_max,
        er.max < cr.min || er.min > cr.max,
        s.exec,
        w_er || dma_er,
        w_or || dma_or,
        w_meta || dma_meta,
    };
    col = 0;
    for (bool v : values) pt.set(col++, pos, v);
    cycles.push_back(s.cycle);
  }
  pt.set_cycles(std::move(cycles));
  return pt;
}

std::filesystem::path sidecar_path(const std::filesystem::path& trace_path) {
  auto p = trace_path;
  p += ".meta";
  return p;
}

namespace {

nlohmann::json range_json(AddressRange r) { return nlohmann::json::array({r.min, r.max}); }

AddressRange range_from(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw std::runtime_error(std::string("layout field '") + key + "' must be [min, max]");
  return {v[0].get<Address>(), v[1].get<Address>()};
}

}  // namespace

void write_trace_context(const std::filesystem::path& path, const TraceContext& ctx) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  const auto& l = ctx.layout;
  nlohmann::json layout = {{"cr", range_json(l.cr)},     {"kr", range_json(l.kr)},     {"mr", range_json(l.mr)},
                           {"xs", range_json(l.xs)},     {"metadata", range_json(l.metadata)},
                           {"prog", range_json(l.prog)}, {"data", range_json(l.data)}, {"gpio", range_json(l.gpio)},
                           {"runtime_pc", l.runtime_pc}};
  os << nlohmann::json{{"layout", layout}}.dump() << '\n';
  for (const auto& b : ctx.bounds) {
    os << nlohmann::json{{"cycle", b.cycle},   {"er_min", b.er_min}, {"er_max", b.er_max},
                         {"or_min", b.or_min}, {"or_max", b.or_max}}
              .dump()
       << '\n';
  }
}

TraceContext read_trace_context(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  TraceContext ctx;
  std::string line;
  bool have_layout = false;
  std::size_t n = 0;
  try {
    while (std::getline(is, line)) {
      ++n;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto j = nlohmann::json::parse(line);
      if (!have_layout) {
        const auto& l = j.at("layout");
        auto& out = ctx.layout;
        out.cr = range_from(l, "cr");
        out.kr = range_from(l, "kr");
        out.mr = range_from(l, "mr");
        out.xs = range_from(l, "xs");
        out.metadata = range_from(l, "metadata");
        out.prog = range_from(l, "prog");
        out.data = range_from(l, "data");
        out.gpio = range_from(l, "gpio");
        out.runtime_pc = l.at("runtime_pc").get<Address>();
        out.validate();
        have_layout = true;
        continue;
      }
      protocol::BoundsChange b;
      b.cycle = j.at("cycle").get<std::uint64_t>();
      b.er_min = j.at("er_min").get<Address>();
      b.er_max = j.at("er_max").get<Address>();
      b.or_min = j.at("or_min").get<Address>();
      b.or_max = j.at("or_max").get<Address>();
      if (!ctx.bounds.empty() && b.cycle <= ctx.bounds.back().cycle) {
        throw std::runtime_error("bound changes must have increasing cycles");
      }
      ctx.bounds.push_back(b);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + " line " + std::to_string(n) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + " line " + std::to_string(n) + ": " + e.what());
  }
  if (!have_layout) throw std::runtime_error(path.string() + ": missing layout header");
  return ctx;
}

}  // namespace pox::ltl
