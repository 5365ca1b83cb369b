// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pox/machine/layout.hpp"
#include "pox/machine/machine.hpp"
#include "pox/protocol/device.hpp"

namespace pox::ltl {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t n) noexcept { return (n + kWordBits - 1) / kWordBits; }
inline bool test_bit(std::span<const Word> w, std::size_t i) noexcept { return (w[i / kWordBits] >> (i % kWordBits)) & 1U; }
inline void set_bit(std::span<Word> w, std::size_t i) noexcept { w[i / kWordBits] |= Word{1} << (i % kWordBits); }

// Boolean propositions over a finite trace, stored column-wise as bitsets.
class PropTrace {
 public:
  PropTrace() = default;
  PropTrace(std::vector<std::string> names, std::size_t length);

  std::size_t length() const noexcept { return length_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool get(std::size_t prop, std::size_t pos) const { return test_bit(columns_[prop], pos); }
  bool get(const std::string& name, std::size_t pos) const;
  void set(std::size_t prop, std::size_t pos, bool v);
  std::span<const Word> column(std::size_t prop) const { return columns_[prop]; }
  std::vector<const Word*> column_pointers() const;

  // Original machine cycle for each position; defaults to the position.
  std::uint64_t cycle_at(std::size_t pos) const { return cycles_.empty() ? pos : cycles_[pos]; }
  void set_cycles(std::vector<std::uint64_t> cycles);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Word>> columns_;
  std::vector<std::uint64_t> cycles_;
  std::size_t length_ = 0;
};

// Proposition vocabulary of monitored traces.
const std::vector<std::string>& standard_prop_names();

// Layout and bound history needed to interpret a raw signal trace.
struct TraceContext {
  machine::MemoryLayout layout;
  std::vector<protocol::BoundsChange> bounds;  // sorted by cycle; first entry covers the trace start
};

// Derives propositions from raw signals. Bounds in effect at a snapshot are
// the latest change at or before its cycle; the mod_* propositions mark any
// write that lands in the attested region, metadata or output.
PropTrace build_prop_trace(std::span<const machine::SignalSnapshot> trace, const TraceContext& ctx);

// Sidecar file stored next to a trace: "<trace>.meta".
std::filesystem::path sidecar_path(const std::filesystem::path& trace_path);
void write_trace_context(const std::filesystem::path& path, const TraceContext& ctx);
TraceContext read_trace_context(const std::filesystem::path& path);

}  // namespace pox::ltl
