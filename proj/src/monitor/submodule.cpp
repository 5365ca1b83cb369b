// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/monitor/submodule.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace pox::monitor {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) return out;
    s = s.substr(p + 1);
  }
}

}  // namespace

Letter SubmoduleTable::letter_of(const AbstractInput& in) const noexcept {
  Letter l = 0;
  for (std::size_t j = 0; j < inputs.size(); ++j) l |= static_cast<Letter>(in[inputs[j]]) << j;
  return l;
}

AbstractInput SubmoduleTable::input_of(Letter l) const noexcept {
  AbstractInput in;
  for (std::size_t j = 0; j < inputs.size(); ++j) in.set(inputs[j], (l >> j) & 1u);
  return in;
}

std::uint8_t SubmoduleTable::state_index(std::string_view s) const {
  auto it = std::find(states.begin(), states.end(), s);
  if (it == states.end()) throw TableError(name + ": unknown state '" + std::string(s) + "'");
  return static_cast<std::uint8_t>(it - states.begin());
}

void SubmoduleTable::validate() const {
  if (states.empty() || states.size() > 32) throw TableError(name + ": bad state count");
  if (inputs.size() > 8) throw TableError(name + ": too many inputs");
  if (initial >= states.size()) throw TableError(name + ": bad initial state");
  for (const auto& r : rows) {
    if (r.from >= states.size() || r.to >= states.size()) throw TableError(name + ": row references unknown state");
    if (r.exec == is_not_exec(r.to)) {
      throw TableError(name + ": row " + states[r.from] + " -> " + states[r.to] + " has inconsistent exec bit");
    }
    if ((r.guard.value & ~r.guard.care) != 0) throw TableError(name + ": malformed guard");
  }
  for (std::uint8_t s = 0; s < states.size(); ++s) {
    for (Letter l = 0; l < letter_count(); ++l) {
      bool found = std::any_of(rows.begin(), rows.end(), [&](const Transition& r) { return r.from == s && r.guard.matches(l); });
      if (!found) throw TableError(name + ": state " + states[s] + " has no transition for some input");
    }
  }
}

Step tick_submodule(const SubmoduleTable& t, std::uint8_t state, Letter l) {
  for (const auto& r : t.rows) {
    if (r.from == state && r.guard.matches(l)) return {r.to, r.exec};
  }
  throw TableError(t.name + ": no transition from " + t.states.at(state));
}

Step tick_submodule(const SubmoduleTable& t, std::uint8_t state, const AbstractInput& in) {
  return tick_submodule(t, state, t.letter_of(in));
}

CompiledSubmodule::CompiledSubmodule(SubmoduleTable table)
    : table_(std::move(table)), width_(static_cast<unsigned>(table_.inputs.size())) {
  table_.validate();
  steps_.resize(table_.states.size() << width_);
  for (std::uint8_t s = 0; s < table_.states.size(); ++s) {
    for (Letter l = 0; l < table_.letter_count(); ++l) steps_[(s << width_) | l] = tick_submodule(table_, s, l);
  }
}

std::string guard_to_string(const SubmoduleTable& t, const Guard& g) {
  if (g.care == 0) return "true";
  std::string out;
  for (std::size_t j = 0; j < t.inputs.size(); ++j) {
    if (!((g.care >> j) & 1u)) continue;
    if (!out.empty()) out += " & ";
    if (!((g.value >> j) & 1u)) out += '!';
    out += input_bit_name(t.inputs[j]);
  }
  return out;
}

Guard parse_guard(const SubmoduleTable& t, std::string_view text) {
  Guard g;
  text = trim(text);
  if (text == "true") return g;
  for (auto lit : split(text, '&')) {
    bool neg = !lit.empty() && lit.front() == '!';
    if (neg) lit = trim(lit.substr(1));
    auto bit = input_bit_from_name(lit);
    auto it = bit ? std::find(t.inputs.begin(), t.inputs.end(), *bit) : t.inputs.end();
    if (it == t.inputs.end()) throw TableError(t.name + ": guard uses unknown input '" + std::string(lit) + "'");
    const Letter m = Letter{1} << (it - t.inputs.begin());
    if (g.care & m) throw TableError(t.name + ": input repeated in guard");
    g.care |= m;
    if (!neg) g.value |= m;
  }
  return g;
}

void write_table(std::ostream& os, const SubmoduleTable& t) {
  os << "submodule " << t.name << '\n' << "inputs";
  for (auto b : t.inputs) os << ' ' << input_bit_name(b);
  os << '\n' << "states";
  for (const auto& s : t.states) os << ' ' << s;
  os << '\n' << "initial " << t.states[t.initial] << '\n';
  for (const auto& r : t.rows) {
    os << t.states[r.from] << " | " << guard_to_string(t, r.guard) << " | " << t.states[r.to] << " | "
       << (r.exec ? 1 : 0) << '\n';
  }
}

SubmoduleTable read_table(std::istream& is) {
  SubmoduleTable t;
  std::string line;
  std::size_t n = 0;
  std::string initial;
  auto fail = [&](const std::string& m) { throw TableError("table line " + std::to_string(n) + ": " + m); };
  while (std::getline(is, line)) {
    ++n;
    std::string_view v = trim(line);
    if (auto c = v.find('#'); c != std::string_view::npos) v = trim(v.substr(0, c));
    if (v.empty()) continue;
    if (v.find('|') == std::string_view::npos) {
      auto w = words(v);
      if (w[0] == "submodule" && w.size() == 2) {
        t.name = w[1];
      } else if (w[0] == "inputs") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          auto b = input_bit_from_name(w[i]);
          if (!b) fail("unknown input '" + w[i] + "'");
          t.inputs.push_back(*b);
        }
      } else if (w[0] == "states") {
        t.states.assign(w.begin() + 1, w.end());
      } else if (w[0] == "initial" && w.size() == 2) {
        initial = w[1];
      } else {
        fail("unrecognized directive");
      }
      continue;
    }
    auto cols = split(v, '|');
    if (cols.size() != 4) fail("expected 'state | guard | next | exec'");
    if (cols[3] != "0" && cols[3] != "1") fail("exec bit must be 0 or 1");
    try {
      t.rows.push_back({t.state_index(cols[0]), parse_guard(t, cols[1]), t.state_index(cols[2]), cols[3] == "1"});
    } catch (const TableError& e) {
      fail(e.what());
    }
  }
  if (t.name.empty() || t.states.empty()) throw TableError("table is missing its header");
  t.initial = initial.empty() ? 0 : t.state_index(initial);
  t.validate();
  return t;
}

}  // namespace pox::monitor
