// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/ltl/properties.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace pox::ltl {
namespace {

NamedProperty make(std::string name, std::string_view body) { return {std::move(name), parse(body)}; }

const NamedProperty& response() { return monitor_property("response_protection"); }

// Copies positions [from, to] of the given columns into a fresh trace.
PropTrace slice(const PropTrace& t, std::size_t from, std::size_t to) {
  PropTrace out(t.names(), to - from + 1);
  for (std::size_t p = 0; p < t.names().size(); ++p) {
    for (std::size_t i = from; i <= to; ++i) {
      if (t.get(p, i)) out.set(p, i - from, true);
    }
  }
  return out;
}

std::optional<std::size_t> first_set(std::span<const Word> bits, std::size_t length) {
  for (std::size_t w = 0; w < bits.size(); ++w) {
    if (bits[w] == 0) continue;
    const std::size_t i = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits[w]));
    if (i < length) return i;
  }
  return std::nullopt;
}

}  // namespace

const std::vector<NamedProperty>& monitor_properties() {
  static const std::vector<NamedProperty> kProps{
      make("ephemeral_immutability", "(w_er | dma_er) -> !exec"),
      make("ephemeral_atomicity_exit", "(pc_in_er & !X pc_in_er) -> (pc_eq_ermax | !X exec)"),
      make("ephemeral_atomicity_entry", "(!pc_in_er & X pc_in_er) -> (X pc_eq_ermin | !X exec)"),
      make("ephemeral_atomicity_irq", "(pc_in_er & irq) -> !exec"),
      make("output_protection", "((!pc_in_er & w_or) | dma_or | (pc_in_er & dma_en)) -> !exec"),
      make("boundaries", "!bounds_valid -> !exec"),
      make("er_cr_disjointness", "!er_cr_disjoint -> !exec"),
      make("metadata_protection", "(w_meta | dma_meta) -> !exec"),
      make("response_protection", "(!exec & X exec) -> X pc_eq_ermin"),
      make("reset_protection", "reset -> !exec"),
  };
  return kProps;
}

const NamedProperty& monitor_property(const std::string& name) {
  const auto& all = monitor_properties();
  const auto it = std::find_if(all.begin(), all.end(), [&](const NamedProperty& p) { return p.name == name; });
  if (it == all.end()) throw std::out_of_range("unknown property '" + name + "'");
  return *it;
}

std::vector<NamedProperty> submodule_properties(monitor::SubmoduleId id) {
  using monitor::SubmoduleId;
  std::vector<NamedProperty> out;
  auto add = [&](const char* n) { out.push_back(monitor_property(n)); };
  switch (id) {
    case SubmoduleId::Immutability: add("ephemeral_immutability"); break;
    case SubmoduleId::Atomicity:
      add("ephemeral_atomicity_exit");
      add("ephemeral_atomicity_entry");
      add("ephemeral_atomicity_irq");
      break;
    case SubmoduleId::OutputProtection: add("output_protection"); break;
    case SubmoduleId::Boundaries: add("boundaries"); break;
    case SubmoduleId::ErCrDisjoint: add("er_cr_disjointness"); break;
    case SubmoduleId::MetadataFsm: add("metadata_protection"); break;
    case SubmoduleId::ResetGate: add("reset_protection"); break;
  }
  out.push_back(response());
  return out;
}

Formula execution_antecedent() {
  static const Formula kA = parse(
      "pc_eq_ermin & ((pc_in_er & !irq & !reset & !dma_en) U pc_eq_ermax)"
      " & ((!mod_er & !mod_meta & (pc_in_er | !mod_or)) U pc_eq_crmin)");
  return kA;
}

Formula attestation_with_exec() {
  static const Formula kPsi = parse("exec & pc_in_cr");
  return kPsi;
}

Formula execution_proof() { return B(execution_antecedent(), attestation_with_exec()); }

Verdict check_property(const NamedProperty& p, const PropTrace& trace) {
  Verdict v;
  v.name = p.name;
  v.formula = p.formula().to_string();
  const auto cols = trace.column_pointers();
  CompiledFormula body(p.body, trace.names());
  const auto bits = body.eval(cols, trace.length());
  for (std::size_t i = 0; i < trace.length(); ++i) {
    if (!test_bit(bits, i)) {
      v.holds = false;
      v.first_violation = i;
      v.violation_cycle = trace.cycle_at(i);
      break;
    }
  }
  if (p.body.op() == Op::Implies) {
    CompiledFormula trigger(p.body.lhs(), trace.names());
    v.vacuous = !first_set(trigger.eval(cols, trace.length()), trace.length());
  }
  return v;
}

Verdict check_execution_proof(const PropTrace& trace) {
  Verdict v;
  v.name = "execution_proof";
  v.formula = execution_proof().to_string();
  const auto cols = trace.column_pointers();
  CompiledFormula psi(attestation_with_exec(), trace.names());
  const auto j0 = first_set(psi.eval(cols, trace.length()), trace.length());
  if (!j0) {
    v.vacuous = true;
    return v;
  }
  // The antecedent only grows more true on longer traces, so the first
  // attestation cycle decides the whole formula.
  const PropTrace prefix = slice(trace, 0, *j0);
  CompiledFormula a(execution_antecedent(), prefix.names());
  const auto pcols = prefix.column_pointers();
  const auto held = first_set(a.eval(pcols, prefix.length()), prefix.length());
  if (!held || *held >= *j0) {
    v.holds = false;
    v.first_violation = *j0;
    v.violation_cycle = trace.cycle_at(*j0);
  }
  return v;
}

Verdict check_execution_windows(const PropTrace& trace) {
  Verdict v;
  v.name = "execution_proof_windows";
  v.formula = execution_proof().to_string();
  const auto cols = trace.column_pointers();
  CompiledFormula psi_f(attestation_with_exec(), trace.names());
  const auto psi = psi_f.eval(cols, trace.length());
  const auto entry_idx = trace.index_of("pc_eq_ermin");
  if (!entry_idx) throw std::invalid_argument("trace lacks pc_eq_ermin");
  CompiledFormula a(execution_antecedent(), trace.names());

  v.vacuous = true;
  std::optional<std::size_t> window;  // latest entry so far
  std::optional<std::size_t> judged;  // window already checked
  for (std::size_t j = 0; j < trace.length(); ++j) {
    if (trace.get(*entry_idx, j)) window = j;
    if (!test_bit(psi, j)) continue;
    v.vacuous = false;
    bool ok = false;
    if (window && window == judged) {
      ok = true;
    } else if (window) {
      const PropTrace w = slice(trace, *window, j);
      const auto wcols = w.column_pointers();
      ok = test_bit(a.eval(wcols, w.length()), 0);
      if (ok) judged = window;
    }
    if (!ok) {
      v.holds = false;
      v.first_violation = j;
      v.violation_cycle = trace.cycle_at(j);
      return v;
    }
  }
  return v;
}

bool CheckReport::ok() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.holds; });
}

CheckReport check_trace(const PropTrace& trace) {
  CheckReport r;
  r.length = trace.length();
  for (const auto& p : monitor_properties()) r.verdicts.push_back(check_property(p, trace));
  r.verdicts.push_back(check_execution_proof(trace));
  return r;
}

std::string format_report(const CheckReport& r) {
  std::ostringstream os;
  os << "trace length " << r.length << '\n';
  std::size_t width = 0;
  for (const auto& v : r.verdicts) width = std::max(width, v.name.size());
  for (const auto& v : r.verdicts) {
    os << (v.holds ? "PASS " : "FAIL ") << v.name << std::string(width - v.name.size() + 2, ' ');
    if (!v.holds) {
      os << "violated at position " << *v.first_violation << " (cycle " << *v.violation_cycle << ")";
    } else if (v.vacuous) {
      os << "vacuous";
    } else {
      os << "holds";
    }
    os << '\n';
  }
  os << (r.ok() ? "all properties hold" : "property violations found") << '\n';
  return os.str();
}

}  // namespace pox::ltl
