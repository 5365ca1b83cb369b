// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include <sstream>
#include <stdexcept>

#include "pox/monitor/monitor.hpp"

namespace pox::monitor {
namespace {

const char* table_text(SubmoduleId id) {
  switch (id) {
    case SubmoduleId::Immutability:
      return R"(submodule immutability
inputs pc_eq_ermin w_er dma_er
states NotExec Run
initial NotExec
NotExec | pc_eq_ermin & !w_er & !dma_er | Run | 1
NotExec | true | NotExec | 0
Run | !w_er & !dma_er | Run | 1
Run | true | NotExec | 0
)";
    case SubmoduleId::Atomicity:
      return R"(submodule atomicity
inputs pc_in_er pc_eq_ermin pc_eq_ermax irq
states NotExec notER fstER midER lastER
initial NotExec
NotExec | pc_eq_ermin & pc_eq_ermax & !irq | lastER | 1
NotExec | pc_eq_ermin & !irq | fstER | 1
NotExec | true | NotExec | 0
notER | !pc_in_er | notER | 1
notER | pc_eq_ermin & pc_eq_ermax & !irq | lastER | 1
notER | pc_eq_ermin & !irq | fstER | 1
notER | true | NotExec | 0
fstER | pc_eq_ermin & !pc_eq_ermax & !irq | fstER | 1
fstER | pc_in_er & !pc_eq_ermin & !pc_eq_ermax & !irq | midER | 1
fstER | !pc_eq_ermin & pc_eq_ermax & !irq | lastER | 1
fstER | true | NotExec | 0
midER | pc_in_er & !pc_eq_ermin & !pc_eq_ermax & !irq | midER | 1
midER | !pc_eq_ermin & pc_eq_ermax & !irq | lastER | 1
midER | true | NotExec | 0
lastER | pc_eq_ermax & !irq | lastER | 1
lastER | !pc_in_er & !irq | notER | 1
lastER | true | NotExec | 0
)";
    case SubmoduleId::OutputProtection:
      return R"(submodule output_protection
inputs pc_in_er pc_eq_ermin w_or dma_or dma_en
states NotExec Run
initial NotExec
NotExec | pc_eq_ermin & !dma_or & !dma_en | Run | 1
NotExec | true | NotExec | 0
Run | pc_in_er & !dma_or & !dma_en | Run | 1
Run | !pc_in_er & !w_or & !dma_or | Run | 1
Run | true | NotExec | 0
)";
    case SubmoduleId::Boundaries:
      return R"(submodule boundaries
inputs pc_eq_ermin bounds_valid
states NotExec Run
initial NotExec
NotExec | pc_eq_ermin & bounds_valid | Run | 1
NotExec | true | NotExec | 0
Run | bounds_valid | Run | 1
Run | true | NotExec | 0
)";
    case SubmoduleId::ErCrDisjoint:
      return R"(submodule er_cr_disjoint
inputs pc_eq_ermin er_cr_disjoint
states NotExec Run
initial NotExec
NotExec | pc_eq_ermin & er_cr_disjoint | Run | 1
NotExec | true | NotExec | 0
Run | er_cr_disjoint | Run | 1
Run | true | NotExec | 0
)";
    case SubmoduleId::MetadataFsm:
      return R"(submodule metadata
inputs pc_eq_ermin w_meta dma_meta
states NotExec Run
initial NotExec
NotExec | pc_eq_ermin & !w_meta & !dma_meta | Run | 1
NotExec | true | NotExec | 0
Run | !w_meta & !dma_meta | Run | 1
Run | true | NotExec | 0
)";
    case SubmoduleId::ResetGate:
      return R"(submodule reset_gate
inputs pc_eq_ermin reset
states NotExec Run
initial NotExec
NotExec | pc_eq_ermin & !reset | Run | 1
NotExec | true | NotExec | 0
Run | !reset | Run | 1
Run | true | NotExec | 0
)";
  }
  throw std::invalid_argument("unknown sub-module id");
}

}  // namespace

SubmoduleTable standard_table(SubmoduleId id) {
  std::istringstream is(table_text(id));
  return read_table(is);
}

std::vector<SubmoduleTable> standard_tables() {
  std::vector<SubmoduleTable> out;
  for (auto id : kAllSubmodules) out.push_back(standard_table(id));
  return out;
}

std::string submodule_name(SubmoduleId id) { return standard_table(id).name; }

Mutation standard_mutation(SubmoduleId id) {
  const SubmoduleTable t = standard_table(id);
  auto row = [&](std::string_view from, std::size_t nth) {
    const auto s = t.state_index(from);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (t.rows[i].from == s && nth-- == 0) return i;
    }
    throw std::logic_error("mutation row not found");
  };
  auto keep_running = [&](std::size_t r, std::string_view desc) {
    Transition tr = t.rows[r];
    tr.to = tr.from;
    tr.exec = true;
    return Mutation{std::string(desc), r, tr};
  };
  switch (id) {
    case SubmoduleId::Immutability:
      return keep_running(row("Run", 1), "violation edge Run -> NotExec redirected to Run");
    case SubmoduleId::Atomicity:
      return keep_running(row("midER", 2), "violation edge midER -> NotExec redirected to midER");
    case SubmoduleId::OutputProtection:
      return keep_running(row("Run", 2), "violation edge Run -> NotExec redirected to Run");
    case SubmoduleId::Boundaries:
      return keep_running(row("Run", 1), "violation edge Run -> NotExec redirected to Run");
    case SubmoduleId::ErCrDisjoint:
      return keep_running(row("Run", 1), "violation edge Run -> NotExec redirected to Run");
    case SubmoduleId::MetadataFsm: {
      const std::size_t r = row("NotExec", 0);
      Transition tr = t.rows[r];
      tr.guard = parse_guard(t, "pc_eq_ermin");
      return Mutation{"re-entry guard drops !w_meta & !dma_meta", r, tr};
    }
    case SubmoduleId::ResetGate:
      return keep_running(row("Run", 1), "violation edge Run -> NotExec redirected to Run");
  }
  throw std::invalid_argument("unknown sub-module id");
}

SubmoduleTable apply(SubmoduleTable table, const Mutation& m) {
  table.rows.at(m.row) = m.replacement;
  table.validate();
  return table;
}

}  // namespace pox::monitor
