// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/ltl/exhaustive.hpp"

#include <array>
#include <chrono>
#include <sstream>

namespace pox::ltl {
namespace {

using monitor::AbstractInput;
using monitor::InputBit;
using monitor::kInputBitCount;

constexpr std::size_t kExecColumn = kInputBitCount;
constexpr std::size_t kColumns = kInputBitCount + 1;

const std::vector<std::string>& column_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> n;
    for (std::size_t i = 0; i < kInputBitCount; ++i) n.emplace_back(monitor::input_bit_name(static_cast<InputBit>(i)));
    n.emplace_back("exec");
    return n;
  }();
  return kNames;
}

Word low_mask(std::size_t n) { return n >= kWordBits ? ~Word{0} : (Word{1} << n) - 1; }

class Search {
 public:
  Search(const monitor::SubmoduleTable& table, const std::vector<NamedProperty>& props, const ExhaustiveOptions& opts)
      : sub_(table), opts_(opts), alphabet_(pruned_alphabet(table)) {
    for (const auto& p : props) {
      bodies_.emplace_back(p.body, column_names());
      verdict_.properties.push_back(p.name);
    }
    verdict_.submodule = table.name;
    verdict_.alphabet_size = alphabet_.size();
    for (const auto& a : alphabet_) letters_.push_back(table.letter_of(a));
  }

  SubmoduleVerdict run() {
    if (opts_.depth > kWordBits) throw std::invalid_argument("depth exceeds 64");
    path_.resize(opts_.depth);
    visit(0, sub_.table().initial);
    return std::move(verdict_);
  }

 private:
  void visit(std::size_t k, std::uint8_t state) {
    if (k == opts_.depth) return;
    const Word bit = Word{1} << k;
    const Word len_mask = low_mask(k + 1);
    for (std::size_t li = 0; li < alphabet_.size(); ++li) {
      const AbstractInput in = alphabet_[li];
      const monitor::Step st = sub_.step(state, letters_[li]);
      for (std::size_t c = 0; c < kInputBitCount; ++c) {
        cols_[c] = (cols_[c] & ~bit) | (((in.bits >> c) & 1U) ? bit : 0);
      }
      cols_[kExecColumn] = (cols_[kExecColumn] & ~bit) | (st.exec ? bit : 0);
      path_[k] = li;
      ++verdict_.sequences;
      for (std::size_t f = 0; f < bodies_.size(); ++f) {
        const Word holds = bodies_[f].eval_word(cols_, k + 1);
        if (holds != len_mask) {
          record(f, k + 1, static_cast<std::size_t>(std::countr_one(holds)));
          break;
        }
      }
      visit(k + 1, st.next);
    }
  }

  void record(std::size_t f, std::size_t length, std::size_t position) {
    ++verdict_.counterexamples;
    if (verdict_.samples.size() >= opts_.max_samples) return;
    Counterexample c;
    c.submodule = verdict_.submodule;
    c.property = verdict_.properties[f];
    for (std::size_t i = 0; i < length; ++i) c.inputs.push_back(alphabet_[path_[i]]);
    for (std::size_t i = 0; i < length; ++i) c.exec.push_back((cols_[kExecColumn] >> i) & 1U);
    c.position = position;
    verdict_.samples.push_back(std::move(c));
  }

  monitor::CompiledSubmodule sub_;
  ExhaustiveOptions opts_;
  std::vector<AbstractInput> alphabet_;
  std::vector<monitor::Letter> letters_;
  std::vector<CompiledFormula> bodies_;
  std::array<Word, kColumns> cols_{};
  std::vector<std::size_t> path_;
  SubmoduleVerdict verdict_;
};

}  // namespace

std::vector<AbstractInput> pruned_alphabet(const monitor::SubmoduleTable& table) {
  // Bits the table cannot see are free; a letter survives when some setting
  // of them gives a consistent input, and the first such setting is kept.
  std::uint32_t own = 0;
  for (auto b : table.inputs) own |= 1U << static_cast<unsigned>(b);
  std::vector<std::uint32_t> free_bits;
  for (std::uint32_t b = 0; b < kInputBitCount; ++b) {
    if (!(own & (1U << b))) free_bits.push_back(b);
  }
  std::vector<AbstractInput> out;
  for (monitor::Letter l = 0; l < table.letter_count(); ++l) {
    const AbstractInput base = table.input_of(l);
    for (std::uint32_t fill = 0; fill < (1U << free_bits.size()); ++fill) {
      AbstractInput in = base;
      for (std::size_t k = 0; k < free_bits.size(); ++k) {
        if (fill & (1U << k)) in.bits |= 1U << free_bits[k];
      }
      if (monitor::structurally_consistent(in)) {
        out.push_back(in);
        break;
      }
    }
  }
  return out;
}

std::uint64_t sequence_count(std::uint64_t alphabet_size, std::size_t depth) {
  std::uint64_t total = 0;
  std::uint64_t layer = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    if (alphabet_size != 0 && layer > UINT64_MAX / alphabet_size) return UINT64_MAX;
    layer *= alphabet_size;
    if (total > UINT64_MAX - layer) return UINT64_MAX;
    total += layer;
  }
  return total;
}

BudgetExceeded::BudgetExceeded(std::uint64_t estimate, std::uint64_t budget)
    : std::runtime_error("refusing exhaustive check: " + std::to_string(estimate) + " input words exceed the budget of " +
                         std::to_string(budget)),
      estimate_(estimate) {}

std::uint64_t ExhaustiveReport::sequences() const noexcept {
  std::uint64_t n = 0;
  for (const auto& s : submodules) n += s.sequences;
  return n;
}

std::uint64_t ExhaustiveReport::counterexamples() const noexcept {
  std::uint64_t n = 0;
  for (const auto& s : submodules) n += s.counterexamples;
  return n;
}

SubmoduleVerdict check_submodule(const monitor::SubmoduleTable& table, const std::vector<NamedProperty>& properties,
                                 const ExhaustiveOptions& opts) {
  return Search(table, properties, opts).run();
}

std::vector<SubmoduleUnderTest> standard_units() {
  std::vector<SubmoduleUnderTest> out;
  for (auto id : monitor::kAllSubmodules) out.push_back({id, monitor::standard_table(id)});
  return out;
}

ExhaustiveReport check_submodules(const std::vector<SubmoduleUnderTest>& units, const ExhaustiveOptions& opts) {
  std::uint64_t estimate = 0;
  for (const auto& u : units) {
    const auto n = sequence_count(pruned_alphabet(u.table).size(), opts.depth);
    estimate = n > UINT64_MAX - estimate ? UINT64_MAX : estimate + n;
  }
  if (estimate > opts.budget) throw BudgetExceeded(estimate, opts.budget);

  const auto start = std::chrono::steady_clock::now();
  ExhaustiveReport r;
  r.depth = opts.depth;
  for (const auto& u : units) r.submodules.push_back(check_submodule(u.table, submodule_properties(u.id), opts));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<bool> replay(const monitor::SubmoduleTable& table, const std::vector<AbstractInput>& inputs) {
  std::vector<bool> out;
  std::uint8_t state = table.initial;
  for (const auto& in : inputs) {
    const auto st = monitor::tick_submodule(table, state, in);
    out.push_back(st.exec);
    state = st.next;
  }
  return out;
}

PropTrace counterexample_trace(const Counterexample& c) {
  PropTrace t(column_names(), c.inputs.size());
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    for (std::size_t b = 0; b < kInputBitCount; ++b) t.set(b, i, c.inputs[i][static_cast<InputBit>(b)]);
    t.set(kExecColumn, i, c.exec[i]);
  }
  return t;
}

std::string format_counterexample(const Counterexample& c) {
  std::ostringstream os;
  os << c.submodule << " violates " << c.property << " at position " << c.position << ":\n";
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    os << "  " << i << ": exec=" << c.exec[i] << "  " << monitor::to_string(c.inputs[i]) << '\n';
  }
  return os.str();
}

std::string format_report(const ExhaustiveReport& r) {
  std::ostringstream os;
  os << "exhaustive check to depth " << r.depth << '\n';
  for (const auto& s : r.submodules) {
    os << (s.counterexamples == 0 ? "PASS " : "FAIL ") << s.submodule << ": alphabet " << s.alphabet_size << ", "
       << s.sequences << " input words, " << s.counterexamples << " counterexamples (";
    for (std::size_t i = 0; i < s.properties.size(); ++i) os << (i ? ", " : "") << s.properties[i];
    os << ")\n";
    for (const auto& c : s.samples) os << format_counterexample(c);
  }
  os << "total: " << r.sequences() << " input words, " << r.counterexamples() << " counterexamples\n";
  return os.str();
}

}  // namespace pox::ltl
