// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/machine/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>

namespace pox::machine {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '.')) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.'; });
}

std::optional<std::int64_t> parse_number(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return neg ? -v : v;
}

std::optional<std::uint8_t> parse_register(std::string_view s) {
  std::string u = upper(trim(s));
  if (u == "SP") return kSp;
  if (u.size() == 2 && u[0] == 'R' && u[1] >= '0' && u[1] < '0' + kRegisterCount) {
    return static_cast<std::uint8_t>(u[1] - '0');
  }
  return std::nullopt;
}

Operand parse_operand(std::size_t line, std::string_view s) {
  s = trim(s);
  if (auto n = parse_number(s)) {
    if (*n < -0x8000 || *n > 0xFFFF) throw AssemblyError(line, "value out of 16-bit range: " + std::string(s));
    return {"", static_cast<std::int32_t>(*n)};
  }
  auto split = s.find_first_of("+-", 1);
  std::string_view sym = trim(s.substr(0, split));
  if (!is_ident(sym)) throw AssemblyError(line, "bad operand: " + std::string(s));
  Operand op{std::string(sym), 0};
  if (split != std::string_view::npos) {
    auto n = parse_number(trim(s.substr(split)));
    if (!n) throw AssemblyError(line, "bad offset in operand: " + std::string(s));
    op.offset = static_cast<std::int32_t>(*n);
  }
  return op;
}

std::vector<std::string_view> split_args(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[') ++depth;
    if (s[i] == ']') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

void expect_args(std::size_t line, std::string_view name, const std::vector<std::string_view>& args, std::size_t n) {
  if (args.size() != n) {
    throw AssemblyError(line, std::string(name) + " takes " + std::to_string(n) + " operand(s), got " +
                                  std::to_string(args.size()));
  }
}

std::uint8_t need_register(std::size_t line, std::string_view s) {
  auto r = parse_register(s);
  if (!r) throw AssemblyError(line, "expected register, got '" + std::string(s) + "'");
  return *r;
}

SourceInstruction parse_instruction(std::size_t line, std::string_view text) {
  auto space = text.find_first_of(" \t");
  std::string name = upper(text.substr(0, space));
  std::string_view rest = space == std::string_view::npos ? std::string_view{} : text.substr(space);
  auto op = opcode_from_mnemonic(name);
  if (!op) throw AssemblyError(line, "unknown mnemonic '" + name + "'");
  auto args = split_args(rest);
  SourceInstruction si;
  si.op = *op;
  switch (*op) {
    case Opcode::Nop:
    case Opcode::Ret:
    case Opcode::Reti:
    case Opcode::Halt:
      expect_args(line, name, args, 0);
      break;
    case Opcode::Movi:
      expect_args(line, name, args, 2);
      si.ra = need_register(line, args[0]);
      si.imm = parse_operand(line, args[1]);
      break;
    case Opcode::Load:
    case Opcode::Store: {
      expect_args(line, name, args, 2);
      si.ra = need_register(line, args[0]);
      std::string_view m = args[1];
      if (!m.empty() && m.front() == '[') {
        if (m.back() != ']') throw AssemblyError(line, "unterminated '['");
        m = trim(m.substr(1, m.size() - 2));
        auto plus = m.find('+');
        si.rb = need_register(line, m.substr(0, plus));
        if (plus != std::string_view::npos) si.imm = parse_operand(line, m.substr(plus + 1));
      } else {
        si.imm = parse_operand(line, m);
      }
      break;
    }
    case Opcode::Add:
    case Opcode::Sub:
      expect_args(line, name, args, 2);
      si.ra = need_register(line, args[0]);
      if (auto rb = parse_register(args[1])) {
        si.rb = *rb;
      } else {
        si.imm = parse_operand(line, args[1]);
      }
      break;
    case Opcode::Jmp:
    case Opcode::Call:
      expect_args(line, name, args, 1);
      si.imm = parse_operand(line, args[0]);
      break;
    case Opcode::Jz:
      expect_args(line, name, args, 2);
      si.ra = need_register(line, args[0]);
      si.imm = parse_operand(line, args[1]);
      break;
  }
  return si;
}

std::uint16_t resolve(std::size_t line, const Operand& op, const SymbolTable& symbols) {
  std::int64_t v = op.offset;
  if (!op.symbol.empty()) {
    auto it = symbols.find(op.symbol);
    if (it == symbols.end()) throw AssemblyError(line, "unresolved label '" + op.symbol + "'");
    v += it->second;
  }
  return static_cast<std::uint16_t>(v & 0xFFFF);
}

}  // namespace

AssemblyError::AssemblyError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::size_t Program::instruction_count() const {
  return static_cast<std::size_t>(std::count_if(lines.begin(), lines.end(), [](const SourceLine& l) { return l.ins.has_value(); }));
}

Program parse_program(std::string_view source) {
  Program prog;
  std::size_t line_no = 0;
  std::vector<std::string> pending_labels;
  std::set<std::string, std::less<>> declared;
  while (!source.empty()) {
    ++line_no;
    auto nl = source.find('\n');
    std::string_view raw = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
    if (auto c = raw.find_first_of(";#"); c != std::string_view::npos) raw = raw.substr(0, c);

    // " / " separates statements written on one line.
    std::vector<std::string_view> stmts;
    for (;;) {
      auto sep = raw.find(" / ");
      stmts.push_back(trim(raw.substr(0, sep)));
      if (sep == std::string_view::npos) break;
      raw = raw.substr(sep + 3);
    }
    for (std::string_view stmt : stmts) {
      while (!stmt.empty()) {
        auto colon = stmt.find(':');
        if (colon == std::string_view::npos) break;
        std::string_view label = trim(stmt.substr(0, colon));
        if (!is_ident(label)) break;
        if (!declared.emplace(label).second) {
          throw AssemblyError(line_no, "duplicate label '" + std::string(label) + "'");
        }
        pending_labels.emplace_back(label);
        stmt = trim(stmt.substr(colon + 1));
      }
      if (stmt.empty()) continue;
      if (stmt.size() >= 4 && upper(stmt.substr(0, 4)) == ".EQU") {
        auto args = split_args(stmt.substr(4));
        expect_args(line_no, ".equ", args, 2);
        if (!is_ident(args[0])) throw AssemblyError(line_no, "bad constant name");
        auto v = parse_number(args[1]);
        if (!v || *v < -0x8000 || *v > 0xFFFF) throw AssemblyError(line_no, "bad constant value");
        prog.constants[std::string(args[0])] = static_cast<std::uint16_t>(*v & 0xFFFF);
        continue;
      }
      SourceLine sl;
      sl.line_no = line_no;
      sl.labels = std::move(pending_labels);
      pending_labels.clear();
      sl.ins = parse_instruction(line_no, stmt);
      prog.lines.push_back(std::move(sl));
    }
  }
  if (!pending_labels.empty()) {
    // Trailing labels point just past the last instruction.
    prog.lines.push_back(SourceLine{line_no, std::move(pending_labels), std::nullopt});
  }
  return prog;
}

Assembly assemble(const Program& program, Address base, std::optional<AddressRange> limit) {
  Assembly out;
  out.base = base;
  SymbolTable& symbols = out.symbols;
  for (const auto& [name, v] : program.constants) symbols[name] = v;

  std::uint32_t addr = base;
  std::optional<Address> last_ins;
  for (const auto& line : program.lines) {
    for (const auto& label : line.labels) {
      if (!symbols.emplace(label, static_cast<Address>(addr & 0xFFFF)).second) {
        throw AssemblyError(line.line_no, "duplicate label '" + label + "'");
      }
    }
    if (line.ins) {
      last_ins = static_cast<Address>(addr);
      addr += kInstructionBytes;
    }
  }
  const std::size_t size = addr - base;
  if (addr > 0x10000) throw AssemblyError(0, "image runs past the end of memory");
  if (limit && size > 0 && !limit->covers({base, static_cast<Address>(addr - 1)})) {
    throw AssemblyError(0, "image of " + std::to_string(size) + " bytes at " + hex16(base) + " exceeds " +
                               to_string(*limit));
  }
  symbols.emplace("entry", base);
  if (last_ins) symbols.emplace("exit", *last_ins);

  out.image.reserve(size);
  for (const auto& line : program.lines) {
    if (!line.ins) continue;
    const auto& si = *line.ins;
    Instruction ins{si.op, si.ra, si.rb, resolve(line.line_no, si.imm, symbols)};
    auto enc = encode(ins);
    if (!decode(enc)) throw AssemblyError(line.line_no, "operands not valid for " + std::string(mnemonic(si.op)));
    out.image.insert(out.image.end(), enc.begin(), enc.end());
  }
  return out;
}

Assembly assemble(std::string_view source, Address base, std::optional<AddressRange> limit) {
  return assemble(parse_program(source), base, limit);
}

void write_symbol_map(std::ostream& os, const SymbolTable& symbols) {
  for (const auto& [name, addr] : symbols) os << name << '=' << hex16(addr) << '\n';
}

SymbolTable read_symbol_map(std::istream& is) {
  SymbolTable out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    std::string_view v = trim(line);
    if (v.empty()) continue;
    auto eq = v.find('=');
    auto num = eq == std::string_view::npos ? std::nullopt : parse_number(trim(v.substr(eq + 1)));
    if (!num || *num < 0 || *num > 0xFFFF) throw AssemblyError(n, "malformed symbol map line");
    out[std::string(trim(v.substr(0, eq)))] = static_cast<Address>(*num);
  }
  return out;
}

}  // namespace pox::machine
