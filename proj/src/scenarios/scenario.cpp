// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include "pox/scenarios/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pox/protocol/prover.hpp"
#include "pox/protocol/transport.hpp"
#include "pox/protocol/verifier.hpp"
#include "pox/scenarios/program.hpp"

namespace pox::scenarios {

void Scenario::validate() const {
  if (name.empty()) throw ScenarioError("scenario needs a name");
  if (source.empty()) throw ScenarioError("scenario '" + name + "' has no program");
  const bool adversarial = !dma.empty() || !irq.empty() || !hooks.empty();
  if (expected == Expectation::Accept && adversarial) {
    throw ScenarioError("scenario '" + name + "' expects acceptance but schedules adversary actions");
  }
  layout.validate();
}

swatt::Key device_key(std::uint64_t seed) {
  std::mt19937_64 g(seed ^ 0x6b65792d73656564ULL);
  swatt::Key k{};
  for (auto& b : k) b = static_cast<std::uint8_t>(g());
  return k;
}

namespace {

void apply_hooks(const Scenario& sc, HookPoint when, protocol::Device& dev, protocol::Response* resp) {
  for (const auto& h : sc.hooks) {
    if (h.when != when) continue;
    switch (h.action) {
      case HookAction::Store: dev.sw_store(h.addr, h.value); break;
      case HookAction::DmaWrite: dev.dma_write(h.addr, h.value); break;
      case HookAction::TamperOutput:
        if (!resp) throw ScenarioError("output tampering only applies after the proof");
        if (h.index >= resp->o.size()) throw ScenarioError("tamper index past the end of the output");
        resp->o[h.index] ^= h.value;
        break;
      case HookAction::TamperToken:
        if (!resp) throw ScenarioError("token tampering only applies after the proof");
        if (h.index >= resp->h.size()) throw ScenarioError("tamper index past the end of the token");
        resp->h[h.index] ^= h.value;
        break;
    }
  }
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc, std::uint64_t seed) {
  sc.validate();
  const auto& layout = sc.layout;
  auto defines = sc.defines;
  defines.emplace("GPIO_IN", layout.gpio.min);
  defines.emplace("GPIO_OUT", static_cast<std::uint16_t>(layout.gpio.min + 1));
  if (sc.out) {
    defines.emplace("OR_MIN", sc.out->min);
    defines.emplace("OR_MAX", sc.out->max);
  }
  const BuiltProgram prog = build_program(sc.source, sc.er_min, sc.er_max, defines, layout);

  const swatt::Key key = device_key(seed);
  protocol::DeviceConfig cfg;
  cfg.layout = layout;
  cfg.cost = sc.cost;
  protocol::Device dev(key, cfg);
  dev.machine().gpio().script_input(sc.gpio_bits);
  for (const auto& e : sc.irq) {
    if (dev.machine().peek(e.vector) == 0) dev.machine().provision(e.vector, machine::encode(machine::ins::reti()));
  }
  protocol::Verifier verifier(key, std::make_unique<protocol::SeededChallenges>(seed), layout);
  protocol::Prover prover(dev);
  auto [vrf_end, prv_end] = protocol::make_duplex_pair();

  const auto issued = verifier.xrequest(prog.image, prog.er, sc.out, dev.cycle());
  vrf_end->send(protocol::encode(issued.request));

  ScenarioResult r;
  r.name = sc.name;
  r.expected = sc.expected;
  r.request = protocol::decode_request(prv_end->receive().value());
  dev.sw_set_sp(kStackTop);
  prover.install(r.request);
  apply_hooks(sc, HookPoint::BeforeExec, dev, nullptr);
  const std::uint64_t start = dev.cycle();
  for (auto e : sc.dma) {
    e.fire_cycle += start;
    dev.schedule(e);
  }
  for (auto e : sc.irq) {
    e.fire_cycle += start;
    dev.schedule(e);
  }
  prover.xatomic_exec();
  apply_hooks(sc, HookPoint::AfterExec, dev, nullptr);
  const std::size_t prove_from = dev.trace().size();
  protocol::Response resp = prover.xprove();
  apply_hooks(sc, HookPoint::AfterProve, dev, &resp);
  prv_end->send(protocol::encode(resp));

  r.response = protocol::decode_response(vrf_end->receive().value());
  r.accepted = verifier.xverify(issued.session, r.response, dev.cycle());

  bool saw = false;
  bool all = true;
  const auto& trace = dev.trace();
  for (std::size_t i = prove_from; i < trace.size(); ++i) {
    if (!layout.cr.contains(trace[i].pc)) continue;
    saw = true;
    all = all && trace[i].exec;
  }
  r.exec_during_prove = saw && all;
  r.context = {layout, dev.bounds_timeline()};
  r.gpio_writes = dev.machine().gpio().writes();
  r.trace = dev.take_trace();
  return r;
}

namespace {

std::uint64_t number(const nlohmann::json& j, const char* what, std::uint64_t max) {
  std::uint64_t v = 0;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::size_t used = 0;
    try {
      v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
      throw ScenarioError(std::string("bad number for ") + what + ": " + s);
    }
    if (used != s.size()) throw ScenarioError(std::string("bad number for ") + what + ": " + s);
  } else if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    v = j.get<std::uint64_t>();
  } else {
    throw ScenarioError(std::string(what) + " must be a number or a numeric string");
  }
  if (v > max) throw ScenarioError(std::string(what) + " out of range");
  return v;
}

Address address(const nlohmann::json& j, const char* what) { return static_cast<Address>(number(j, what, 0xFFFF)); }

AddressRange range(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ScenarioError(std::string(what) + " must be [min, max]");
  return {address(j[0], what), address(j[1], what)};
}

HookPoint hook_point(const std::string& s) {
  if (s == "before_exec") return HookPoint::BeforeExec;
  if (s == "after_exec") return HookPoint::AfterExec;
  if (s == "after_prove") return HookPoint::AfterProve;
  throw ScenarioError("unknown hook point '" + s + "'");
}

HookAction hook_action(const std::string& s) {
  if (s == "store") return HookAction::Store;
  if (s == "dma_write") return HookAction::DmaWrite;
  if (s == "tamper_output") return HookAction::TamperOutput;
  if (s == "tamper_token") return HookAction::TamperToken;
  throw ScenarioError("unknown hook action '" + s + "'");
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ScenarioError("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
  Scenario sc;
  try {
    sc.name = j.at("name").get<std::string>();
    if (j.contains("program")) {
      const auto prog = path.parent_path() / j.at("program").get<std::string>();
      std::ifstream ps(prog);
      if (!ps) throw ScenarioError("cannot read program " + prog.string());
      std::ostringstream ss;
      ss << ps.rdbuf();
      sc.source = ss.str();
    } else {
      sc.source = j.at("source").get<std::string>();
    }
    if (j.contains("er_min")) sc.er_min = address(j["er_min"], "er_min");
    if (j.contains("er_max")) sc.er_max = address(j["er_max"], "er_max");
    if (j.contains("or")) sc.out = range(j["or"], "or");
    if (j.contains("defines")) {
      for (const auto& [k, v] : j["defines"].items()) sc.defines[k] = static_cast<std::uint16_t>(number(v, "define", 0xFFFF));
    }
    for (const auto& d : j.value("dma", nlohmann::json::array())) {
      machine::DmaEvent e;
      e.fire_cycle = number(d.at("at"), "dma.at", UINT32_MAX);
      const auto op = d.value("op", std::string("write"));
      if (op != "write" && op != "read") throw ScenarioError("dma.op must be read or write");
      e.op = op == "write" ? machine::DmaOp::Write : machine::DmaOp::Read;
      e.addr = address(d.at("addr"), "dma.addr");
      e.value = static_cast<std::uint8_t>(number(d.value("value", nlohmann::json(0)), "dma.value", 0xFF));
      sc.dma.push_back(e);
    }
    for (const auto& d : j.value("irq", nlohmann::json::array())) {
      sc.irq.push_back({number(d.at("at"), "irq.at", UINT32_MAX), address(d.at("vector"), "irq.vector")});
    }
    for (const auto& b : j.value("gpio_bits", nlohmann::json::array())) {
      sc.gpio_bits.push_back(static_cast<std::uint8_t>(number(b, "gpio bit", 1)));
    }
    for (const auto& h : j.value("hooks", nlohmann::json::array())) {
      Hook hk;
      hk.when = hook_point(h.at("when").get<std::string>());
      hk.action = hook_action(h.at("action").get<std::string>());
      if (h.contains("addr")) hk.addr = address(h["addr"], "hook.addr");
      if (h.contains("value")) hk.value = static_cast<std::uint8_t>(number(h["value"], "hook.value", 0xFF));
      if (h.contains("index")) hk.index = number(h["index"], "hook.index", 0xFFFF);
      sc.hooks.push_back(hk);
    }
    const auto expect = j.value("expect", std::string("accept"));
    if (expect != "accept" && expect != "reject") throw ScenarioError("expect must be accept or reject");
    sc.expected = expect == "accept" ? Expectation::Accept : Expectation::Reject;
    if (j.contains("cost")) {
      sc.cost.base = number(j["cost"].at("base"), "cost.base", UINT32_MAX);
      sc.cost.per_byte = number(j["cost"].at("per_byte"), "cost.per_byte", UINT32_MAX);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
  sc.validate();
  return sc;
}

std::string format_result(const ScenarioResult& r) {
  auto hexbytes = [](std::span<const std::uint8_t> b) {
    static const char* d = "0123456789abcdef";
    std::string s;
    for (auto x : b) {
      s += d[x >> 4];
      s += d[x & 15];
    }
    return s.empty() ? std::string("-") : s;
  };
  std::ostringstream os;
  os << "scenario: " << r.name << '\n'
     << "chal: " << hexbytes(r.request.chal) << '\n'
     << "er: " << to_string(r.request.er()) << '\n'
     << "or: " << (r.request.output_absent() ? std::string("none") : to_string({r.request.or_min, r.request.or_max}))
     << '\n'
     << "o: " << hexbytes(r.response.o) << '\n'
     << "h: " << hexbytes(r.response.h) << '\n'
     << "exec during prove: " << (r.exec_during_prove ? 1 : 0) << '\n'
     << "cycles: " << r.trace.size() << '\n'
     << "gpio writes: " << r.gpio_writes.size() << '\n'
     << "verdict: " << (r.accepted ? "accept" : "reject") << '\n'
     << "expected: " << (r.expected == Expectation::Accept ? "accept" : "reject") << '\n'
     << (r.as_expected() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace pox::scenarios
