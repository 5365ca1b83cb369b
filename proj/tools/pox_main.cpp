// Copyright 2026 The pox-sim Authors
// SPDX-License-Identifier: Apache-2.0
//
// pox: run scenarios, play the security game, check traces, verify the
// monitor sub-modules exhaustively.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pox/ltl/exhaustive.hpp"
#include "pox/ltl/properties.hpp"
#include "pox/machine/trace_io.hpp"
#include "pox/scenarios/fire_sensor.hpp"
#include "pox/scenarios/game.hpp"
#include "pox/scenarios/scenario.hpp"

namespace fs = std::filesystem;
using namespace pox;

namespace {

constexpr int kOk = 0;
constexpr int kExpectationFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;
  std::size_t depth = 8;
  std::uint64_t budget = ltl::ExhaustiveOptions{}.budget;
  std::string strategy = "all";
  std::string scenario;
  std::string trace;
  std::string report;
  std::string tables;
  std::string export_dir;
  bool transcripts = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("POX_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("POX_SEED", std::string("not an unsigned integer: ") + env);
  }
  return 0;
}

int emit(const Options& o, const std::string& report, bool ok) {
  std::cout << report;
  if (!o.report.empty()) {
    std::ofstream os(o.report);
    if (!os) {
      std::cerr << "pox: cannot write " << o.report << '\n';
      return kExpectationFailed;
    }
    os << report;
  }
  return ok ? kOk : kExpectationFailed;
}

void save_trace(const std::string& path, const machine::Trace& trace, const ltl::TraceContext& ctx) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  machine::write_trace(os, trace);
  ltl::write_trace_context(ltl::sidecar_path(path), ctx);
}

std::string check_section(const machine::Trace& trace, const ltl::TraceContext& ctx, bool& ok) {
  const auto report = ltl::check_trace(ltl::build_prop_trace(trace, ctx));
  ok = ok && report.ok();
  return ltl::format_report(report);
}

int cmd_run(const Options& o) {
  scenarios::Scenario sc;
  if (o.scenario == "fire-sensor") {
    sc = scenarios::fire_sensor_scenario(o.seed);
  } else {
    sc = scenarios::load_scenario(o.scenario);
  }
  const auto r = scenarios::run_scenario(sc, o.seed);
  if (!o.trace.empty()) save_trace(o.trace, r.trace, r.context);
  bool ok = r.as_expected();
  std::string report = scenarios::format_result(r);
  report += check_section(r.trace, r.context, ok);
  return emit(o, report, ok);
}

int cmd_demo(const Options& o) {
  const auto r = scenarios::run_scenario(scenarios::fire_sensor_scenario(o.seed), o.seed);
  if (!o.trace.empty()) save_trace(o.trace, r.trace, r.context);
  bool ok = r.as_expected() && r.exec_during_prove;
  std::ostringstream os;
  os << scenarios::format_result(r);
  os << "alarm: " << (r.gpio_writes.empty() ? "off" : "on") << '\n';
  os << check_section(r.trace, r.context, ok);
  return emit(o, os.str(), ok);
}

int cmd_game(const Options& o) {
  std::vector<std::string> strategies;
  if (o.strategy == "all") {
    strategies = scenarios::strategy_names();
  } else {
    strategies = {o.strategy};
  }
  std::ostringstream os;
  bool ok = true;
  for (const auto& s : strategies) {
    scenarios::GameOptions g;
    g.seed = o.seed;
    g.trials = o.trials.value_or(scenarios::default_trials(s));
    g.keep_transcripts = o.transcripts;
    const auto run = scenarios::run_security_game(s, g);
    const auto& r = run.result;
    const bool pass = scenarios::is_adversary(s) ? r.wins == 0 : r.accepts == r.trials;
    ok = ok && pass;
    os << (pass ? "PASS " : "FAIL ") << scenarios::format_result(r, o.transcripts);
  }
  os << (ok ? "no adversary wins; honest runs accepted" : "game expectations failed") << '\n';
  return emit(o, os.str(), ok);
}

int cmd_check(const Options& o) {
  std::ifstream is(o.trace);
  if (!is) throw std::runtime_error("cannot read " + o.trace);
  const auto trace = machine::read_trace(is);
  ltl::TraceContext ctx;
  const auto meta = ltl::sidecar_path(o.trace);
  if (fs::exists(meta)) {
    ctx = ltl::read_trace_context(meta);
  } else if (!trace.empty()) {
    throw std::runtime_error("missing " + meta.string() + " (memory layout and ER/OR bound history)");
  }
  bool ok = true;
  const std::string report = check_section(trace, ctx, ok);
  return emit(o, report, ok);
}

std::vector<ltl::SubmoduleUnderTest> load_units(const std::string& dir) {
  auto units = ltl::standard_units();
  if (dir.empty()) return units;
  std::size_t loaded = 0;
  for (auto& u : units) {
    const fs::path p = fs::path(dir) / (u.table.name + ".fsm");
    if (!fs::exists(p)) continue;
    std::ifstream is(p);
    u.table = monitor::read_table(is);
    ++loaded;
  }
  if (loaded == 0) throw std::runtime_error("no sub-module tables (*.fsm) found in " + dir);
  return units;
}

int cmd_verify(const Options& o) {
  if (!o.export_dir.empty()) {
    fs::create_directories(o.export_dir);
    for (auto id : monitor::kAllSubmodules) {
      const auto t = monitor::standard_table(id);
      std::ofstream os(fs::path(o.export_dir) / (t.name + ".fsm"));
      monitor::write_table(os, t);
    }
  }
  ltl::ExhaustiveOptions opts;
  opts.depth = o.depth;
  opts.budget = o.budget;
  try {
    const auto report = ltl::check_submodules(load_units(o.tables), opts);
    std::cerr << "exhaustive check took " << report.seconds << " s\n";
    return emit(o, ltl::format_report(report), report.counterexamples() == 0);
  } catch (const ltl::BudgetExceeded& e) {
    return emit(o, std::string(e.what()) + '\n', false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof-of-execution simulator: scenarios, security game, trace and sub-module checks", "pox"};
  app.require_subcommand(1);
  Options o;

  std::optional<std::uint64_t> seed_flag;
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed_flag, "RNG seed (default 0, or POX_SEED)"); };
  auto add_report = [&](CLI::App* c) { c->add_option("--report", o.report, "Also write the report to this file"); };

  auto* run = app.add_subcommand("run", "Run one scenario through the verifier/prover protocol");
  run->add_option("--scenario", o.scenario, "Built-in name (fire-sensor) or scenario JSON file")->required();
  run->add_option("--trace", o.trace, "Write the cycle trace (JSON Lines) here");
  add_seed(run);
  add_report(run);

  auto* game = app.add_subcommand("game", "Play the security game");
  game->add_option("--strategy", o.strategy, "Strategy name, or 'all'");
  game->add_option("--trials", o.trials, "Trials per strategy (default 100; 100000 for forge_guess)");
  game->add_flag("--transcripts", o.transcripts, "List each trial in the report");
  add_seed(game);
  add_report(game);

  auto* check = app.add_subcommand("check", "Check a recorded trace against the property catalogue");
  check->add_option("--trace", o.trace, "Trace file; its .meta sidecar must sit next to it")->required();
  add_report(check);

  auto* verify = app.add_subcommand("verify-submodules", "Exhaustively check each monitor sub-module");
  verify->add_option("--depth", o.depth, "Input sequence length bound")->check(CLI::Range(1, 64));
  verify->add_option("--budget", o.budget, "Refuse runs needing more input words than this");
  verify->add_option("--tables", o.tables, "Directory of <name>.fsm tables replacing the built-in ones");
  verify->add_option("--export", o.export_dir, "Write the built-in tables to this directory first");
  add_report(verify);

  auto* demo = app.add_subcommand("demo-fire-sensor", "Attest a run of the fire-sensor application");
  demo->add_option("--trace", o.trace, "Write the cycle trace (JSON Lines) here");
  add_seed(demo);
  add_report(demo);

  try {
    app.parse(argc, argv);
    o.seed = seed_flag ? *seed_flag : default_seed();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*game) return cmd_game(o);
    if (*check) return cmd_check(o);
    if (*verify) return cmd_verify(o);
    if (*demo) return cmd_demo(o);
  } catch (const scenarios::UnknownStrategy& e) {
    std::cerr << "pox: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pox: " << e.what() << '\n';
    return kExpectationFailed;
  }
  return kUsage;
}
