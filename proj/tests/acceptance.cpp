// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// line fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "pox/ltl/evaluator.hpp"
#include "pox/ltl/exhaustive.hpp"
#include "pox/ltl/fuzz.hpp"
#include "pox/monitor/metadata.hpp"
#include "pox/scenarios/game.hpp"
#include "pox/swatt/swatt.hpp"
#include "support/ltl_oracle.hpp"
#include "support/vectors.hpp"

using namespace pox;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string hex(std::span<const std::uint8_t> b) {
  static const char* d = "0123456789abcdef";
  std::string s;
  for (auto x : b) {
    s += d[x >> 4];
    s += d[x & 15];
  }
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome register_file() {
  const machine::MemoryLayout layout;
  monitor::MetadataRegisters md;
  const auto encoded = monitor::encode_metadata(md);
  const std::size_t regs = monitor::register_file_size();
  const std::size_t mapped = layout.metadata.size() - machine::kChallengeBytes;
  const std::size_t serialized = encoded.size() - machine::kChallengeBytes;
  std::ostringstream os;
  os << "register file " << regs << " bytes, mapped " << mapped << ", serialized " << serialized;
  return {regs == 9 && mapped == 9 && serialized == 9, os.str()};
}

Outcome cost_model() {
  const std::uint64_t at8k = swatt::cycle_cost(8192);
  bool ok = at8k >= 7'128'000 && at8k <= 7'272'000;
  std::ostringstream os;
  os << "cycle_cost(8192) = " << at8k;
  for (std::size_t n : {64, 1024, 4096}) {
    const std::uint64_t delta = swatt::cycle_cost(2 * n) - swatt::cycle_cost(n);
    os << ", delta(" << n << ") = " << delta;
    ok = ok && delta == 878 * n;
  }
  return {ok, os.str()};
}

Outcome exhaustive() {
  ltl::ExhaustiveOptions opts;
  opts.depth = 8;
  opts.max_samples = 1;
  const auto report = ltl::check_submodules(ltl::standard_units(), opts);
  bool ok = report.submodules.size() == 7 && report.counterexamples() == 0;
  std::ostringstream os;
  os << report.submodules.size() << " sub-modules, depth 8, " << report.sequences() << " words, "
     << report.counterexamples() << " counterexamples; mutants caught at depth 4:";
  opts.depth = 4;
  for (const auto& unit : ltl::standard_units()) {
    const auto broken = monitor::apply(unit.table, monitor::standard_mutation(unit.id));
    const auto v = ltl::check_submodule(broken, ltl::submodule_properties(unit.id), opts);
    os << ' ' << unit.table.name << '=' << v.counterexamples;
    ok = ok && v.counterexamples >= 1;
  }
  return {ok, os.str()};
}

Outcome fuzz() {
  ltl::FuzzOptions opts;
  opts.traces = 10'000;
  opts.seed = 1;
  const auto r = ltl::execution_fuzz(opts);
  std::ostringstream os;
  os << r.traces << " traces, " << r.non_vacuous << " with an attested run, " << r.discrepancies << " discrepancies";
  return {r.traces == 10'000 && r.discrepancies == 0, os.str()};
}

Outcome game() {
  bool ok = true;
  std::size_t wins = 0;
  std::size_t played = 0;
  for (const auto& s : scenarios::adversary_strategies()) {
    scenarios::GameOptions g;
    g.trials = scenarios::default_trials(s);
    g.seed = 1;
    g.keep_transcripts = false;
    const auto r = scenarios::run_security_game(s, g).result;
    const std::size_t want = s == "forge_guess" ? 100'000 : 100;
    ok = ok && r.trials == want && r.wins == 0;
    wins += r.wins;
    played += r.trials;
  }
  scenarios::GameOptions g;
  g.trials = 100;
  g.seed = 1;
  g.keep_transcripts = false;
  const auto honest = scenarios::run_security_game("honest", g).result;
  ok = ok && scenarios::adversary_strategies().size() == 12 && honest.accepts == 100;
  std::ostringstream os;
  os << scenarios::adversary_strategies().size() << " strategies, " << played << " trials, " << wins
     << " wins; honest " << honest.accepts << "/" << honest.trials << " accepted";
  return {ok, os.str()};
}

Outcome hmac() {
  std::size_t matched = 0;
  const auto vectors = test::rfc4231_vectors();
  for (const auto& v : vectors) {
    const std::string got = hex(swatt::hmac_sha256(v.key, v.data));
    const std::string want = v.mac;
    matched += got.substr(0, want.size()) == want;
  }
  std::ostringstream os;
  os << matched << "/" << vectors.size() << " test cases match";
  return {matched == vectors.size() && vectors.size() == 7, os.str()};
}

int run_demo(const fs::path& dir, const std::string& tag) {
  const std::string cmd = std::string("'") + POX_BINARY + "' demo-fire-sensor --seed 1 --trace '" +
                          (dir / (tag + ".jsonl")).string() + "' > '" + (dir / (tag + ".out")).string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("pox_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const int a = run_demo(dir, "a");
  const int b = run_demo(dir, "b");
  const std::string ta = slurp(dir / "a.jsonl");
  const std::string tb = slurp(dir / "b.jsonl");
  const std::string ra = slurp(dir / "a.out");
  const std::string rb = slurp(dir / "b.out");
  const bool meta_same = slurp(dir / "a.jsonl.meta") == slurp(dir / "b.jsonl.meta");
  fs::remove_all(dir);
  std::ostringstream os;
  os << "exit " << a << "/" << b << ", trace " << ta.size() << " bytes " << (ta == tb ? "identical" : "differs")
     << ", report " << ra.size() << " bytes " << (ra == rb ? "identical" : "differs");
  return {a == 0 && b == 0 && !ta.empty() && ta == tb && !ra.empty() && ra == rb && meta_same, os.str()};
}

Outcome ltl_crosscheck() {
  using ltl::Formula;
  const auto formulas = test::formulas_up_to(
      3, {Formula::prop("p"), Formula::prop("q"), Formula::constant(true), Formula::constant(false)});
  const auto traces = test::traces_up_to(5, {"p", "q"});
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  for (const auto& t : traces) {
    const auto pt = test::to_prop_trace(t);
    for (const auto& f : formulas) {
      const auto got = ltl::eval_all(f, pt);
      for (std::size_t i = 0; i < t.size(); ++i) {
        mismatches += got[i] != test::naive_holds(f, t, i);
        ++checked;
      }
    }
  }
  std::ostringstream os;
  os << formulas.size() << " formulas x " << traces.size() << " traces, " << checked << " positions, " << mismatches
     << " mismatches";
  return {formulas.size() == 50'404 && traces.size() == 1'364 && mismatches == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"register-file-9-bytes", register_file},
      {"attestation-cost-model", cost_model},
      {"submodules-exhaustive-depth-8", exhaustive},
      {"execution-fuzz-10k", fuzz},
      {"security-game", game},
      {"hmac-rfc4231", hmac},
      {"demo-determinism", determinism},
      {"ltl-oracle-crosscheck", ltl_crosscheck},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
