// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <bit>
#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rvasm/assembler.hpp"
#include "rvasm/bench.hpp"
#include "rvasm/explain.hpp"
#include "rvasm/incremental.hpp"
#include "rvasm/isa.hpp"
#include "rvasm/parser.hpp"
#include "rvasm/simulator.hpp"
#include "rvasm/state_dump.hpp"
#include "support/random_program.hpp"
#include "support/test_data.hpp"
#include "support/trace_gen.hpp"

namespace rvasm {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

using Check = std::function<void(Outcome&)>;

void equivalence(Outcome& out) {
  constexpr int kSeeds = 1000;
  constexpr int kMaxLines = 300;
  constexpr std::size_t kEvents = 200;
  constexpr std::size_t kCheckpoint = 50;
  std::uint64_t total = 0;
  std::uint64_t chars = 0;
  std::uint64_t incremental = 0;
  int mismatches = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    testing::TraceGenerator gen(static_cast<std::uint64_t>(seed));
    const std::string text = gen.program(kMaxLines);
    Document doc(text);
    std::vector<EditEvent> events;
    while (events.size() < kEvents) gen.edits(doc, events);
    events.resize(kEvents);
    LiveAssembler live(text);
    bool ok = true;
    for (std::size_t i = 0; i < events.size() && ok; ++i) {
      const Delta d = live.apply(events[i]);
      ++total;
      if (events[i].kind == EditKind::kInsertChar) ++chars;
      if (!d.full_reassembly) ++incremental;
      if ((i + 1) % kCheckpoint == 0) {
        ok = dump_state(live.state(), DumpStyle::kObservable) ==
             dump_state(assemble_full(live.document().lines()), DumpStyle::kObservable);
      }
    }
    if (!ok) {
      ++mismatches;
      out.require(false, "seed " + std::to_string(seed) + " diverged");
    }
  }
  const double share = static_cast<double>(chars) / static_cast<double>(total);
  out.require(share >= 0.60, "character-insert share below 60%");
  out.detail << kSeeds << " traces x " << kEvents << " events, " << mismatches
             << " mismatches, char inserts " << static_cast<int>(100 * share)
             << "%, incremental edits " << static_cast<int>(100.0 * incremental / total) << "%";
}

void bench_trend(Outcome& out) {
  const BenchReport report = run_benchmark(default_bench_sizes());
  const BenchRow* r100 = nullptr;
  const BenchRow* r10000 = nullptr;
  for (const BenchRow& r : report.rows) {
    if (r.lines == 100) r100 = &r;
    if (r.lines == 10000) r10000 = &r;
  }
  if (!r100 || !r10000) {
    out.require(false, "missing sizes");
    return;
  }
  const double growth = r10000->incremental_us / r100->incremental_us;
  const double speedup = r10000->full_us / r10000->incremental_us;
  out.require(report.full_fit.r2 >= 0.95, "full-mode fit R^2 < 0.95");
  out.require(growth < 5.0, "incremental time grows 5x or more from n=100 to n=10000");
  out.require(speedup >= 50.0, "speedup at n=10000 below 50x");
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "full fit R^2=%.4f (slope %.3f us/line); incremental n=10000/n=100 = %.2fx; "
                "speedup at n=10000 = %.0fx",
                report.full_fit.r2, report.full_fit.c1, growth, speedup);
  out.detail << buf;
}

OpCounters last_keystroke(int n, const std::string& typed) {
  std::string text = generate_program(100);
  for (int i = 100; i < n; ++i) text += "\naddi x6, x6, 1";
  LiveAssembler live(text);
  const int line = n / 2;
  live.apply(EditEvent::insert_newline(line, 0));
  Delta d;
  for (std::size_t i = 0; i < typed.size(); ++i) {
    d = live.apply(EditEvent::insert_char(line, static_cast<int>(i), typed[i]));
  }
  if (d.edit_class.tag != EditClassTag::kIncrementalLineChange) return OpCounters{};
  return d.counters;
}

void complexity(Outcome& out) {
  for (const std::string typed : {"addi x1, x2, -121", "bne x1, x0, L1"}) {
    const OpCounters small = last_keystroke(100, typed);
    const OpCounters large = last_keystroke(10000, typed);
    out.require(small == large, "line-change counters differ between n=100 and n=10000 for '" + typed + "'");
    out.require(small.lines_assembled == 1, "line change assembled more than one line");
    out.require(small.symbols_scanned <= 2, "line change scanned more than m symbols");
  }
  const InsertionCounters base = insertion_counters(1000);
  double worst = 1.0;
  for (int n = 2000; n <= 10000; n += 1000) {
    const InsertionCounters c = insertion_counters(n);
    const double ratio = static_cast<double>(c.line_insert.bytes_moved) /
                         static_cast<double>(base.line_insert.bytes_moved) / (n / 1000.0);
    if (std::abs(ratio - 1.0) > std::abs(worst - 1.0)) worst = ratio;
    out.require(ratio >= 0.8 && ratio <= 1.2, "bytes moved not linear at n=" + std::to_string(n));
  }
  for (int n : default_bench_sizes()) {
    const AssemblyState state = assemble_full(generate_program(n));
    out.require(state.counters.lines_assembled == static_cast<std::uint64_t>(n),
                "full assembly of " + std::to_string(n) + " lines assembled a different count");
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "line change counters equal at n=100 and n=10000; line insert bytes-moved ratio "
                "within %.3f of linear; full lines_assembled == n for all sizes",
                std::abs(worst - 1.0));
  out.detail << buf;
}

void golden(Outcome& out) {
  const auto vectors = testing::load_encoding_vectors();
  std::map<std::string, int> per_mnemonic;
  int exact = 0;
  bool saw_addi = false;
  for (const auto& v : vectors) {
    ++per_mnemonic[v.mnemonic];
    const ParsedLine line = parse_line(v.source, 0);
    bool ok = false;
    try {
      ok = line.syntax && encode(*line.syntax, v.pc) == v.word;
    } catch (const Error&) {
    }
    if (ok) ++exact;
    out.require(ok, "vector '" + v.source + "' mismatched");
    if (v.source == "addi x1, x2, -121" && v.word == 0xF8710093u) saw_addi = true;
  }
  out.require(saw_addi, "missing the addi x1, x2, -121 vector");
  std::vector<std::string_view> mnemonics;
  for (const auto& s : instruction_table()) mnemonics.push_back(s.mnemonic);
  for (const auto& p : pseudo_table()) mnemonics.push_back(p.mnemonic);
  for (auto m : mnemonics) {
    out.require(per_mnemonic[std::string(m)] >= 2, "fewer than two vectors for " + std::string(m));
  }
  constexpr int kRoundTrips = 100000;
  std::mt19937 rng(20240611);
  int round_trips = 0;
  int mismatches = 0;
  const auto table = instruction_table();
  while (round_trips < kRoundTrips) {
    const std::uint32_t word = (rng() & ~0x7Fu) | table[rng() % table.size()].opcode;
    const auto d = decode(word);
    if (!d) continue;
    ++round_trips;
    if (encode(d->to_instruction()) != word) ++mismatches;
  }
  out.require(mismatches == 0, "decode/encode round trip mismatch");
  out.detail << exact << "/" << vectors.size() << " golden vectors bit-exact over " << mnemonics.size()
             << " mnemonics; " << round_trips << " random round trips, " << mismatches << " mismatches";
}

bool matches_full(const LiveAssembler& live) {
  return dump_state(live.state(), DumpStyle::kObservable) ==
         dump_state(assemble_full(live.document().lines()), DumpStyle::kObservable);
}

void type_line(LiveAssembler& live, int line, const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    live.apply(EditEvent::insert_char(line, static_cast<int>(i), text[i]));
  }
}

void crossing(Outcome& out) {
  {
    LiveAssembler live("loop:\naddi x1, x1, -1\nbne x1, x0, loop");
    out.require(live.state().lines[2].imm_full == -4, "initial offset is not -4");
    live.apply(EditEvent::insert_newline(1, 15));
    type_line(live, 2, "add x2, x2, x2");
    const LineTableEntry& bne = live.state().lines[3];
    out.require(bne.imm_full == -8, "backward offset is not -8 after the insert");
    out.require(bne.address == 8u, "branch word did not move to 0x8");
    std::vector<std::uint32_t> words;
    for (std::uint32_t a = 0; a < live.state().image.text_size(); a += 4) {
      words.push_back(*live.state().image.read_word(a));
    }
    out.require(words == testing::load_hex_words("golden/programs/loop_after.hex"),
                "image differs from the reference assembler");
    out.require(matches_full(live), "backward case differs from full reassembly");
  }
  {
    LiveAssembler live("beq x0, x0, end\nnop\n\nend:\nnop");
    type_line(live, 2, "addi x5, x5, 1");
    out.require(live.state().lines[0].imm_full == 12, "forward offset is not 12 after the insert");
    out.require(matches_full(live), "forward case differs from full reassembly");
  }
  {
    LiveAssembler live("loop:\naddi x1, x1, -1\nbne x1, x0, loop\n");
    const std::uint32_t before = *live.state().image.read_word(4);
    const Delta d = live.apply(EditEvent::insert_char(3, 0, 'n'));
    out.require(d.counters.words_reencoded == 0 && *live.state().image.read_word(4) == before,
                "insert after the interval re-encoded the branch");
    out.require(matches_full(live), "after-interval case differs from full reassembly");
  }
  {
    LiveAssembler live("\nloop:\naddi x1, x1, -1\nbne x1, x0, loop");
    const std::uint32_t before = *live.state().image.read_word(4);
    const Delta d = live.apply(EditEvent::insert_char(0, 0, 'n'));
    out.require(d.counters.words_reencoded == 0 && *live.state().image.read_word(8) == before,
                "insert before the interval re-encoded the branch");
    out.require(matches_full(live), "before-interval case differs from full reassembly");
  }
  out.detail << "backward -4 -> -8 with word moved 0x4 -> 0x8; forward 8 -> 12; "
                "insertions before and after the interval leave words unchanged";
}

struct Console {
  std::deque<std::int32_t> input;
  std::string output;
};

std::string run_fixture(const std::string& name, std::deque<std::int32_t> input, bool& halted) {
  const AssemblyState state = assemble_full(testing::read_text("fixtures/" + name));
  MachineState m = reset(state.image);
  Console c{std::move(input), {}};
  IoHooks hooks;
  hooks.write_text = [&](std::string_view t) { c.output += t; };
  hooks.read_integer = [&]() -> std::optional<std::int32_t> {
    if (c.input.empty()) return std::nullopt;
    const auto v = c.input.front();
    c.input.pop_front();
    return v;
  };
  run(m, hooks, 100000);
  halted = m.halted && !m.fault && state.diagnostics().empty();
  return c.output;
}

void simulator(Outcome& out) {
  struct Fixture {
    const char* file;
    std::deque<std::int32_t> input;
    const char* expected;
  };
  const std::vector<Fixture> fixtures = {
      {"sum.s", {}, "55"},
      {"hello.s", {}, "hello, world\n"},
      {"echo.s", {17, -4, 0}, "17-4"},
      {"div.s", {}, "-17"},  // -1 then 7
  };
  for (const auto& f : fixtures) {
    bool halted = false;
    const std::string got = run_fixture(f.file, f.input, halted);
    out.require(halted && got == f.expected, std::string(f.file) + " printed '" + got + "'");
  }
  constexpr int kSequences = 10000;
  std::uint64_t steps = 0;
  for (int seed = 0; seed < kSequences; ++seed) {
    testing::RandomProgram gen(static_cast<std::uint64_t>(seed));
    MachineState m = reset(gen.image(32));
    gen.seed_registers(m);
    IoHooks hooks;
    for (int i = 0; i < 32 && !m.halted; ++i) {
      const MachineState before = m;
      const StepResult r = step(m, hooks);
      ++steps;
      if (m.regs[0] != 0) out.require(false, "x0 changed in sequence " + std::to_string(seed));
      if (!(testing::replay(before, m, r.changes) == m)) {
        out.require(false, "change-set replay mismatch in sequence " + std::to_string(seed));
      }
    }
  }
  out.detail << "sum=55, string print, read-echo, div-by-zero conventions; " << kSequences
             << " random sequences (" << steps << " steps) keep x0 = 0 and replay exactly";
}

void explainers(Outcome& out) {
  std::vector<std::uint32_t> ints = {0, 1, 0x7FFFFFFFu, 0x80000000u, 0x80000001u, 0xFFFFFFFFu,
                                     0xFFFFFF87u, 0xFFFFFFFEu, 0x00000080u, 0x0000FFFFu};
  std::mt19937 rng(99);
  for (int i = 0; i < 100000; ++i) ints.push_back(rng());
  std::size_t int_ok = 0;
  for (std::uint32_t w : ints) {
    const IntExplanation e = explain_signed_int(w);
    const bool ok = e.decimal_value == std::bit_cast<std::int32_t>(w) && e.sign_bit == static_cast<int>(w >> 31);
    if (ok) ++int_ok;
  }
  out.require(int_ok == ints.size(), "integer explanation differs from native reinterpretation");

  std::vector<std::uint64_t> doubles = {0,
                                        0x8000000000000000ull,
                                        1,
                                        0x000FFFFFFFFFFFFFull,
                                        0x0010000000000000ull,
                                        0x3FF0000000000000ull,
                                        0x7FEFFFFFFFFFFFFFull,
                                        0x7FF0000000000000ull,
                                        0xFFF0000000000000ull,
                                        std::bit_cast<std::uint64_t>(0.1),
                                        std::bit_cast<std::uint64_t>(-2.5)};
  std::mt19937_64 rng64(98);
  for (int i = 0; i < 100000; ++i) doubles.push_back(rng64());
  std::size_t samples = 0;
  std::size_t dbl_ok = 0;
  for (std::uint64_t w : doubles) {
    const DoubleExplanation e = explain_double(w);
    if (e.value_class == DoubleClass::kNaN) continue;
    ++samples;
    if (std::bit_cast<std::uint64_t>(e.decimal_value) == w) ++dbl_ok;
  }
  out.require(dbl_ok == samples, "double explanation does not bit-cast back");
  out.detail << int_ok << "/" << ints.size() << " integers match; " << dbl_ok << "/" << samples
             << " non-NaN doubles bit-cast back losslessly";
}

}  // namespace
}  // namespace rvasm

int main() {
  const std::vector<std::pair<const char*, rvasm::Check>> checks = {
      {"incremental-full-equivalence", rvasm::equivalence},
      {"bench-trend", rvasm::bench_trend},
      {"complexity-counters", rvasm::complexity},
      {"encoding-golden", rvasm::golden},
      {"insertion-crossing", rvasm::crossing},
      {"simulator-fixtures", rvasm::simulator},
      {"explainers", rvasm::explainers},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    rvasm::Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      check(outcome);
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%.1fs): %s\n", outcome.pass ? "PASS" : "FAIL", name, seconds,
                outcome.detail.str().c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  return failed;
}
