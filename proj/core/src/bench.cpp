#include "rvasm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "rvasm/assembler.hpp"

namespace rvasm {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kBlock = 50;
constexpr std::uint32_t kSeed = 20240611;

double micros(Clock::duration d) {
  return std::chrono::duration<double, std::micro>(d).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// Document with an empty line opened at n/2, ready for typing.
struct Setup {
  Document document;
  AssemblyState state;
  int line = 0;
};

Setup prepare(int n) {
  Setup s;
  s.document = Document(generate_program(n));
  s.state = assemble_full(s.document.lines());
  s.line = n / 2;
  apply_edit(s.state, s.document, EditEvent::insert_newline(s.line, 0));
  return s;
}

struct IncrementalRun {
  double micros = 0;
  OpCounters total;
  OpCounters first;
  OpCounters last;
};

IncrementalRun type_instruction(Setup& s) {
  IncrementalRun run;
  const std::string text = kBenchInstruction;
  Clock::duration elapsed{};
  for (std::size_t i = 0; i < text.size(); ++i) {
    const EditEvent event = EditEvent::insert_char(s.line, static_cast<int>(i), text[i]);
    auto t0 = Clock::now();
    const EditClass edit_class = classify_edit(s.state, s.document, event);
    elapsed += Clock::now() - t0;
    s.document.apply(event);
    t0 = Clock::now();
    const Delta delta = update_state(s.state, s.document, event, edit_class);
    elapsed += Clock::now() - t0;
    run.total = run.total + delta.counters;
    if (i == 0) run.first = delta.counters;
    run.last = delta.counters;
  }
  run.micros = micros(elapsed);
  return run;
}

std::vector<std::string> final_lines(int n) {
  Document document(generate_program(n));
  const int line = n / 2;
  document.apply(EditEvent::insert_newline(line, 0));
  document.apply(EditEvent::paste(line, 0, kBenchInstruction));
  return document.lines();
}

}  // namespace

std::string generate_program(int n) {
  std::mt19937 rng(kSeed);
  static constexpr const char* kOps[] = {"add", "sub", "xor", "or", "and", "sll", "mul"};
  static constexpr const char* kImmOps[] = {"addi", "xori", "ori", "andi", "slti"};
  std::string out;
  auto line = [&](const std::string& text) {
    if (!out.empty()) out += '\n';
    out += text;
  };
  auto reg = [&] { return "x" + std::to_string(6 + rng() % 26); };
  int k = 0;
  auto arithmetic = [&] {
    if (k++ % 2 == 1) {
      line(std::string(kOps[rng() % 7]) + ' ' + reg() + ", " + reg() + ", " + reg());
    } else {
      const int imm = static_cast<int>(rng() % 4096) - 2048;
      const char* op = k == 1 ? "addi" : kImmOps[rng() % 5];
      line(std::string(op) + ' ' + reg() + ", " + reg() + ", " +
           std::to_string(imm));
    }
  };
  const int blocks = n / kBlock;
  for (int b = 0; b < blocks; ++b) {
    const std::string label = "L" + std::to_string(b);
    line(label + ":");
    for (int i = 0; i < kBlock - 2; ++i) arithmetic();
    line("bne x5, x0, " + label);
  }
  for (int i = blocks * kBlock; i < n; ++i) arithmetic();
  return out;
}

std::vector<int> default_bench_sizes() {
  return {1, 10, 100, 1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000};
}

double time_insertion(int n, AssemblyMode mode, const BenchOptions& options,
                      OpCounters* counters) {
  std::vector<double> samples;
  if (mode == AssemblyMode::kFull) {
    const std::vector<std::string> lines = final_lines(n);
    for (int r = 0; r < options.warmup + options.repetitions; ++r) {
      const auto t0 = Clock::now();
      AssemblyState state = assemble_full(lines);
      const auto t1 = Clock::now();
      if (r >= options.warmup) samples.push_back(micros(t1 - t0));
      if (counters != nullptr) *counters = state.counters;
    }
  } else {
    for (int r = 0; r < options.warmup + options.repetitions; ++r) {
      Setup setup = prepare(n);
      const IncrementalRun run = type_instruction(setup);
      if (r >= options.warmup) samples.push_back(run.micros);
      if (counters != nullptr) *counters = run.total;
    }
  }
  return median(std::move(samples));
}

InsertionCounters insertion_counters(int n) {
  InsertionCounters out;
  Setup setup = prepare(n);
  const IncrementalRun run = type_instruction(setup);
  out.line_insert = run.first;
  out.line_change = run.last;
  out.full = assemble_full(final_lines(n)).counters;
  return out;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) return fit;
  fit.degenerate = false;
  fit.c1 = sxy / sxx;
  fit.c2 = my - fit.c1 * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.c1 * x[i] + fit.c2);
    ss_res += e * e;
  }
  fit.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

BenchReport run_benchmark(const std::vector<int>& sizes, const BenchOptions& options) {
  BenchReport report;
  const double keystrokes = static_cast<double>(std::string_view(kBenchInstruction).size());
  // Repetitions are interleaved across sizes so that slow phases of the
  // host spread over all sizes instead of a contiguous run of them.
  std::vector<std::vector<std::string>> texts;
  for (int n : sizes) texts.push_back(final_lines(n));
  std::vector<std::vector<double>> full_samples(sizes.size()), incr_samples(sizes.size());
  for (int r = 0; r < options.warmup + options.repetitions; ++r) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto t0 = Clock::now();
      const AssemblyState state = assemble_full(texts[i]);
      const auto t1 = Clock::now();
      Setup setup = prepare(sizes[i]);
      const IncrementalRun run = type_instruction(setup);
      if (r >= options.warmup) {
        full_samples[i].push_back(micros(t1 - t0));
        incr_samples[i].push_back(run.micros);
      }
    }
  }
  std::vector<double> xs, full, incr;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int n = sizes[i];
    BenchRow row;
    row.lines = n;
    row.full_us_per_keystroke = median(full_samples[i]);
    row.full_us = row.full_us_per_keystroke * keystrokes;
    row.incremental_us = median(incr_samples[i]);
    row.incr_us_per_keystroke = row.incremental_us / keystrokes;
    row.counters = insertion_counters(n);
    xs.push_back(n);
    full.push_back(row.full_us_per_keystroke);
    incr.push_back(row.incremental_us);
    report.rows.push_back(row);
  }
  report.full_fit = fit_linear(xs, full);
  report.incremental_fit = fit_linear(xs, incr);
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::string out =
      "# engine time in microseconds (median); document editing excluded; "
      "full_us = one full assembly per keystroke over the whole insertion\n"
      "lines,full_us,incremental_us,full_us_per_keystroke,incr_us_per_keystroke\n";
  char buf[160];
  for (const BenchRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.3f,%.3f,%.3f,%.3f\n", r.lines, r.full_us,
                  r.incremental_us, r.full_us_per_keystroke, r.incr_us_per_keystroke);
    out += buf;
  }
  return out;
}

std::string bench_summary(const BenchReport& report, bool with_counters) {
  std::string out;
  char buf[256];
  auto fit_line = [&](const char* name, const LinearFit& f) {
    if (f.degenerate) {
      std::snprintf(buf, sizeof buf, "%s fit: degenerate (fewer than two sizes)\n", name);
    } else {
      std::snprintf(buf, sizeof buf, "%s fit: t = %.6g * n + %.6g us, R^2 = %.4f\n", name, f.c1,
                    f.c2, f.r2);
    }
    out += buf;
  };
  fit_line("full", report.full_fit);
  fit_line("incremental", report.incremental_fit);
  if (!report.rows.empty()) {
    const BenchRow& last = report.rows.back();
    std::snprintf(buf, sizeof buf, "speedup at n=%d: %.1fx\n", last.lines,
                  last.incremental_us > 0 ? last.full_us / last.incremental_us : 0.0);
    out += buf;
  }
  if (with_counters) {
    out += "lines,mode,lines_assembled,line_entries_touched,symbols_scanned,"
           "references_examined,bytes_moved,words_reencoded\n";
    auto row = [&](int n, const char* mode, const OpCounters& c) {
      std::snprintf(buf, sizeof buf, "%d,%s,%llu,%llu,%llu,%llu,%llu,%llu\n", n, mode,
                    static_cast<unsigned long long>(c.lines_assembled),
                    static_cast<unsigned long long>(c.line_entries_touched),
                    static_cast<unsigned long long>(c.symbols_scanned),
                    static_cast<unsigned long long>(c.references_examined),
                    static_cast<unsigned long long>(c.bytes_moved),
                    static_cast<unsigned long long>(c.words_reencoded));
      out += buf;
    };
    for (const BenchRow& r : report.rows) {
      row(r.lines, "line_insert", r.counters.line_insert);
      row(r.lines, "line_change", r.counters.line_change);
      row(r.lines, "full", r.counters.full);
    }
  }
  return out;
}

}  // namespace rvasm
