#ifndef RVASM_BENCH_HPP_
#define RVASM_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rvasm/incremental.hpp"

// Timing of a single-instruction insertion in the middle of synthetic
// programs, under both assembler modes.
namespace rvasm {

inline constexpr const char* kBenchInstruction = "addi x1, x2, -121";

// Exactly n lines (n >= 1): blocks of 50 lines, each a label, 48 seeded
// arithmetic instructions and a backward branch to the label. A trailing
// partial block holds arithmetic only.
std::string generate_program(int n);

std::vector<int> default_bench_sizes();

struct BenchOptions {
  int repetitions = 31;
  int warmup = 3;
};

// Median engine time in microseconds for inserting kBenchInstruction at
// line n/2. Incremental mode times all keystrokes of the typed line (one
// line insert and the line changes that follow); full mode times one
// assembly of the final text. `counters` receives the work of one run.
double time_insertion(int n, AssemblyMode mode, const BenchOptions& options = {},
                      OpCounters* counters = nullptr);

// Work counters of the incremental insertion, split by keystroke class.
struct InsertionCounters {
  OpCounters line_insert;  // the first keystroke
  OpCounters line_change;  // one later keystroke (the last)
  OpCounters full;         // one full assembly of the final text
};

InsertionCounters insertion_counters(int n);

struct BenchRow {
  int lines = 0;
  double full_us = 0;         // one reassembly per keystroke, whole insertion
  double incremental_us = 0;  // whole insertion
  double full_us_per_keystroke = 0;
  double incr_us_per_keystroke = 0;
  InsertionCounters counters;
};

struct LinearFit {
  double c1 = 0;  // slope
  double c2 = 0;  // intercept
  double r2 = 0;
  bool degenerate = true;  // fewer than two distinct sizes
};

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct BenchReport {
  std::vector<BenchRow> rows;
  LinearFit full_fit;         // full per-keystroke time against n
  LinearFit incremental_fit;  // incremental time against n
};

BenchReport run_benchmark(const std::vector<int>& sizes, const BenchOptions& options = {});

std::string bench_csv(const BenchReport& report);
std::string bench_summary(const BenchReport& report, bool with_counters);

}  // namespace rvasm

#endif  // RVASM_BENCH_HPP_
