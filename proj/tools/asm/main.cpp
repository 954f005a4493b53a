#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "http_bridge.hpp"
#include "rvasm/assembler.hpp"
#include "rvasm/bench.hpp"
#include "rvasm/disassembler.hpp"
#include "rvasm/error.hpp"
#include "rvasm/explain.hpp"
#include "rvasm/protocol.hpp"
#include "rvasm/simulator.hpp"
#include "rvasm/state_dump.hpp"
#include "tcp_server.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitFault = 2;
constexpr int kExitStepLimit = 3;
constexpr int kExitUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << data;
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

std::uint64_t parse_number(const std::string& text) {
  std::size_t used = 0;
  const std::uint64_t v = std::stoull(text, &used, 0);
  if (used != text.size()) throw std::invalid_argument("bad number '" + text + "'");
  return v;
}

// Prints diagnostics as file:line:col and returns their count.
std::size_t report_diagnostics(const std::string& file, const rvasm::AssemblyState& state) {
  const auto diagnostics = state.diagnostics();
  for (const auto& d : diagnostics) {
    std::cerr << file << ':' << d.line_number + 1 << ':' << d.column_span.start + 1
              << ": error " << rvasm::error_code_name(d.code) << ": " << d.message << '\n';
  }
  return diagnostics.size();
}

int cmd_build(const std::string& file, const std::string& dump_path, const std::string& bin_path) {
  const auto state = rvasm::assemble_full(read_file(file));
  const std::size_t errors = report_diagnostics(file, state);
  if (!dump_path.empty()) write_file(dump_path, rvasm::dump_state(state));
  if (!bin_path.empty()) {
    const auto& bytes = state.image.text_bytes();
    write_file(bin_path, std::string(bytes.begin(), bytes.end()));
  }
  std::cout << "text " << state.image.text_size() << " bytes, data " << state.image.data_size()
            << " bytes, " << errors << " diagnostic(s)\n";
  return errors == 0 ? kExitOk : kExitDiagnostics;
}

std::string describe_changes(const rvasm::MachineState& m, const rvasm::ChangeSet& c) {
  std::ostringstream out;
  for (int r : c.registers_written) {
    out << ' ' << rvasm::abi_name(r) << '=' << hex32(m.regs[static_cast<std::size_t>(r)]);
  }
  for (std::uint32_t a : c.memory_bytes_written) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " [0x%08x]=0x%02x", a, m.memory.load_byte(a));
    out << buf;
  }
  out << " pc->" << hex32(c.pc_after);
  return out.str();
}

int cmd_run(const std::string& file, std::uint64_t max_steps, bool trace) {
  const auto state = rvasm::assemble_full(read_file(file));
  if (report_diagnostics(file, state) != 0) return kExitDiagnostics;
  auto machine = rvasm::reset(state.image);
  rvasm::IoHooks hooks;
  hooks.write_text = [](std::string_view text) { std::cout << text << std::flush; };
  hooks.read_integer = []() -> std::optional<std::int32_t> {
    long long v;
    if (std::cin >> v) return static_cast<std::int32_t>(v);
    return std::nullopt;
  };
  rvasm::StepObserver observer;
  if (trace) {
    observer = [](const rvasm::MachineState& m, const rvasm::StepResult& r) {
      const std::uint32_t pc = r.changes.pc_before;
      const std::uint32_t word = m.memory.load(pc, 4);
      std::cerr << hex32(pc) << ' ' << hex32(word) << ' ' << rvasm::disassemble_word(word, pc)
                << " |" << describe_changes(m, r.changes) << '\n';
      return true;
    };
  }
  const auto result = rvasm::run(machine, hooks, max_steps, observer);
  std::cout << std::flush;
  std::cerr << "stopped: " << rvasm::stop_reason_name(result.reason) << " after "
            << result.steps << " step(s)";
  if (machine.fault) {
    std::cerr << ": " << rvasm::fault_kind_name(machine.fault->kind) << " at "
              << hex32(machine.fault->pc) << " (" << machine.fault->message << ')';
  }
  std::cerr << '\n';
  switch (result.reason) {
    case rvasm::StopReason::kHalted: return kExitOk;
    case rvasm::StopReason::kFault: return kExitFault;
    case rvasm::StopReason::kAwaitingInput:
      std::cerr << "input ended before the program read an integer\n";
      return kExitFault;
    case rvasm::StopReason::kStepLimit: return kExitStepLimit;
  }
  return kExitOk;
}

int cmd_disasm(const std::string& file, std::uint64_t base) {
  const std::string bytes = read_file(file);
  if (base % 4 != 0 || base > 0xFFFF'FFFFull) throw std::invalid_argument("bad base address");
  for (std::size_t i = 0; i + 4 <= bytes.size(); i += 4) {
    std::uint32_t word = 0;
    for (int b = 0; b < 4; ++b) {
      word |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[i + b])) << (8 * b);
    }
    const auto address = static_cast<std::uint32_t>(base + i);
    std::cout << hex32(address) << ": " << hex32(word) << "  "
              << rvasm::disassemble_word(word, address) << '\n';
  }
  if (bytes.size() % 4 != 0) std::cerr << "ignored " << bytes.size() % 4 << " trailing byte(s)\n";
  return kExitOk;
}

int cmd_explain(const std::string& instr, const std::string& integer, const std::string& dbl) {
  json out;
  if (!instr.empty()) {
    out = rvasm::to_json(rvasm::explain_instruction(static_cast<std::uint32_t>(parse_number(instr))));
  } else if (!integer.empty()) {
    out = rvasm::to_json(rvasm::explain_signed_int(static_cast<std::uint32_t>(parse_number(integer))));
  } else {
    out = rvasm::to_json(rvasm::explain_double(parse_number(dbl)));
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_bench(const std::vector<int>& sizes, const std::string& csv_path, bool counters) {
  const auto report = rvasm::run_benchmark(sizes.empty() ? rvasm::default_bench_sizes() : sizes);
  if (!csv_path.empty()) write_file(csv_path, rvasm::bench_csv(report));
  std::cout << rvasm::bench_summary(report, counters);
  return kExitOk;
}

// Shorthand commands for the interactive loop; anything starting with '{'
// is sent verbatim as a protocol message.
json repl_request(const std::string& line, int id) {
  if (!line.empty() && line.front() == '{') return json::parse(line);
  std::istringstream in(line);
  std::string word;
  in >> word;
  json r = {{"v", rvasm::kProtocolVersion}, {"id", id}};
  auto number = [&](const char* what) {
    std::string token;
    if (!(in >> token)) throw std::invalid_argument(std::string("missing ") + what);
    return parse_number(token);
  };
  if (word == "reset" || word == "step" || word == "stop") {
    r["type"] = "control";
    r["command"] = word;
  } else if (word == "run" || word == "animate") {
    r["type"] = "control";
    r["command"] = word;
    std::string token;
    if (in >> token) r["max_steps"] = parse_number(token);
  } else if (word == "mode") {
    std::string mode;
    in >> mode;
    r["type"] = "control";
    r["command"] = "set_mode";
    r["mode"] = mode;
  } else if (word == "regs" || word == "diag" || word == "symbols" || word == "text") {
    r["type"] = "query";
    r["pane"] = word == "regs" ? "registers" : word == "diag" ? "diagnostics" : word;
  } else if (word == "mem") {
    r["type"] = "query";
    r["pane"] = "memory";
    r["start"] = number("start");
    r["length"] = number("length");
  } else if (word == "disasm") {
    r["type"] = "query";
    r["pane"] = "disassembly";
    r["start"] = number("start");
    r["count"] = number("count");
  } else if (word == "explain") {
    r["type"] = "query";
    r["pane"] = "explain";
    r["explain"] = {{"kind", "instruction"}, {"line", number("line")}};
  } else if (word == "input") {
    std::string token;
    in >> token;
    r["type"] = "input";
    r["value"] = std::stoll(token, nullptr, 0);
  } else if (word == "newline") {
    r["type"] = "edit";
    r["event"] = {{"op", "insert_newline"}, {"line", number("line")}, {"col", number("col")}};
  } else if (word == "delete") {
    r["type"] = "edit";
    r["event"] = {{"op", "delete_range"},     {"start_line", number("start line")},
                  {"start_col", number("start col")}, {"end_line", number("end line")},
                  {"end_col", number("end col")}};
  } else {
    throw std::invalid_argument("unknown command '" + word + "'");
  }
  return r;
}

constexpr const char* kReplHelp =
    "commands: reset | step | run [N] | animate [N] | stop | mode full|incremental\n"
    "          regs | diag | symbols | text | mem START LEN | disasm START COUNT\n"
    "          explain LINE | input N | type LINE COL TEXT | newline LINE COL\n"
    "          delete L1 C1 L2 C2 | {json request} | help | quit\n";

int cmd_repl(const std::string& file, const std::string& mode) {
  rvasm::Endpoint endpoint([](const json& event) { std::cout << event.dump() << '\n'; });
  int id = 0;
  auto send = [&](const json& request) { std::cout << endpoint.handle(request).dump() << '\n'; };
  send({{"v", rvasm::kProtocolVersion},
        {"id", ++id},
        {"type", "open"},
        {"text", file.empty() ? std::string() : read_file(file)},
        {"mode", mode}});
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    line.erase(0, first);
    if (line == "quit" || line == "exit") break;
    if (line == "help") {
      std::cout << kReplHelp;
      continue;
    }
    try {
      if (line.rfind("type ", 0) == 0) {
        // type LINE COL TEXT: one insert_char per character
        std::istringstream in(line.substr(5));
        std::uint64_t l = 0;
        std::uint64_t c = 0;
        in >> l >> c;
        in.get();
        std::string text;
        std::getline(in, text);
        for (char ch : text) {
          send({{"v", rvasm::kProtocolVersion},
                {"id", ++id},
                {"type", "edit"},
                {"event", {{"op", "insert_char"}, {"line", l}, {"col", c++}, {"ch", std::string(1, ch)}}}});
        }
        continue;
      }
      send(repl_request(line, ++id));
    } catch (const std::exception& e) {
      std::cout << "error: " << e.what() << '\n';
    }
  }
  return kExitOk;
}

int cmd_serve(std::uint16_t port, int http_port) {
  rvasm::server::TcpServer tcp(port);
  std::cout << "ndjson listening on 127.0.0.1:" << tcp.port() << std::endl;
  std::thread http_thread;
  rvasm::server::HttpBridge http;
  if (http_port >= 0) {
    const int bound = http.bind(static_cast<std::uint16_t>(http_port));
    if (bound < 0) throw std::runtime_error("cannot bind the HTTP port");
    std::cout << "http listening on 127.0.0.1:" << bound << std::endl;
    http_thread = std::thread([&] { http.listen(); });
  }
  tcp.serve();
  http.stop();
  if (http_thread.joinable()) http_thread.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RV32IM assembler and simulator"};
  app.require_subcommand(1);

  std::string file;
  std::string dump_path;
  std::string bin_path;
  auto* build = app.add_subcommand("build", "Assemble a source file");
  build->add_option("file", file, "Assembly source")->required();
  build->add_option("--dump-state", dump_path, "Write the assembly state dump");
  build->add_option("--emit-bin", bin_path, "Write the text segment as little-endian bytes");

  std::uint64_t max_steps = 1'000'000;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Assemble and execute a source file");
  run->add_option("file", file, "Assembly source")->required();
  run->add_option("--max-steps", max_steps, "Instruction limit");
  run->add_flag("--trace", trace, "Print one line per executed instruction to stderr");

  std::string base_text = "0";
  auto* disasm = app.add_subcommand("disasm", "Disassemble a binary of instruction words");
  disasm->add_option("file", file, "Binary file")->required();
  disasm->add_option("--base", base_text, "Address of the first word");

  std::string instr;
  std::string integer;
  std::string dbl;
  auto* explain = app.add_subcommand("explain", "Break down a value as JSON");
  auto* g = explain->add_option_group("value");
  g->add_option("--instr", instr, "32-bit instruction word");
  g->add_option("--int", integer, "32-bit two's-complement integer");
  g->add_option("--double", dbl, "64-bit IEEE 754 double bit pattern");
  g->require_option(1);

  std::vector<int> sizes;
  std::string csv_path;
  bool counters = false;
  auto* bench = app.add_subcommand("bench", "Compare full and incremental assembly");
  bench->add_option("--sizes", sizes, "Program sizes in lines")->delimiter(',');
  bench->add_option("--csv", csv_path, "Write results as CSV");
  bench->add_flag("--counters", counters, "Print work counters");

  std::string mode = "incremental";
  auto* repl = app.add_subcommand("repl", "Interactive session over the protocol");
  repl->add_option("file", file, "Assembly source");
  repl->add_option("--mode", mode, "full or incremental")
      ->check(CLI::IsMember({"full", "incremental"}));

  std::uint16_t port = 7070;
  int http_port = -1;
  auto* serve = app.add_subcommand("serve", "Serve sessions over TCP (NDJSON) and HTTP");
  serve->add_option("--port", port, "NDJSON port (0 picks a free port)");
  serve->add_option("--http-port", http_port, "Also serve the HTTP bridge on this port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(file, dump_path, bin_path);
    if (*run) return cmd_run(file, max_steps, trace);
    if (*disasm) return cmd_disasm(file, parse_number(base_text));
    if (*explain) return cmd_explain(instr, integer, dbl);
    if (*bench) return cmd_bench(sizes, csv_path, counters);
    if (*repl) return cmd_repl(file, mode);
    if (*serve) return cmd_serve(port, http_port);
  } catch (const rvasm::Error& e) {
    std::cerr << "error " << rvasm::error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
