#include "rvasm/session.hpp"

#include <algorithm>
#include <charconv>

#include "rvasm/disassembler.hpp"
#include "rvasm/error.hpp"
#include "rvasm/explain.hpp"

namespace rvasm {

using nlohmann::json;

namespace {

json optional_number(const std::optional<std::uint32_t>& v) {
  return v ? json(*v) : json(nullptr);
}

std::uint64_t parse_word(const json& value) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v < 0) throw Error(ErrorCode::kBadRequest, "word must not be negative");
    return static_cast<std::uint64_t>(v);
  }
  if (value.is_string()) {
    std::string_view s = value.get_ref<const std::string&>();
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
      s.remove_prefix(2);
      base = 16;
    }
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
  }
  throw Error(ErrorCode::kBadRequest, "expected a word as a number or hex string");
}

}  // namespace

json to_json(const Diagnostic& d) {
  return {{"line", d.line_number},
          {"start", d.column_span.start},
          {"end", d.column_span.end},
          {"code", error_code_name(d.code)},
          {"message", d.message}};
}

json to_json(const ChangeSet& c) {
  return {{"registers", c.registers_written},
          {"memory", c.memory_bytes_written},
          {"pc_before", c.pc_before},
          {"pc_after", c.pc_after}};
}

json to_json(const Fault& f) {
  return {{"kind", fault_kind_name(f.kind)},
          {"pc", f.pc},
          {"address", f.address},
          {"message", f.message}};
}

json to_json(const Delta& d) {
  return {{"class", edit_class_name(d.edit_class.tag)},
          {"reason", fallback_reason_name(d.edit_class.reason)},
          {"full_reassembly", d.full_reassembly},
          {"image_changed", d.image_changed},
          {"text_size_change", d.text_size_change},
          {"lines_changed", d.lines_changed},
          {"line_inserted", d.line_inserted ? json(*d.line_inserted) : json(nullptr)},
          {"word_inserted_at", optional_number(d.word_inserted_at)},
          {"symbols_moved", d.symbols_moved},
          {"counters",
           {{"lines_assembled", d.counters.lines_assembled},
            {"line_entries_touched", d.counters.line_entries_touched},
            {"symbols_scanned", d.counters.symbols_scanned},
            {"references_examined", d.counters.references_examined},
            {"bytes_moved", d.counters.bytes_moved},
            {"words_reencoded", d.counters.words_reencoded}}}};
}

json to_json(const ExecutionReport& r) {
  return {{"stop_reason", r.stop_reason ? json(stop_reason_name(*r.stop_reason)) : json(nullptr)},
          {"steps", r.steps},
          {"output", r.output},
          {"awaiting_input", r.awaiting_input},
          {"machine", r.machine}};
}

Session::Session(std::string id, std::string_view text, AssemblyMode mode)
    : id_(std::move(id)), live_(text, mode) {}

Delta Session::apply_edit(const EditEvent& event) {
  Delta delta = live_.apply(event);
  if (machine_) stale_ = true;
  suspended_.reset();
  return delta;
}

ExecutionReport Session::control(ControlCommand command, std::uint64_t max_steps,
                                 const AnimateSink& sink) {
  if (command == ControlCommand::kReset) {
    machine_ = reset(live_.state().image);
    stale_ = false;
    suspended_.reset();
    input_.clear();
    ExecutionReport report;
    report.machine = query_registers();
    return report;
  }
  if (!machine_) throw Error(ErrorCode::kNoMachine, "no machine yet; reset first");
  if (stale_) throw Error(ErrorCode::kStaleMachine, "the program changed; reset first");
  if (machine_->halted) throw Error(ErrorCode::kAlreadyHalted, "the machine has stopped; reset it");
  suspended_.reset();
  return execute(command, command == ControlCommand::kStep ? 1 : max_steps, sink);
}

ExecutionReport Session::execute(ControlCommand command, std::uint64_t max_steps,
                                 const AnimateSink& sink) {
  ExecutionReport report;
  stop_requested_ = false;
  IoHooks hooks;
  hooks.read_integer = [this]() -> std::optional<std::int32_t> {
    if (input_.empty()) return std::nullopt;
    const std::int32_t v = input_.front();
    input_.pop_front();
    return v;
  };
  hooks.write_text = [&report](std::string_view text) { report.output += text; };

  StepObserver observer = [&](const MachineState& m, const StepResult& r) {
    if (command == ControlCommand::kAnimate && sink) {
      sink(json{{"steps_executed", m.steps_executed},
                {"pc", m.pc},
                {"changes", to_json(r.changes)},
                {"regs", m.regs}});
    }
    return !stop_requested_.load();
  };
  const RunResult result = run(*machine_, hooks, max_steps, observer);
  report.stop_reason = result.reason;
  report.steps = result.steps;
  if (result.reason == StopReason::kAwaitingInput) {
    report.awaiting_input = true;
    suspended_ = Suspended{command, max_steps - result.steps};
  }
  report.machine = query_registers();
  return report;
}

std::optional<ExecutionReport> Session::provide_input(std::int32_t value,
                                                      const AnimateSink& sink) {
  input_.push_back(value);
  if (!suspended_ || !machine_ || stale_) return std::nullopt;
  const Suspended s = *suspended_;
  suspended_.reset();
  return execute(s.command, s.remaining, sink);
}

json Session::query_registers() const {
  if (!machine_) throw Error(ErrorCode::kNoMachine, "no machine yet; reset first");
  const MachineState& m = *machine_;
  return {{"pc", m.pc},
          {"regs", m.regs},
          {"changed", m.last_changes.registers_written},
          {"changed_memory", m.last_changes.memory_bytes_written},
          {"halted", m.halted},
          {"fault", m.fault ? to_json(*m.fault) : json(nullptr)},
          {"steps_executed", m.steps_executed},
          {"stale", stale_},
          {"awaiting_input", suspended_.has_value()}};
}

std::uint32_t Session::read_word(std::uint32_t address) const {
  if (machine_) {
    return Memory::in_range(address, 4) ? machine_->memory.load(address, 4) : 0;
  }
  std::uint32_t word = 0;
  for (int i = 0; i < 4; ++i) {
    word |= std::uint32_t{live_.state().image.read_byte(address + i).value_or(0)} << (8 * i);
  }
  return word;
}

namespace {

void check_range(std::uint32_t start, std::uint64_t bytes) {
  if (bytes > kMaxQueryBytes) {
    throw Error(ErrorCode::kRangeTooLarge,
                "at most " + std::to_string(kMaxQueryBytes) + " bytes per query");
  }
  if (start + bytes > 0x1'0000'0000ull) {
    throw Error(ErrorCode::kRangeTooLarge, "range passes the end of the address space");
  }
  if (start % 4 != 0 || bytes % 4 != 0) {
    throw Error(ErrorCode::kMisalignedRange, "start and length must be multiples of 4");
  }
}

}  // namespace

json Session::query_memory(std::uint32_t start, std::uint32_t length) const {
  check_range(start, length);
  json bytes = json::array();
  for (std::uint32_t a = start; a < start + length; a += 4) {
    const std::uint32_t w = read_word(a);
    for (int i = 0; i < 4; ++i) bytes.push_back((w >> (8 * i)) & 0xFF);
  }
  json changed = json::array();
  if (machine_) {
    for (std::uint32_t a : machine_->last_changes.memory_bytes_written) {
      if (a >= start && a - start < length) changed.push_back(a);
    }
  }
  return {{"start", start},
          {"length", length},
          {"source", machine_ ? "machine" : "image"},
          {"bytes", bytes},
          {"changed", changed}};
}

json Session::query_disassembly(std::uint32_t start, std::uint32_t count) const {
  check_range(start, std::uint64_t{count} * 4);
  json rows = json::array();
  for (const DisassemblyRow& row : disassemble_range(
           [this](std::uint32_t a) { return read_word(a); }, start, count)) {
    rows.push_back({{"address", row.address}, {"word", row.word}, {"text", row.text}});
  }
  return {{"start", start},
          {"rows", rows},
          {"pc", machine_ ? json(machine_->pc) : json(nullptr)}};
}

json Session::query_diagnostics() const {
  json out = json::array();
  for (const Diagnostic& d : live_.state().diagnostics()) out.push_back(to_json(d));
  return out;
}

json Session::query_symbols() const {
  const AssemblyState& state = live_.state();
  std::vector<const SymbolEntry*> symbols;
  for (const SymbolEntry& s : state.symbols) symbols.push_back(&s);
  std::sort(symbols.begin(), symbols.end(),
            [](const SymbolEntry* a, const SymbolEntry* b) { return a->label < b->label; });
  json out = json::array();
  for (const SymbolEntry* s : symbols) {
    std::vector<Reference> refs;
    for (const Reference& r : s->references) {
      if (!is_stale(state, *s, r)) refs.push_back(r);
    }
    if (!s->declaration_line && refs.empty()) continue;
    std::sort(refs.begin(), refs.end(), [](const Reference& a, const Reference& b) {
      return a.line_number != b.line_number ? a.line_number < b.line_number
                                            : a.address < b.address;
    });
    json jrefs = json::array();
    for (const Reference& r : refs) jrefs.push_back({{"line", r.line_number}, {"address", r.address}});
    out.push_back(
        {{"label", s->label},
         {"declaration_line", s->declaration_line ? json(*s->declaration_line) : json(nullptr)},
         {"address", optional_number(s->address)},
         {"segment", s->address ? json(s->segment == Segment::kText ? "text" : "data")
                                : json(nullptr)},
         {"references", jrefs}});
  }
  return out;
}

json Session::query_text() const {
  return {{"text", live_.document().text()}, {"lines", live_.document().line_count()}};
}

json Session::query_explain(const json& request) const {
  if (!request.is_object() || !request.contains("kind") || !request["kind"].is_string()) {
    throw Error(ErrorCode::kBadRequest, "explain needs a 'kind'");
  }
  const std::string kind = request["kind"];
  auto read_bytes = [&](std::uint32_t address, int count) {
    std::uint64_t v = 0;
    for (int i = 0; i < count; i += 4) {
      v |= std::uint64_t{read_word(address + static_cast<std::uint32_t>(i))} << (8 * i);
    }
    return v;
  };
  std::optional<std::uint64_t> word;
  if (request.contains("word")) {
    word = parse_word(request["word"]);
  } else if (request.contains("address")) {
    const std::uint64_t address = parse_word(request["address"]);
    if (address > 0xFFFF'FFFFull) throw Error(ErrorCode::kBadRequest, "address out of range");
    if (address % 4 != 0) throw Error(ErrorCode::kMisalignedRange, "address must be 4-aligned");
    word = read_bytes(static_cast<std::uint32_t>(address), kind == "double" ? 8 : 4);
  } else if (request.contains("line") && kind == "instruction") {
    if (!request["line"].is_number_integer()) throw Error(ErrorCode::kBadRequest, "bad line");
    const auto line = request["line"].get<std::int64_t>();
    const AssemblyState& state = live_.state();
    if (line < 0 || static_cast<std::uint64_t>(line) >= state.lines.size()) {
      throw Error(ErrorCode::kLineOutOfRange, "line " + std::to_string(line) + " is out of range");
    }
    const LineTableEntry& entry = state.lines[static_cast<std::size_t>(line)];
    if (!entry.instruction) {
      throw Error(ErrorCode::kUndecodable, "line " + std::to_string(line) + " holds no instruction");
    }
    word = *entry.instruction;
  } else {
    throw Error(ErrorCode::kBadRequest, "explain needs 'word', 'address' or 'line'");
  }

  if (kind == "instruction" || kind == "int") {
    if (*word > 0xFFFF'FFFFull) throw Error(ErrorCode::kBadRequest, "word exceeds 32 bits");
    const auto w = static_cast<std::uint32_t>(*word);
    return kind == "instruction" ? to_json(explain_instruction(w)) : to_json(explain_signed_int(w));
  }
  if (kind == "double") return to_json(explain_double(*word));
  throw Error(ErrorCode::kBadRequest, "unknown explain kind '" + kind + "'");
}

}  // namespace rvasm
