#include "rvasm/state_dump.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include <nlohmann/json.hpp>

namespace rvasm {

namespace {

std::string hex32(std::uint32_t value) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", value);
  return buf;
}

template <typename T>
std::string opt_hex(const std::optional<T>& value) {
  return value ? hex32(static_cast<std::uint32_t>(*value)) : "-";
}

template <typename T>
std::string opt_dec(const std::optional<T>& value) {
  return value ? std::to_string(static_cast<std::int64_t>(*value)) : "-";
}

std::string quoted(const std::string& text) {
  return nlohmann::json(text).dump(-1, ' ', true, nlohmann::json::error_handler_t::replace);
}

void dump_bytes(std::string& out, const char* name, std::uint32_t base,
                const std::vector<std::uint8_t>& bytes) {
  out += name;
  out += ' ' + std::to_string(bytes.size()) + '\n';
  char buf[8];
  for (std::size_t i = 0; i < bytes.size(); i += 16) {
    out += hex32(base + static_cast<std::uint32_t>(i)).substr(2) + ':';
    for (std::size_t j = i; j < std::min(i + 16, bytes.size()); ++j) {
      std::snprintf(buf, sizeof buf, " %02x", bytes[j]);
      out += buf;
    }
    out += '\n';
  }
}

void dump_line(std::string& out, const LineTableEntry& e) {
  out += std::to_string(e.source_line_number) + ' ' + std::string(line_kind_name(e.kind)) +
         " addr=" + opt_hex(e.address) + " len=" + std::to_string(e.length) +
         " word=" + opt_hex(e.instruction) + " err=" + (e.error ? "1" : "0") +
         " src=" + quoted(e.source_line) + '\n';
  if (e.format) {
    out += "  fields fmt=" + std::string(1, format_letter(*e.format)) +
           " mnemonic=" + std::string(e.mnemonic.value_or("-")) + " opcode=" + opt_hex(e.opcode) +
           " funct3=" + opt_dec(e.funct3) + " funct7=" + opt_dec(e.funct7) +
           " rd=" + opt_dec(e.rd) + " rs1=" + opt_dec(e.rs1) + " rs2=" + opt_dec(e.rs2) +
           " imm=" + opt_dec(e.imm_full) + " imm_hi=" + opt_hex(e.imm_hi) +
           " imm_lo=" + opt_hex(e.imm_lo) + '\n';
  }
  for (const Diagnostic& d : e.diagnostics) {
    out += "  diag " + std::string(error_code_name(d.code)) + ' ' +
           std::to_string(d.column_span.start) + '-' + std::to_string(d.column_span.end) + ' ' +
           quoted(d.message) + '\n';
  }
}

void dump_refs(std::string& out, const AssemblyState& state, const SymbolEntry* symbol,
               std::vector<Reference> refs, bool observable) {
  if (observable) {
    std::erase_if(refs, [&](const Reference& r) { return is_stale(state, *symbol, r); });
    std::sort(refs.begin(), refs.end(), [](const Reference& a, const Reference& b) {
      return a.line_number != b.line_number ? a.line_number < b.line_number
                                            : a.address < b.address;
    });
  }
  for (const Reference& r : refs) {
    out += "  ref " + std::to_string(r.line_number) + ' ' + hex32(r.address);
    if (!observable && symbol != nullptr && is_stale(state, *symbol, r)) out += " stale";
    out += '\n';
  }
}

}  // namespace

std::string dump_state(const AssemblyState& state, DumpStyle style) {
  const bool observable = style == DumpStyle::kObservable;
  std::string out = observable ? "rvasm-state 1 observable\n" : "rvasm-state 1 complete\n";

  out += "lines " + std::to_string(state.lines.size()) + '\n';
  for (std::size_t i = 0; i < state.lines.size(); ++i) dump_line(out, state.lines[i]);

  std::vector<const SymbolEntry*> symbols;
  for (const SymbolEntry& s : state.symbols) {
    if (observable && !s.declaration_line &&
        std::all_of(s.references.begin(), s.references.end(),
                    [&](const Reference& r) { return is_stale(state, s, r); })) {
      continue;
    }
    symbols.push_back(&s);
  }
  if (observable) {
    std::sort(symbols.begin(), symbols.end(),
              [](const SymbolEntry* a, const SymbolEntry* b) { return a->label < b->label; });
  }
  out += "symbols " + std::to_string(symbols.size()) + '\n';
  for (const SymbolEntry* s : symbols) {
    out += s->label + " decl=" + opt_dec(s->declaration_line) + " addr=" + opt_hex(s->address) +
           " seg=" + (s->address ? (s->segment == Segment::kText ? "text" : "data") : "-") + '\n';
    dump_refs(out, state, s, s->references, observable);
  }
  if (!observable) {
    out += "absolute " + std::to_string(state.absolute_references.size()) + '\n';
    dump_refs(out, state, nullptr, state.absolute_references, false);
  }

  dump_bytes(out, "text", kTextBase, state.image.text_bytes());
  dump_bytes(out, "data", kDataBase, state.image.data_bytes());
  return out;
}

}  // namespace rvasm
