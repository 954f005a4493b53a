#include "rvasm/assembler.hpp"

#include "line_assembly.hpp"

namespace rvasm {
namespace detail {

LineTableEntry make_entry(ParsedLine parsed, int line_number) {
  LineTableEntry entry;
  entry.source_line_number = line_number;
  entry.kind = parsed.kind;
  entry.source_line = parsed.source_text.size() > kSourceLineMax
                          ? parsed.source_text.substr(0, kSourceLineMax)
                          : std::move(parsed.source_text);
  entry.parse_diagnostics = std::move(parsed.diagnostics);
  entry.diagnostics = entry.parse_diagnostics;
  entry.lowered = std::move(parsed.instruction);
  entry.label = std::move(parsed.label);
  if (entry.lowered) entry.mnemonic = entry.lowered->inst.spec->mnemonic;
  if (entry.kind == LineKind::kDataDirective && parsed.data) {
    entry.length = static_cast<std::uint32_t>(parsed.data->byte_length());
  }
  finish_entry(entry);
  return entry;
}

void finish_entry(LineTableEntry& entry) {
  entry.error = !entry.diagnostics.empty();
  if (entry.error) {
    entry.error_message = entry.diagnostics.front().message;
  } else {
    entry.error_message.reset();
  }
}

namespace {

void clear_fields(LineTableEntry& entry) {
  entry.format.reset();
  entry.opcode.reset();
  entry.funct7.reset();
  entry.funct3.reset();
  entry.rs1.reset();
  entry.rs2.reset();
  entry.rd.reset();
  entry.imm_full.reset();
  entry.imm_hi.reset();
  entry.imm_lo.reset();
}

void fill_fields(LineTableEntry& entry, const Instruction& inst, std::uint32_t word) {
  const InstructionSpec& spec = *inst.spec;
  entry.format = spec.format;
  entry.opcode = spec.opcode;
  entry.funct3 = spec.funct3;
  entry.funct7 = spec.funct7;
  switch (spec.format) {
    case Format::kR:
      entry.rd = inst.rd;
      entry.rs1 = inst.rs1;
      entry.rs2 = inst.rs2;
      break;
    case Format::kI:
      if (!spec.fixed_imm12) {
        entry.rd = inst.rd;
        entry.rs1 = inst.rs1;
      }
      entry.imm_full = spec.fixed_imm12 ? *spec.fixed_imm12 : inst.imm;
      entry.imm_lo = word >> 20;
      break;
    case Format::kS:
    case Format::kB:
      entry.rs1 = inst.rs1;
      entry.rs2 = inst.rs2;
      entry.imm_full = inst.imm;
      entry.imm_hi = word >> 25;
      entry.imm_lo = (word >> 7) & 0x1F;
      break;
    case Format::kU:
    case Format::kJ:
      entry.rd = inst.rd;
      entry.imm_full = inst.imm;
      entry.imm_hi = word >> 12;
      break;
  }
}

}  // namespace

void encode_entry(AssemblyState& state, LineTableEntry& entry, const SymbolEntry* symbol) {
  entry.diagnostics = entry.parse_diagnostics;
  clear_fields(entry);
  std::uint32_t word = kPlaceholderWord;
  const std::uint32_t address = *entry.address;

  if (entry.diagnostics.empty() && entry.lowered) {
    Instruction inst = entry.lowered->inst;
    bool resolved = true;
    if (const auto& target = entry.lowered->target) {
      if (target->absolute) {
        inst.imm = static_cast<std::int32_t>(*target->absolute - address);
      } else {
        if (symbol == nullptr || symbol->label != target->label) {
          symbol = find_symbol(std::as_const(state), target->label);
        }
        if (symbol == nullptr || !symbol->address) {
          entry.diagnostics.push_back(Diagnostic{entry.source_line_number, target->span,
                                                 ErrorCode::kUndefinedLabel,
                                                 "undefined label '" + target->label + "'"});
          resolved = false;
        } else {
          inst.imm = static_cast<std::int32_t>(*symbol->address - address);
        }
      }
    }
    if (resolved) {
      const ErrorCode code = try_encode(inst, word);
      if (code == ErrorCode::kNone) {
        fill_fields(entry, inst, word);
      } else {
        const Span span = entry.lowered->target
                              ? entry.lowered->target->span
                              : Span{0, static_cast<int>(entry.source_line.size())};
        entry.diagnostics.push_back(Diagnostic{
            entry.source_line_number, span, code,
            code == ErrorCode::kMisalignedTarget ? "branch/jump target is not 2-byte aligned"
                                                 : "branch/jump target out of range"});
        word = kPlaceholderWord;
      }
    }
  }
  entry.length = 4;
  entry.instruction = word;
  state.image.write_text_word(address, word);
  finish_entry(entry);
}

void place_instruction(AssemblyState& state, LineTableEntry& entry) {
  const SymbolEntry* symbol = nullptr;
  if (entry.parse_diagnostics.empty()) {
    if (const std::string* label = entry.target_label()) {
      symbol = &record_reference(state, *label, entry.source_line_number, *entry.address);
    } else if (entry.has_absolute_target()) {
      record_absolute_reference(state, entry.source_line_number, *entry.address);
    }
  }
  encode_entry(state, entry, symbol);
}

void renumber(LineTableEntry& entry, int line_number) {
  entry.source_line_number = line_number;
  for (Diagnostic& d : entry.diagnostics) d.line_number = line_number;
  for (Diagnostic& d : entry.parse_diagnostics) d.line_number = line_number;
}

}  // namespace detail

std::vector<std::string> split_lines(std::string_view source) {
  std::vector<std::string> lines;
  if (source.empty()) return lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = source.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(source.substr(start));
      break;
    }
    lines.emplace_back(source.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void resolve_references(AssemblyState& state, const SymbolEntry& symbol) {
  for (const Reference& ref : symbol.references) {
    ++state.counters.references_examined;
    if (is_stale(state, symbol, ref)) continue;
    detail::encode_entry(state, state.lines[ref.line_number], &symbol);
  }
}

AssemblyState assemble_full(std::string_view source) {
  return assemble_full(split_lines(source));
}

AssemblyState assemble_full(const std::vector<std::string>& lines) {
  AssemblyState state;
  state.lines.reserve(lines.size());
  std::uint32_t text_address = kTextBase;
  std::uint32_t data_address = kDataBase;
  std::vector<std::size_t> pending;  // declared labels awaiting an address

  auto bind_pending = [&](std::uint32_t address, Segment segment) {
    for (std::size_t index : pending) {
      SymbolEntry& symbol = state.symbols[index];
      symbol.address = address;
      symbol.segment = segment;
      resolve_references(state, symbol);
    }
    pending.clear();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_number = static_cast<int>(i);
    ++state.counters.lines_assembled;
    ParsedLine parsed = parse_line(lines[i], line_number);
    std::optional<DataItem> data = std::move(parsed.data);
    LineTableEntry entry = detail::make_entry(std::move(parsed), line_number);
    if (data) entry.length = static_cast<std::uint32_t>(data->byte_length());

    switch (entry.kind) {
      case LineKind::kEmpty:
      case LineKind::kComment:
        break;
      case LineKind::kLabelDecl: {
        if (entry.label.empty()) break;
        SymbolEntry* symbol = find_symbol(state, entry.label);
        if (symbol != nullptr && symbol->declaration_line) {
          Diagnostic d{line_number,
                       Span{0, static_cast<int>(entry.source_line.size())},
                       ErrorCode::kDuplicateLabel,
                       "label '" + entry.label + "' is already declared"};
          entry.parse_diagnostics.push_back(d);
          entry.diagnostics.push_back(std::move(d));
          detail::finish_entry(entry);
          break;
        }
        if (symbol == nullptr) {
          symbol = &state.symbols.emplace_back();
          symbol->label = entry.label;
        }
        symbol->declaration_line = line_number;
        pending.push_back(static_cast<std::size_t>(symbol - state.symbols.data()));
        break;
      }
      case LineKind::kDataDirective:
        entry.address = data_address;
        bind_pending(data_address, Segment::kData);
        if (data) {
          state.image.append_data(data->bytes);
          data_address += static_cast<std::uint32_t>(data->byte_length());
        }
        break;
      case LineKind::kMeta:
      case LineKind::kInstruction: {
        entry.address = text_address;
        state.image.append_text_word(kPlaceholderWord);
        bind_pending(text_address, Segment::kText);
        detail::place_instruction(state, entry);
        text_address += 4;
        break;
      }
    }
    state.lines.push_back(std::move(entry));
  }
  bind_pending(text_address, Segment::kText);
  return state;
}

}  // namespace rvasm
