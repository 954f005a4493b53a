#include "rvasm/program.hpp"

#include <algorithm>
#include <utility>

namespace rvasm {

LineTable::LineTable(const LineTable& other) {
  rows_.reserve(other.rows_.size());
  for (const auto& row : other.rows_) rows_.push_back(std::make_unique<LineTableEntry>(*row));
}

LineTable& LineTable::operator=(const LineTable& other) {
  if (this != &other) {
    LineTable copy(other);
    rows_ = std::move(copy.rows_);
  }
  return *this;
}

void LineTable::push_back(LineTableEntry entry) {
  rows_.push_back(std::make_unique<LineTableEntry>(std::move(entry)));
}

void LineTable::insert(std::size_t index, LineTableEntry entry) {
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(index),
               std::make_unique<LineTableEntry>(std::move(entry)));
}

std::optional<std::uint32_t> MachineImage::read_word(std::uint32_t address) const {
  const std::vector<std::uint8_t>* seg = nullptr;
  std::uint32_t offset = 0;
  if (address >= kDataBase && address - kDataBase + 4 <= data_.size()) {
    seg = &data_;
    offset = address - kDataBase;
  } else if (address < kDataBase && static_cast<std::size_t>(address) + 4 <= text_.size()) {
    seg = &text_;
    offset = address;
  } else {
    return std::nullopt;
  }
  const auto* p = seg->data() + offset;
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

std::optional<std::uint8_t> MachineImage::read_byte(std::uint32_t address) const {
  if (address >= kDataBase) {
    const std::uint32_t offset = address - kDataBase;
    if (offset < data_.size()) return data_[offset];
    return std::nullopt;
  }
  if (address < text_.size()) return text_[address];
  return std::nullopt;
}

void MachineImage::write_text_word(std::uint32_t address, std::uint32_t word) {
  for (int i = 0; i < 4; ++i) text_[address + i] = static_cast<std::uint8_t>(word >> (8 * i));
}

void MachineImage::append_text_word(std::uint32_t word) {
  for (int i = 0; i < 4; ++i) text_.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
}

std::size_t MachineImage::insert_text_word(std::uint32_t address, std::uint32_t word) {
  const std::size_t moved = text_.size() - address;
  std::uint8_t bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<std::uint8_t>(word >> (8 * i));
  text_.insert(text_.begin() + address, bytes, bytes + 4);
  return moved;
}

void MachineImage::append_data(const std::vector<std::uint8_t>& bytes) {
  data_.insert(data_.end(), bytes.begin(), bytes.end());
}

OpCounters operator+(const OpCounters& a, const OpCounters& b) {
  return OpCounters{a.lines_assembled + b.lines_assembled,
                    a.line_entries_touched + b.line_entries_touched,
                    a.symbols_scanned + b.symbols_scanned,
                    a.references_examined + b.references_examined,
                    a.bytes_moved + b.bytes_moved,
                    a.words_reencoded + b.words_reencoded};
}

OpCounters operator-(const OpCounters& a, const OpCounters& b) {
  return OpCounters{a.lines_assembled - b.lines_assembled,
                    a.line_entries_touched - b.line_entries_touched,
                    a.symbols_scanned - b.symbols_scanned,
                    a.references_examined - b.references_examined,
                    a.bytes_moved - b.bytes_moved,
                    a.words_reencoded - b.words_reencoded};
}

std::vector<Diagnostic> AssemblyState::diagnostics() const {
  std::vector<Diagnostic> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const LineTableEntry& entry = lines[i];
    for (Diagnostic d : entry.diagnostics) {
      d.line_number = entry.source_line_number;
      out.push_back(std::move(d));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.line_number != b.line_number) return a.line_number < b.line_number;
    return a.column_span.start < b.column_span.start;
  });
  return out;
}

std::optional<std::uint32_t> address_for_line(const AssemblyState& state, int line_number) {
  if (line_number < 0 || static_cast<std::size_t>(line_number) >= state.lines.size()) {
    throw Error(ErrorCode::kLineOutOfRange,
                "line " + std::to_string(line_number) + " is out of range");
  }
  const LineTableEntry& entry = state.lines[line_number];
  if (!contributes_word(entry.kind) && entry.kind != LineKind::kDataDirective) {
    return std::nullopt;
  }
  return entry.address;
}

const SymbolEntry* find_symbol(const AssemblyState& state, std::string_view label) {
  for (const SymbolEntry& symbol : state.symbols) {
    ++state.counters.symbols_scanned;
    if (symbol.label == label) return &symbol;
  }
  return nullptr;
}

SymbolEntry* find_symbol(AssemblyState& state, std::string_view label) {
  return const_cast<SymbolEntry*>(find_symbol(std::as_const(state), label));
}

SymbolEntry& record_reference(AssemblyState& state, std::string_view label, int line_number,
                              std::uint32_t address) {
  SymbolEntry* symbol = find_symbol(state, label);
  if (symbol == nullptr) {
    symbol = &state.symbols.emplace_back();
    symbol->label = std::string(label);
  }
  const Reference ref{line_number, address};
  // newest first: re-recording usually hits the last element
  for (auto it = symbol->references.rbegin(); it != symbol->references.rend(); ++it) {
    ++state.counters.references_examined;
    if (*it == ref) return *symbol;
  }
  symbol->references.push_back(ref);
  return *symbol;
}

void record_absolute_reference(AssemblyState& state, int line_number, std::uint32_t address) {
  const Reference ref{line_number, address};
  for (auto it = state.absolute_references.rbegin(); it != state.absolute_references.rend();
       ++it) {
    ++state.counters.references_examined;
    if (*it == ref) return;
  }
  state.absolute_references.push_back(ref);
}

bool is_stale(const AssemblyState& state, const SymbolEntry& symbol, const Reference& ref) {
  if (ref.line_number < 0 || static_cast<std::size_t>(ref.line_number) >= state.lines.size()) {
    return true;
  }
  const std::string* label = state.lines[ref.line_number].target_label();
  return label == nullptr || *label != symbol.label;
}

}  // namespace rvasm
