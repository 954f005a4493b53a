#ifndef RVASM_PROGRAM_HPP_
#define RVASM_PROGRAM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvasm/isa.hpp"
#include "rvasm/parser.hpp"

// Assembly state shared by the full and incremental assemblers: the line
// table, the symbol table and the machine image.
namespace rvasm {

inline constexpr std::uint32_t kTextBase = 0x0000'0000;
inline constexpr std::uint32_t kDataBase = 0x1000'0000;
inline constexpr std::uint32_t kStackPointerInit = 0x7FFF'FFF0;

enum class Segment : std::uint8_t { kText, kData };

// One row per source line.
struct LineTableEntry {
  LineKind kind = LineKind::kEmpty;
  std::optional<std::uint32_t> address;
  int source_line_number = 0;
  bool error = false;
  std::uint32_t length = 0;
  std::optional<std::string> error_message;
  std::string source_line;  // at most kSourceLineMax characters
  std::optional<std::string_view> mnemonic;
  std::optional<Format> format;
  std::optional<std::uint32_t> instruction;
  std::optional<std::uint8_t> opcode;
  std::optional<std::uint8_t> funct7;
  std::optional<std::uint8_t> funct3;
  std::optional<std::uint8_t> rs1;
  std::optional<std::uint8_t> rs2;
  std::optional<std::uint8_t> rd;
  std::optional<std::int32_t> imm_full;
  // Immediate pieces exactly as stored in the word: I: imm_lo = imm[11:0];
  // S: imm_hi = imm[11:5], imm_lo = imm[4:0]; B: imm_hi = bits 31..25,
  // imm_lo = bits 11..7; U/J: imm_hi = bits 31..12.
  std::optional<std::uint32_t> imm_hi;
  std::optional<std::uint32_t> imm_lo;

  std::vector<Diagnostic> diagnostics;
  // Parse-time diagnostics only; resolution problems are added on top.
  std::vector<Diagnostic> parse_diagnostics;
  std::optional<LoweredInstruction> lowered;
  std::string label;  // kLabelDecl

  // Label named by this line's branch/jump target, if any.
  const std::string* target_label() const {
    if (lowered && lowered->target && lowered->target->absolute == std::nullopt) {
      return &lowered->target->label;
    }
    return nullptr;
  }
  bool has_absolute_target() const {
    return lowered && lowered->target && lowered->target->absolute.has_value();
  }
};

// Rows are held by pointer so inserting a line moves pointers, not records.
class LineTable {
 public:
  LineTable() = default;
  LineTable(const LineTable& other);
  LineTable& operator=(const LineTable& other);
  LineTable(LineTable&&) noexcept = default;
  LineTable& operator=(LineTable&&) noexcept = default;

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  LineTableEntry& operator[](std::size_t i) { return *rows_[i]; }
  const LineTableEntry& operator[](std::size_t i) const { return *rows_[i]; }

  void reserve(std::size_t n) { rows_.reserve(n); }
  void push_back(LineTableEntry entry);
  void insert(std::size_t index, LineTableEntry entry);

 private:
  std::vector<std::unique_ptr<LineTableEntry>> rows_;
};

struct Reference {
  int line_number = 0;
  std::uint32_t address = 0;

  bool operator==(const Reference&) const = default;
};

struct SymbolEntry {
  std::string label;
  std::optional<int> declaration_line;
  std::optional<std::uint32_t> address;
  Segment segment = Segment::kText;
  std::vector<Reference> references;
};

class MachineImage {
 public:
  std::uint32_t text_base() const { return kTextBase; }
  std::uint32_t data_base() const { return kDataBase; }

  const std::vector<std::uint8_t>& text_bytes() const { return text_; }
  const std::vector<std::uint8_t>& data_bytes() const { return data_; }
  std::uint32_t text_size() const { return static_cast<std::uint32_t>(text_.size()); }
  std::uint32_t data_size() const { return static_cast<std::uint32_t>(data_.size()); }

  // Reads from either segment; std::nullopt outside both.
  std::optional<std::uint32_t> read_word(std::uint32_t address) const;
  std::optional<std::uint8_t> read_byte(std::uint32_t address) const;

  void write_text_word(std::uint32_t address, std::uint32_t word);
  void append_text_word(std::uint32_t word);
  // Inserts a word at address, moving every later byte down by four.
  // Returns the number of bytes moved.
  std::size_t insert_text_word(std::uint32_t address, std::uint32_t word);
  void append_data(const std::vector<std::uint8_t>& bytes);

  bool operator==(const MachineImage&) const = default;

 private:
  std::vector<std::uint8_t> text_;
  std::vector<std::uint8_t> data_;
};

// Work performed by the assemblers, for complexity checks.
struct OpCounters {
  std::uint64_t lines_assembled = 0;
  std::uint64_t line_entries_touched = 0;
  std::uint64_t symbols_scanned = 0;
  std::uint64_t references_examined = 0;
  std::uint64_t bytes_moved = 0;
  std::uint64_t words_reencoded = 0;

  bool operator==(const OpCounters&) const = default;
};

OpCounters operator+(const OpCounters& a, const OpCounters& b);
OpCounters operator-(const OpCounters& a, const OpCounters& b);

struct AssemblyState {
  LineTable lines;
  std::vector<SymbolEntry> symbols;
  // Branches and jumps whose target is a numeric address; they need
  // re-encoding when their own word moves.
  std::vector<Reference> absolute_references;
  MachineImage image;
  mutable OpCounters counters;

  // All diagnostics in line order, then column order.
  std::vector<Diagnostic> diagnostics() const;
};

// Throws Error(kLineOutOfRange).
std::optional<std::uint32_t> address_for_line(const AssemblyState& state, int line_number);

// Linear scan; counts every entry visited in state.counters.symbols_scanned.
SymbolEntry* find_symbol(AssemblyState& state, std::string_view label);
const SymbolEntry* find_symbol(const AssemblyState& state, std::string_view label);

// Appends (line, address) to the label's reference list, creating the
// symbol if needed. Identical pairs are not appended twice.
SymbolEntry& record_reference(AssemblyState& state, std::string_view label, int line_number,
                              std::uint32_t address);

// Same for branches and jumps with a numeric target.
void record_absolute_reference(AssemblyState& state, int line_number, std::uint32_t address);

// A reference is stale when its line no longer parses as an instruction
// that names the symbol.
bool is_stale(const AssemblyState& state, const SymbolEntry& symbol, const Reference& ref);

}  // namespace rvasm

#endif  // RVASM_PROGRAM_HPP_
