#ifndef RVASM_PARSER_HPP_
#define RVASM_PARSER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvasm/error.hpp"
#include "rvasm/isa.hpp"

namespace rvasm {

inline constexpr std::size_t kSourceLineMax = 255;

enum class LineKind : std::uint8_t {
  kEmpty,
  kComment,
  kLabelDecl,
  kDataDirective,
  kMeta,
  kInstruction,
};

std::string_view line_kind_name(LineKind kind);

// Instruction and meta lines occupy one text-segment word each.
constexpr bool contributes_word(LineKind kind) {
  return kind == LineKind::kInstruction || kind == LineKind::kMeta;
}

struct Diagnostic {
  int line_number = 0;  // 0-based
  Span column_span;
  ErrorCode code = ErrorCode::kNone;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

enum class DataDirective : std::uint8_t { kWord, kDouble, kString };

std::string_view directive_name(DataDirective directive);

struct DataItem {
  DataDirective directive = DataDirective::kWord;
  std::vector<std::int32_t> words;
  std::vector<double> doubles;
  std::string text;  // .string contents after escape processing, no NUL
  // Little-endian encoding including the NUL terminator and padding.
  std::vector<std::uint8_t> bytes;

  std::size_t byte_length() const { return bytes.size(); }
};

struct ParsedLine {
  LineKind kind = LineKind::kEmpty;
  std::string source_text;
  std::vector<Diagnostic> diagnostics;

  std::string label;                             // kLabelDecl
  std::optional<ParsedInstruction> syntax;       // kInstruction, kMeta
  std::optional<LoweredInstruction> instruction; // set when lowering succeeded
  std::optional<DataItem> data;                  // kDataDirective

  bool valid() const { return diagnostics.empty(); }
};

// Precedence: empty > comment-only > label-decl > data-directive > meta >
// instruction. Lines longer than kSourceLineMax that are not empty or
// comment-only classify as instructions.
LineKind classify_line(std::string_view text);

// Never throws; problems are reported in ParsedLine::diagnostics.
ParsedLine parse_line(std::string_view text, int line_number);

bool is_valid_label_name(std::string_view name);

// Index of the '#' that starts a comment (outside string literals), or
// text.size() when there is none.
std::size_t comment_start(std::string_view text);

}  // namespace rvasm

#endif  // RVASM_PARSER_HPP_
