#ifndef RVASM_DOCUMENT_HPP_
#define RVASM_DOCUMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rvasm {

enum class EditKind : std::uint8_t { kInsertChar, kInsertNewline, kDeleteRange, kPaste };

std::string_view edit_kind_name(EditKind kind);

// A single editor mutation. Positions are 0-based (line, column) pairs;
// columns count characters and may equal the line length.
struct EditEvent {
  EditKind kind = EditKind::kInsertChar;
  int line = 0;  // insertion point, or range start
  int col = 0;
  int end_line = 0;  // kDeleteRange only, exclusive end
  int end_col = 0;
  char ch = 0;       // kInsertChar only; never '\n'
  std::string text;  // kPaste only; may contain newlines

  static EditEvent insert_char(int line, int col, char ch);
  static EditEvent insert_newline(int line, int col);
  static EditEvent delete_range(int start_line, int start_col, int end_line, int end_col);
  static EditEvent paste(int line, int col, std::string text);

  bool operator==(const EditEvent&) const = default;
};

// Editor buffer as a list of lines. The empty text has zero lines, so a
// document never holds a single empty line.
class Document {
 public:
  Document() = default;
  explicit Document(std::string_view text);
  explicit Document(std::vector<std::string> lines);

  const std::vector<std::string>& lines() const { return lines_; }
  std::size_t line_count() const { return lines_.size(); }
  const std::string& line(std::size_t i) const { return lines_[i]; }
  bool empty() const { return lines_.empty(); }
  std::string text() const;

  // Throws Error(kPositionOutOfBounds) when the event does not fit.
  void validate(const EditEvent& event) const;
  // Validates, then applies the event.
  void apply(const EditEvent& event);

  bool operator==(const Document&) const = default;

 private:
  void normalize();

  std::vector<std::string> lines_;
};

}  // namespace rvasm

#endif  // RVASM_DOCUMENT_HPP_
