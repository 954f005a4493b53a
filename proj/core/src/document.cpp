#include "rvasm/document.hpp"

#include <utility>

#include "rvasm/assembler.hpp"
#include "rvasm/error.hpp"

namespace rvasm {

std::string_view edit_kind_name(EditKind kind) {
  switch (kind) {
    case EditKind::kInsertChar: return "insert_char";
    case EditKind::kInsertNewline: return "insert_newline";
    case EditKind::kDeleteRange: return "delete_range";
    case EditKind::kPaste: return "paste";
  }
  return "?";
}

EditEvent EditEvent::insert_char(int line, int col, char ch) {
  EditEvent e;
  e.kind = EditKind::kInsertChar;
  e.line = line;
  e.col = col;
  e.ch = ch;
  return e;
}

EditEvent EditEvent::insert_newline(int line, int col) {
  EditEvent e;
  e.kind = EditKind::kInsertNewline;
  e.line = line;
  e.col = col;
  return e;
}

EditEvent EditEvent::delete_range(int start_line, int start_col, int end_line, int end_col) {
  EditEvent e;
  e.kind = EditKind::kDeleteRange;
  e.line = start_line;
  e.col = start_col;
  e.end_line = end_line;
  e.end_col = end_col;
  return e;
}

EditEvent EditEvent::paste(int line, int col, std::string text) {
  EditEvent e;
  e.kind = EditKind::kPaste;
  e.line = line;
  e.col = col;
  e.text = std::move(text);
  return e;
}

Document::Document(std::string_view text) : lines_(split_lines(text)) {}

Document::Document(std::vector<std::string> lines) : lines_(std::move(lines)) { normalize(); }

void Document::normalize() {
  if (lines_.size() == 1 && lines_[0].empty()) lines_.clear();
}

std::string Document::text() const {
  std::string out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (i > 0) out += '\n';
    out += lines_[i];
  }
  return out;
}

namespace {

[[noreturn]] void out_of_bounds(int line, int col) {
  throw Error(ErrorCode::kPositionOutOfBounds,
              "position " + std::to_string(line) + ":" + std::to_string(col) +
                  " is outside the document");
}

}  // namespace

void Document::validate(const EditEvent& event) const {
  // An empty document behaves as one empty line for positioning.
  const std::size_t count = lines_.empty() ? 1 : lines_.size();
  auto length = [&](int line) -> int {
    return lines_.empty() ? 0 : static_cast<int>(lines_[line].size());
  };
  auto check = [&](int line, int col) {
    if (line < 0 || static_cast<std::size_t>(line) >= count || col < 0 || col > length(line)) {
      out_of_bounds(line, col);
    }
  };
  check(event.line, event.col);
  switch (event.kind) {
    case EditKind::kInsertChar:
      if (event.ch == '\n') {
        throw Error(ErrorCode::kBadRequest, "newlines must be inserted with insert_newline");
      }
      break;
    case EditKind::kDeleteRange:
      check(event.end_line, event.end_col);
      if (event.end_line < event.line ||
          (event.end_line == event.line && event.end_col < event.col)) {
        out_of_bounds(event.end_line, event.end_col);
      }
      break;
    case EditKind::kInsertNewline:
    case EditKind::kPaste:
      break;
  }
}

void Document::apply(const EditEvent& event) {
  validate(event);
  if (lines_.empty()) lines_.emplace_back();
  const auto line = static_cast<std::size_t>(event.line);
  const auto col = static_cast<std::size_t>(event.col);
  switch (event.kind) {
    case EditKind::kInsertChar:
      lines_[line].insert(col, 1, event.ch);
      break;
    case EditKind::kInsertNewline: {
      std::string tail = lines_[line].substr(col);
      lines_[line].resize(col);
      lines_.insert(lines_.begin() + static_cast<std::ptrdiff_t>(line) + 1, std::move(tail));
      break;
    }
    case EditKind::kDeleteRange: {
      const auto end_line = static_cast<std::size_t>(event.end_line);
      std::string joined = lines_[line].substr(0, col) +
                           lines_[end_line].substr(static_cast<std::size_t>(event.end_col));
      lines_.erase(lines_.begin() + static_cast<std::ptrdiff_t>(line) + 1,
                   lines_.begin() + static_cast<std::ptrdiff_t>(end_line) + 1);
      lines_[line] = std::move(joined);
      break;
    }
    case EditKind::kPaste: {
      std::vector<std::string> pieces = split_lines(event.text);
      if (pieces.empty()) break;
      const std::string tail = lines_[line].substr(col);
      lines_[line].resize(col);
      lines_[line] += pieces.front();
      pieces.erase(pieces.begin());
      if (pieces.empty()) {
        lines_[line] += tail;
      } else {
        pieces.back() += tail;
        lines_.insert(lines_.begin() + static_cast<std::ptrdiff_t>(line) + 1,
                      std::make_move_iterator(pieces.begin()),
                      std::make_move_iterator(pieces.end()));
      }
      break;
    }
  }
  normalize();
}

}  // namespace rvasm
