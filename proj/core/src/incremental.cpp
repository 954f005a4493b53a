#include "rvasm/incremental.hpp"

#include <algorithm>
#include <utility>

#include "line_assembly.hpp"
#include "rvasm/assembler.hpp"

namespace rvasm {

std::string_view assembly_mode_name(AssemblyMode mode) {
  return mode == AssemblyMode::kFull ? "full" : "incremental";
}

std::optional<AssemblyMode> assembly_mode_from_name(std::string_view name) {
  if (name == "full") return AssemblyMode::kFull;
  if (name == "incremental") return AssemblyMode::kIncremental;
  return std::nullopt;
}

std::string_view edit_class_name(EditClassTag tag) {
  switch (tag) {
    case EditClassTag::kIncrementalLineChange: return "IncrementalLineChange";
    case EditClassTag::kIncrementalLineInsert: return "IncrementalLineInsert";
    case EditClassTag::kIncrementalEmptyLineInsert: return "IncrementalEmptyLineInsert";
    case EditClassTag::kFullFallback: return "FullFallback";
  }
  return "?";
}

std::string_view fallback_reason_name(FallbackReason reason) {
  switch (reason) {
    case FallbackReason::kNone: return "none";
    case FallbackReason::kDelete: return "delete";
    case FallbackReason::kPaste: return "paste";
    case FallbackReason::kColon: return "colon";
    case FallbackReason::kLabelLine: return "label_line";
    case FallbackReason::kDataLine: return "data_line";
    case FallbackReason::kLineTooLong: return "line_too_long";
    case FallbackReason::kKindChange: return "kind_change";
    case FallbackReason::kDataLabel: return "data_label";
    case FallbackReason::kSplit: return "split";
    case FallbackReason::kEmptyDocument: return "empty_document";
  }
  return "?";
}

namespace {

constexpr EditClass fallback(FallbackReason reason) {
  return EditClass{EditClassTag::kFullFallback, reason};
}

constexpr EditClass incremental(EditClassTag tag) { return EditClass{tag, FallbackReason::kNone}; }

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::optional<FallbackReason> structural_reason(LineKind kind) {
  if (kind == LineKind::kLabelDecl) return FallbackReason::kLabelLine;
  if (kind == LineKind::kDataDirective) return FallbackReason::kDataLine;
  return std::nullopt;
}

// True when a label declared just above line_number (only blank, comment
// and label lines in between) is bound to the data segment; a new word at
// line_number would capture it.
bool captures_data_label(const AssemblyState& state, int line_number) {
  for (int i = line_number - 1; i >= 0; --i) {
    const LineTableEntry& entry = state.lines[i];
    if (entry.kind == LineKind::kEmpty || entry.kind == LineKind::kComment) continue;
    if (entry.kind != LineKind::kLabelDecl) break;
    if (entry.label.empty()) continue;
    const SymbolEntry* symbol = find_symbol(state, entry.label);
    if (symbol != nullptr && symbol->declaration_line == i && symbol->segment == Segment::kData) {
      return true;
    }
  }
  return false;
}

EditClass classify_insert_char(const AssemblyState& state, const Document& document,
                               const EditEvent& event) {
  if (event.ch == ':') return fallback(FallbackReason::kColon);
  const std::string& before = document.line(event.line);
  const LineKind old_kind = state.lines[event.line].kind;
  if (auto reason = structural_reason(old_kind)) return fallback(*reason);
  if (before.size() + 1 > kSourceLineMax) return fallback(FallbackReason::kLineTooLong);

  std::string after = before;
  after.insert(static_cast<std::size_t>(event.col), 1, event.ch);
  const LineKind new_kind = classify_line(after);
  if (auto reason = structural_reason(new_kind)) return fallback(*reason);
  if (contributes_word(old_kind) && !contributes_word(new_kind)) {
    return fallback(FallbackReason::kKindChange);
  }
  if (!contributes_word(old_kind) && contributes_word(new_kind)) {
    if (captures_data_label(state, event.line)) return fallback(FallbackReason::kDataLabel);
    return incremental(EditClassTag::kIncrementalLineInsert);
  }
  return incremental(EditClassTag::kIncrementalLineChange);
}

EditClass classify_insert_newline(const AssemblyState& state, const Document& document,
                                  const EditEvent& event) {
  const std::string& text = document.line(event.line);
  if (text.size() > kSourceLineMax) return fallback(FallbackReason::kLineTooLong);
  const auto col = static_cast<std::size_t>(event.col);
  if (col == 0 || col == text.size()) {
    return incremental(EditClassTag::kIncrementalEmptyLineInsert);
  }
  const std::string_view left = std::string_view(text).substr(0, col);
  const std::string_view right = std::string_view(text).substr(col);
  if (!is_blank(left) && !is_blank(right)) return fallback(FallbackReason::kSplit);

  // One side is blank: the other keeps the line's content.
  const LineKind old_kind = state.lines[event.line].kind;
  if (auto reason = structural_reason(old_kind)) return fallback(*reason);
  const LineKind kept_kind = classify_line(is_blank(left) ? right : left);
  if (auto reason = structural_reason(kept_kind)) return fallback(*reason);
  if (contributes_word(old_kind) != contributes_word(kept_kind)) {
    return fallback(FallbackReason::kKindChange);
  }
  return incremental(EditClassTag::kIncrementalEmptyLineInsert);
}

void add_line(Delta* delta, int line) {
  if (delta != nullptr) delta->lines_changed.push_back(line);
}

}  // namespace

EditClass classify_edit(const AssemblyState& state, const Document& document,
                        const EditEvent& event) {
  document.validate(event);
  switch (event.kind) {
    case EditKind::kDeleteRange:
      return fallback(FallbackReason::kDelete);
    case EditKind::kPaste:
      return fallback(FallbackReason::kPaste);
    case EditKind::kInsertChar:
    case EditKind::kInsertNewline:
      break;
  }
  if (document.empty()) return fallback(FallbackReason::kEmptyDocument);
  return event.kind == EditKind::kInsertChar ? classify_insert_char(state, document, event)
                                             : classify_insert_newline(state, document, event);
}

void reassemble_line(AssemblyState& state, int line_number, std::string_view text,
                     Delta* delta) {
  if (line_number < 0 || static_cast<std::size_t>(line_number) >= state.lines.size()) {
    throw Error(ErrorCode::kLineOutOfRange,
                "line " + std::to_string(line_number) + " is out of range");
  }
  LineTableEntry& slot = state.lines[line_number];
  ++state.counters.lines_assembled;
  ++state.counters.line_entries_touched;
  LineTableEntry entry = detail::make_entry(parse_line(text, line_number), line_number);
  if (contributes_word(entry.kind) != contributes_word(slot.kind)) {
    throw Error(ErrorCode::kBadRequest, "line " + std::to_string(line_number) +
                                            " would change whether it holds a word");
  }
  if (contributes_word(entry.kind)) {
    const std::uint32_t old_word = slot.instruction.value_or(kPlaceholderWord);
    entry.address = slot.address;
    detail::place_instruction(state, entry);
    if (delta != nullptr && entry.instruction != old_word) delta->image_changed = true;
  }
  slot = std::move(entry);
  add_line(delta, line_number);
}

void insert_empty_line(AssemblyState& state, int line_number, std::string_view text,
                       Delta* delta) {
  if (line_number < 0 || static_cast<std::size_t>(line_number) > state.lines.size()) {
    throw Error(ErrorCode::kLineOutOfRange,
                "line " + std::to_string(line_number) + " is out of range");
  }
  ++state.counters.lines_assembled;
  state.lines.insert(static_cast<std::size_t>(line_number),
                     detail::make_entry(parse_line(text, line_number), line_number));
  for (std::size_t i = static_cast<std::size_t>(line_number) + 1; i < state.lines.size(); ++i) {
    ++state.counters.line_entries_touched;
    detail::renumber(state.lines[i], static_cast<int>(i));
  }
  for (SymbolEntry& symbol : state.symbols) {
    ++state.counters.symbols_scanned;
    if (symbol.declaration_line && *symbol.declaration_line >= line_number) {
      ++*symbol.declaration_line;
    }
    for (Reference& ref : symbol.references) {
      ++state.counters.references_examined;
      if (ref.line_number >= line_number) ++ref.line_number;
    }
  }
  for (Reference& ref : state.absolute_references) {
    ++state.counters.references_examined;
    if (ref.line_number >= line_number) ++ref.line_number;
  }
  if (delta != nullptr) delta->line_inserted = line_number;
}

void insert_instruction_word(AssemblyState& state, int line_number, std::string_view text,
                             Delta* delta) {
  if (line_number < 0 || static_cast<std::size_t>(line_number) >= state.lines.size()) {
    throw Error(ErrorCode::kLineOutOfRange,
                "line " + std::to_string(line_number) + " is out of range");
  }
  if (contributes_word(state.lines[line_number].kind)) {
    throw Error(ErrorCode::kBadRequest,
                "line " + std::to_string(line_number) + " already holds a word");
  }
  const std::size_t count = state.lines.size();

  // The new word goes where the next word-bearing line currently sits.
  std::uint32_t at = state.image.text_size();
  std::size_t first_after = count;
  for (std::size_t i = static_cast<std::size_t>(line_number) + 1; i < count; ++i) {
    if (contributes_word(state.lines[i].kind)) {
      at = *state.lines[i].address;
      first_after = i;
      break;
    }
  }

  // 1. assemble the line and update the line table
  ++state.counters.lines_assembled;
  ++state.counters.line_entries_touched;
  LineTableEntry entry = detail::make_entry(parse_line(text, line_number), line_number);
  if (!contributes_word(entry.kind)) {
    throw Error(ErrorCode::kBadRequest,
                "line " + std::to_string(line_number) + " does not hold an instruction");
  }
  entry.address = at;

  // 2. open a word at the insertion point, then fill it
  state.counters.bytes_moved += state.image.insert_text_word(at, kPlaceholderWord);
  detail::place_instruction(state, entry);
  state.lines[line_number] = std::move(entry);

  // 3. later line-table addresses
  for (std::size_t i = first_after; i < count; ++i) {
    ++state.counters.line_entries_touched;
    LineTableEntry& later = state.lines[i];
    if (contributes_word(later.kind)) *later.address += 4;
  }

  // 4. symbol and reference addresses after the insertion point, and
  // 5. references whose span crosses the new word
  std::vector<std::pair<int, const SymbolEntry*>> fix;
  for (SymbolEntry& symbol : state.symbols) {
    ++state.counters.symbols_scanned;
    const bool moved = symbol.address && symbol.segment == Segment::kText &&
                       symbol.declaration_line && *symbol.declaration_line > line_number;
    if (moved) {
      *symbol.address += 4;
      if (delta != nullptr) delta->symbols_moved.push_back(symbol.label);
    }
    for (Reference& ref : symbol.references) {
      ++state.counters.references_examined;
      if (ref.line_number > line_number) ref.address += 4;
      if (!symbol.address) continue;
      bool crosses = false;
      if (symbol.segment == Segment::kText) {
        crosses = std::min(*symbol.address, ref.address) <= at &&
                  at <= std::max(*symbol.address, ref.address);
      } else {
        // data addresses never move, so every moved reference changes offset
        crosses = ref.address >= at;
      }
      if (crosses) fix.emplace_back(ref.line_number, &symbol);
    }
  }
  for (Reference& ref : state.absolute_references) {
    ++state.counters.references_examined;
    if (ref.line_number > line_number) {
      ref.address += 4;
      fix.emplace_back(ref.line_number, nullptr);
    }
  }

  std::sort(fix.begin(), fix.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  fix.erase(std::unique(fix.begin(), fix.end(),
                        [](const auto& a, const auto& b) { return a.first == b.first; }),
            fix.end());
  for (const auto& [line, symbol] : fix) {
    LineTableEntry& target = state.lines[line];
    if (!contributes_word(target.kind)) continue;
    ++state.counters.words_reencoded;
    detail::encode_entry(state, target, symbol);
    if (line != line_number) add_line(delta, line);
  }

  if (delta != nullptr) {
    delta->image_changed = true;
    delta->text_size_change = 4;
    delta->word_inserted_at = at;
    add_line(delta, line_number);
  }
}

Delta update_state(AssemblyState& state, const Document& after, const EditEvent& event,
                   const EditClass& edit_class, AssemblyMode mode) {
  Delta delta;
  delta.edit_class = edit_class;
  const OpCounters before = state.counters;

  if (mode == AssemblyMode::kFull || edit_class.full()) {
    AssemblyState fresh = assemble_full(after.lines());
    delta.full_reassembly = true;
    delta.image_changed = !(fresh.image == state.image);
    delta.text_size_change = static_cast<std::int64_t>(fresh.image.text_size()) -
                             static_cast<std::int64_t>(state.image.text_size());
    delta.counters = fresh.counters;
    fresh.counters = before + delta.counters;
    state = std::move(fresh);
    return delta;
  }

  switch (edit_class.tag) {
    case EditClassTag::kIncrementalLineChange:
      reassemble_line(state, event.line, after.line(event.line), &delta);
      break;
    case EditClassTag::kIncrementalLineInsert:
      insert_instruction_word(state, event.line, after.line(event.line), &delta);
      break;
    case EditClassTag::kIncrementalEmptyLineInsert: {
      // The blank half becomes a new row; the other half keeps the old
      // row and is reparsed if its text changed.
      const int upper = event.line;
      const int lower = event.line + 1;
      const bool upper_blank = is_blank(after.line(upper)) && !is_blank(after.line(lower));
      const int blank = upper_blank ? upper : lower;
      const int kept = upper_blank ? lower : upper;
      insert_empty_line(state, blank, after.line(blank), &delta);
      if (state.lines[kept].source_line != after.line(kept)) {
        reassemble_line(state, kept, after.line(kept), &delta);
      }
      break;
    }
    case EditClassTag::kFullFallback:
      break;
  }
  delta.counters = state.counters - before;
  return delta;
}

Delta apply_edit(AssemblyState& state, Document& document, const EditEvent& event,
                 AssemblyMode mode) {
  const EditClass edit_class = classify_edit(state, document, event);
  document.apply(event);
  return update_state(state, document, event, edit_class, mode);
}

LiveAssembler::LiveAssembler(std::string_view text, AssemblyMode mode)
    : document_(text), state_(assemble_full(document_.lines())), mode_(mode) {}

Delta LiveAssembler::apply(const EditEvent& event) {
  return apply_edit(state_, document_, event, mode_);
}

}  // namespace rvasm
