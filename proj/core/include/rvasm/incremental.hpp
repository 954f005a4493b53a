#ifndef RVASM_INCREMENTAL_HPP_
#define RVASM_INCREMENTAL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvasm/document.hpp"
#include "rvasm/program.hpp"

// Keeps an AssemblyState in step with a document under a stream of edit
// events, assembling single lines where possible and reassembling the whole
// program otherwise.
namespace rvasm {

enum class AssemblyMode : std::uint8_t { kFull, kIncremental };

std::string_view assembly_mode_name(AssemblyMode mode);
std::optional<AssemblyMode> assembly_mode_from_name(std::string_view name);

enum class EditClassTag : std::uint8_t {
  kIncrementalLineChange,
  kIncrementalLineInsert,
  kIncrementalEmptyLineInsert,
  kFullFallback,
};

enum class FallbackReason : std::uint8_t {
  kNone,
  kDelete,
  kPaste,
  kColon,
  kLabelLine,
  kDataLine,
  kLineTooLong,
  kKindChange,    // an instruction line stops contributing a word
  kDataLabel,     // a label bound to data would rebind to the new word
  kSplit,         // a newline divides a line into two non-blank parts
  kEmptyDocument,
};

std::string_view edit_class_name(EditClassTag tag);
std::string_view fallback_reason_name(FallbackReason reason);

struct EditClass {
  EditClassTag tag = EditClassTag::kFullFallback;
  FallbackReason reason = FallbackReason::kNone;

  bool full() const { return tag == EditClassTag::kFullFallback; }
  bool operator==(const EditClass&) const = default;
};

// What an edit changed, for display and tests. Line numbers are post-edit.
struct Delta {
  EditClass edit_class;
  bool full_reassembly = false;
  bool image_changed = false;
  std::int64_t text_size_change = 0;  // bytes
  std::vector<int> lines_changed;     // reparsed or re-encoded
  std::optional<int> line_inserted;   // new line-table row
  std::optional<std::uint32_t> word_inserted_at;
  std::vector<std::string> symbols_moved;
  OpCounters counters;  // work done for this edit
};

// Pure function of the event and the pre-edit document and state.
// Throws Error(kPositionOutOfBounds).
EditClass classify_edit(const AssemblyState& state, const Document& document,
                        const EditEvent& event);

// Applies the event to the document and updates the state to match.
// In full mode every edit reassembles the whole program.
Delta apply_edit(AssemblyState& state, Document& document, const EditEvent& event,
                 AssemblyMode mode = AssemblyMode::kIncremental);

// The engine half of apply_edit: `after` is the document with the event
// already applied and `edit_class` its classification against the
// pre-edit document.
Delta update_state(AssemblyState& state, const Document& after, const EditEvent& event,
                   const EditClass& edit_class, AssemblyMode mode = AssemblyMode::kIncremental);

// A previously empty or comment line at line_number now holds an
// instruction: assembles it, inserts its word at the next text address,
// shifts later addresses, symbols and references by four bytes and
// re-encodes references that cross the new word.
void insert_instruction_word(AssemblyState& state, int line_number, std::string_view text,
                             Delta* delta = nullptr);

// Reparses one line in place. The line must keep its word-bearing status;
// its word, if any, is overwritten at the same address. Old references are
// left in the symbol table.
void reassemble_line(AssemblyState& state, int line_number, std::string_view text,
                     Delta* delta = nullptr);

// Inserts a blank row at line_number and renumbers everything after it.
// The machine image is untouched.
void insert_empty_line(AssemblyState& state, int line_number, std::string_view text,
                       Delta* delta = nullptr);

// A document together with its assembly, driven by edit events.
class LiveAssembler {
 public:
  explicit LiveAssembler(std::string_view text = {},
                         AssemblyMode mode = AssemblyMode::kIncremental);

  Delta apply(const EditEvent& event);

  const Document& document() const { return document_; }
  const AssemblyState& state() const { return state_; }
  AssemblyMode mode() const { return mode_; }
  void set_mode(AssemblyMode mode) { mode_ = mode; }

 private:
  Document document_;
  AssemblyState state_;
  AssemblyMode mode_;
};

}  // namespace rvasm

#endif  // RVASM_INCREMENTAL_HPP_
