#ifndef RVASM_SRC_LINE_ASSEMBLY_HPP_
#define RVASM_SRC_LINE_ASSEMBLY_HPP_

#include "rvasm/program.hpp"

// Per-line assembly shared by the full and incremental assemblers. Both
// modes must produce entries through these functions so their results are
// comparable field for field.
namespace rvasm::detail {

// Entry for a freshly parsed line; address and word are not assigned.
LineTableEntry make_entry(ParsedLine parsed, int line_number);

// Sets error/error_message from the current diagnostics.
void finish_entry(LineTableEntry& entry);

// Encodes an instruction entry whose address is set, resolving its target
// against the symbol table (or against `symbol` when the caller already
// found it), and writes the word into the image. Failing lines store the
// placeholder word.
void encode_entry(AssemblyState& state, LineTableEntry& entry,
                  const SymbolEntry* symbol = nullptr);

// Records the entry's label or absolute-target reference at its address,
// then encodes it. Used for every instruction line both modes place.
void place_instruction(AssemblyState& state, LineTableEntry& entry);

// Applies a new line number to the entry and its diagnostics.
void renumber(LineTableEntry& entry, int line_number);

}  // namespace rvasm::detail

#endif  // RVASM_SRC_LINE_ASSEMBLY_HPP_
