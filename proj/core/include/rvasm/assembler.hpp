#ifndef RVASM_ASSEMBLER_HPP_
#define RVASM_ASSEMBLER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "rvasm/program.hpp"

namespace rvasm {

// Splits on '\n'. An empty string has zero lines; otherwise a text with k
// newlines has k + 1 lines.
std::vector<std::string> split_lines(std::string_view source);

// Assembles the whole source from scratch in one forward pass. Labels bind
// to the next code-bearing line; forward references are encoded once their
// label binds (backpatching). Never throws: problems become diagnostics and
// erroneous lines hold the placeholder word.
AssemblyState assemble_full(std::string_view source);
AssemblyState assemble_full(const std::vector<std::string>& lines);

// Re-encodes every non-stale reference to `symbol` against its current
// address. Out-of-range displacements become diagnostics on the
// referencing line.
void resolve_references(AssemblyState& state, const SymbolEntry& symbol);

}  // namespace rvasm

#endif  // RVASM_ASSEMBLER_HPP_
