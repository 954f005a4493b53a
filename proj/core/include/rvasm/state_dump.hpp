#ifndef RVASM_STATE_DUMP_HPP_
#define RVASM_STATE_DUMP_HPP_

#include <string>

#include "rvasm/program.hpp"

namespace rvasm {

enum class DumpStyle : std::uint8_t {
  // Everything held in the state, in storage order, stale references
  // included.
  kComplete,
  // Only what an assembly of the current text determines: symbols sorted
  // by label, stale references and unreferenced undeclared symbols
  // dropped. Equal for the two assembler modes.
  kObservable,
};

// Deterministic text serialization of the line table, symbol table and
// machine image.
std::string dump_state(const AssemblyState& state, DumpStyle style = DumpStyle::kComplete);

}  // namespace rvasm

#endif  // RVASM_STATE_DUMP_HPP_
