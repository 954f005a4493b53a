#ifndef RVASM_DISASSEMBLER_HPP_
#define RVASM_DISASSEMBLER_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rvasm/program.hpp"

namespace rvasm {

// Base-instruction text with x-register names. Branch and jump targets are
// absolute hex addresses; words that do not decode print as ".word 0x...".
std::string disassemble_word(std::uint32_t word, std::uint32_t address);

struct DisassemblyRow {
  std::uint32_t address = 0;
  std::uint32_t word = 0;
  std::string text;

  bool operator==(const DisassemblyRow&) const = default;
};

// `count` rows from `start`; addresses outside the image read as zero.
// Throws Error(kMisalignedStart).
std::vector<DisassemblyRow> disassemble_range(const MachineImage& image, std::uint32_t start,
                                              std::uint32_t count);

// Same, reading words through `read_word` (for live machine memory).
std::vector<DisassemblyRow> disassemble_range(
    const std::function<std::uint32_t(std::uint32_t)>& read_word, std::uint32_t start,
    std::uint32_t count);

}  // namespace rvasm

#endif  // RVASM_DISASSEMBLER_HPP_
