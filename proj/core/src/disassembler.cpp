#include "rvasm/disassembler.hpp"

#include <cstdio>

#include "rvasm/error.hpp"
#include "rvasm/isa.hpp"

namespace rvasm {

namespace {

std::string x(std::optional<std::uint8_t> reg) { return "x" + std::to_string(reg.value_or(0)); }

std::string hex(std::uint32_t value, bool pad) {
  char buf[16];
  std::snprintf(buf, sizeof buf, pad ? "0x%08x" : "0x%x", value);
  return buf;
}

}  // namespace

std::string disassemble_word(std::uint32_t word, std::uint32_t address) {
  const std::optional<DecodedInstruction> d = decode(word);
  if (!d) return ".word " + hex(word, true);
  const std::string m(d->mnemonic);
  const std::string imm = std::to_string(d->immediate);
  const auto target = address + static_cast<std::uint32_t>(d->immediate);
  switch (d->spec->schema) {
    case OperandSchema::kRegRegReg:
      return m + ' ' + x(d->rd) + ", " + x(d->rs1) + ", " + x(d->rs2);
    case OperandSchema::kRegRegImm:
    case OperandSchema::kRegRegShamt:
      return m + ' ' + x(d->rd) + ", " + x(d->rs1) + ", " + imm;
    case OperandSchema::kLoad:
    case OperandSchema::kJumpReg:
      return m + ' ' + x(d->rd) + ", " + imm + '(' + x(d->rs1) + ')';
    case OperandSchema::kStore:
      return m + ' ' + x(d->rs2) + ", " + imm + '(' + x(d->rs1) + ')';
    case OperandSchema::kBranch:
      return m + ' ' + x(d->rs1) + ", " + x(d->rs2) + ", " + hex(target, false);
    case OperandSchema::kUpper:
      return m + ' ' + x(d->rd) + ", " + hex(static_cast<std::uint32_t>(d->immediate), false);
    case OperandSchema::kJump:
      return m + ' ' + x(d->rd) + ", " + hex(target, false);
    case OperandSchema::kNone:
      return m;
  }
  return ".word " + hex(word, true);
}

std::vector<DisassemblyRow> disassemble_range(
    const std::function<std::uint32_t(std::uint32_t)>& read_word, std::uint32_t start,
    std::uint32_t count) {
  if (start % 4 != 0) {
    throw Error(ErrorCode::kMisalignedStart, "start address " + hex(start, true) +
                                                 " is not a multiple of 4");
  }
  std::vector<DisassemblyRow> rows;
  rows.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t address = start + 4 * i;
    const std::uint32_t word = read_word(address);
    rows.push_back(DisassemblyRow{address, word, disassemble_word(word, address)});
  }
  return rows;
}

std::vector<DisassemblyRow> disassemble_range(const MachineImage& image, std::uint32_t start,
                                              std::uint32_t count) {
  return disassemble_range(
      [&](std::uint32_t address) { return image.read_word(address).value_or(0); }, start, count);
}

}  // namespace rvasm
