#ifndef RVASM_ISA_HPP_
#define RVASM_ISA_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvasm/error.hpp"

// RV32IM instruction tables, pseudoinstruction expansion and bit-exact
// encode/decode of 32-bit instruction words.
namespace rvasm {

enum class Format : std::uint8_t { kR, kI, kS, kB, kU, kJ };

char format_letter(Format format);

// Operand layout as written in source, in order.
enum class OperandSchema : std::uint8_t {
  kRegRegReg,    // rd, rs1, rs2
  kRegRegImm,    // rd, rs1, imm
  kRegRegShamt,  // rd, rs1, shamt
  kLoad,         // rd, imm(rs1)
  kJumpReg,      // rd, imm(rs1)   (also accepts rd, rs1, imm)
  kStore,        // rs2, imm(rs1)
  kBranch,       // rs1, rs2, target
  kUpper,        // rd, imm20
  kJump,         // rd, target
  kNone,         // ecall, ebreak
};

struct InstructionSpec {
  std::string_view mnemonic;
  Format format;
  std::uint8_t opcode;
  std::optional<std::uint8_t> funct3;
  // R-type funct7, or imm[11:5] for the shift-immediate forms.
  std::optional<std::uint8_t> funct7;
  OperandSchema schema;
  // imm[11:0] for the SYSTEM instructions that carry no operands.
  std::optional<std::uint16_t> fixed_imm12 = std::nullopt;
};

std::span<const InstructionSpec> instruction_table();
const InstructionSpec* find_instruction(std::string_view mnemonic);

struct PseudoSpec {
  std::string_view mnemonic;
  std::string_view expansion;  // documentation form, e.g. "addi rd, rs, 0"
};

std::span<const PseudoSpec> pseudo_table();
bool is_pseudo(std::string_view mnemonic);

inline constexpr int kNumRegisters = 32;

// Accepts x0..x31 and the ABI names. Returns the register number; "x<N>"
// with N > 31 yields N so callers can report RegisterOutOfRange.
std::optional<int> parse_register(std::string_view token);
std::string_view abi_name(int reg);

// Immediate bounds for a schema, in the units written in source (byte
// offsets for B/J, the raw 20-bit field for U).
struct ImmediateRange {
  std::int64_t min;
  std::int64_t max;
  bool must_be_even;

  bool contains(std::int64_t value) const {
    return value >= min && value <= max && (!must_be_even || value % 2 == 0);
  }
};

std::optional<ImmediateRange> immediate_range(OperandSchema schema);

// One syntactic operand of a source instruction.
struct Operand {
  enum class Kind : std::uint8_t { kRegister, kImmediate, kMemory, kSymbol };

  Kind kind = Kind::kImmediate;
  int reg = 0;              // register, or memory base
  std::int64_t value = 0;   // immediate, or memory offset
  std::string symbol;
  Span span;
};

struct ParsedInstruction {
  std::string mnemonic;
  Span mnemonic_span;
  std::vector<Operand> operands;
  Span span;  // whole instruction text
};

// A fully resolved machine instruction: every field concrete.
struct Instruction {
  const InstructionSpec* spec = nullptr;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::int32_t imm = 0;
};

// Branch/jump destination as written: a label or an absolute address.
struct Target {
  std::string label;
  std::optional<std::uint32_t> absolute;
  Span span;
};

// Result of matching a ParsedInstruction against the tables. When target
// is set, inst.imm is 0 until the target is resolved against a pc.
struct LoweredInstruction {
  Instruction inst;
  std::optional<Target> target;
};

struct LowerResult {
  std::optional<LoweredInstruction> value;
  ErrorCode error = ErrorCode::kNone;
  Span span;
  std::string message;
};

LowerResult lower(const ParsedInstruction& parsed);

// Every expansion is exactly one base instruction.
std::vector<ParsedInstruction> expand_pseudo(const ParsedInstruction& parsed);

ErrorCode check_instruction(const Instruction& inst);

// Encodes a resolved instruction. Throws EncodeError on range violations.
std::uint32_t encode(const Instruction& inst);
// Range-checked encoding without exceptions; returns the error instead.
ErrorCode try_encode(const Instruction& inst, std::uint32_t& word);

// Encodes source-level input. Numeric branch/jump targets are absolute
// addresses resolved against pc. Throws EncodeError carrying the span of
// the offending token.
std::uint32_t encode(const ParsedInstruction& parsed, std::uint32_t pc = 0);

struct DecodedInstruction {
  const InstructionSpec* spec = nullptr;
  std::string_view mnemonic;
  Format format = Format::kR;
  std::optional<std::uint8_t> rd;
  std::optional<std::uint8_t> rs1;
  std::optional<std::uint8_t> rs2;
  std::int32_t immediate = 0;
  std::uint32_t raw_word = 0;

  Instruction to_instruction() const;
};

std::optional<DecodedInstruction> decode(std::uint32_t word);

struct FieldSlice {
  std::string name;
  int high_bit = 0;
  int low_bit = 0;
  std::uint32_t value = 0;

  bool operator==(const FieldSlice&) const = default;
};

// Bit fields from bit 31 down to bit 0. Throws Error(kUndecodable).
std::vector<FieldSlice> bitfields(std::uint32_t word);

inline constexpr std::uint32_t kPlaceholderWord = 0x00000000;

}  // namespace rvasm

#endif  // RVASM_ISA_HPP_
