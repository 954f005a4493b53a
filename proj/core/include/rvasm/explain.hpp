#ifndef RVASM_EXPLAIN_HPP_
#define RVASM_EXPLAIN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvasm/isa.hpp"

// Structured breakdowns of instruction words, two's-complement integers and
// IEEE 754 doubles. Presentation is left to the caller.
namespace rvasm {

struct FieldNote {
  FieldSlice field;
  std::string note;
};

struct InstructionExplanation {
  std::uint32_t word = 0;
  Format format = Format::kR;
  std::string mnemonic;
  std::vector<FieldNote> fields;  // bit 31 down to bit 0
  std::string operand_summary;    // e.g. "rd=x1, rs1=x2, imm=-121"
  std::int32_t immediate_decimal = 0;
};

// Throws Error(kUndecodable).
InstructionExplanation explain_instruction(std::uint32_t word);

struct IntExplanation {
  std::uint32_t word = 0;
  std::string bits;  // 32 characters, bit 31 first
  int sign_bit = 0;
  std::string magnitude_rule;
  std::uint32_t magnitude = 0;  // |value| as an unsigned number
  std::int32_t decimal_value = 0;
};

IntExplanation explain_signed_int(std::uint32_t word);

enum class DoubleClass : std::uint8_t { kNormal, kSubnormal, kZero, kInfinity, kNaN };

std::string_view double_class_name(DoubleClass c);

struct DoubleExplanation {
  std::uint64_t word = 0;
  int sign = 0;
  std::uint32_t exponent_bits = 0;  // 11-bit biased exponent
  int unbiased_exponent = 0;        // exponent_bits - 1023, or -1022 for subnormals
  std::uint64_t mantissa_bits = 0;  // 52 bits
  double significand = 0;           // 1.f for normals, 0.f for subnormals
  double decimal_value = 0;         // rebuilt from the fields
  std::string decimal_text;         // exact-enough decimal rendering
  DoubleClass value_class = DoubleClass::kZero;
};

DoubleExplanation explain_double(std::uint64_t word);

nlohmann::json to_json(const InstructionExplanation& e);
nlohmann::json to_json(const IntExplanation& e);
nlohmann::json to_json(const DoubleExplanation& e);

}  // namespace rvasm

#endif  // RVASM_EXPLAIN_HPP_
