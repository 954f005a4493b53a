#include "rvasm/explain.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "rvasm/error.hpp"

namespace rvasm {

namespace {

std::string hex(std::uint64_t value, int digits = 0) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%0*llx", digits, static_cast<unsigned long long>(value));
  return buf;
}

std::string reg_note(const std::string& role, std::uint32_t value) {
  return role + " = x" + std::to_string(value) + " (" + std::string(abi_name(static_cast<int>(value))) +
         ")";
}

std::string field_note(const DecodedInstruction& d, const FieldSlice& f) {
  const std::string& n = f.name;
  if (n == "opcode") return "opcode " + hex(f.value, 2) + " selects " + format_letter(d.format) + "-type";
  if (n == "rd") return reg_note("destination register", f.value);
  if (n == "rs1") return reg_note("first source register", f.value);
  if (n == "rs2") return reg_note("second source register", f.value);
  if (n == "funct3") return "funct3 = " + std::to_string(f.value);
  if (n == "funct7") return "funct7 = " + hex(f.value, 2);
  if (n == "shamt") return "shift amount = " + std::to_string(f.value);
  if (n == "imm[11:0]") {
    if (d.spec->fixed_imm12) return "imm[11:0] = " + hex(f.value, 3) + " selects " + std::string(d.mnemonic);
    return "imm[11:0] = " + hex(f.value, 3) + " -> sign-extended " + std::to_string(d.immediate);
  }
  if (n == "imm[31:12]") {
    return "imm[31:12] = " + hex(f.value, 5) + " -> upper immediate " +
           hex(static_cast<std::uint32_t>(d.immediate) << 12, 8);
  }
  return n + " = " + hex(f.value) + " (part of immediate " + std::to_string(d.immediate) + ")";
}

std::string operand_summary(const DecodedInstruction& d) {
  std::string out;
  auto add = [&](const std::string& part) {
    if (!out.empty()) out += ", ";
    out += part;
  };
  if (d.rd) add("rd=x" + std::to_string(*d.rd));
  if (d.rs1) add("rs1=x" + std::to_string(*d.rs1));
  if (d.rs2) add("rs2=x" + std::to_string(*d.rs2));
  if (!d.spec->fixed_imm12 && d.format != Format::kR) add("imm=" + std::to_string(d.immediate));
  return out;
}

}  // namespace

InstructionExplanation explain_instruction(std::uint32_t word) {
  const std::optional<DecodedInstruction> d = decode(word);
  if (!d) throw Error(ErrorCode::kUndecodable, "word " + hex(word, 8) + " does not decode");
  InstructionExplanation out;
  out.word = word;
  out.format = d->format;
  out.mnemonic = std::string(d->mnemonic);
  for (FieldSlice& f : bitfields(word)) {
    std::string note = field_note(*d, f);
    out.fields.push_back(FieldNote{std::move(f), std::move(note)});
  }
  out.operand_summary = operand_summary(*d);
  out.immediate_decimal = d->immediate;
  return out;
}

IntExplanation explain_signed_int(std::uint32_t word) {
  IntExplanation out;
  out.word = word;
  out.bits.reserve(32);
  for (int i = 31; i >= 0; --i) out.bits.push_back((word >> i) & 1 ? '1' : '0');
  out.sign_bit = static_cast<int>(word >> 31);
  if (out.sign_bit == 0) {
    out.magnitude = word;
    out.decimal_value = static_cast<std::int32_t>(word);
    out.magnitude_rule = "sign bit is 0: the value is the binary number itself, " +
                         std::to_string(out.magnitude);
  } else {
    out.magnitude = ~word + 1;  // invert and add one
    out.decimal_value =
        out.magnitude == 0x8000'0000u ? INT32_MIN : -static_cast<std::int32_t>(out.magnitude);
    out.magnitude_rule = "sign bit is 1: invert all bits (" + hex(~word, 8) +
                         ") and add one to get the magnitude " + std::to_string(out.magnitude) +
                         ", so the value is -" + std::to_string(out.magnitude);
  }
  return out;
}

std::string_view double_class_name(DoubleClass c) {
  switch (c) {
    case DoubleClass::kNormal: return "normal";
    case DoubleClass::kSubnormal: return "subnormal";
    case DoubleClass::kZero: return "zero";
    case DoubleClass::kInfinity: return "inf";
    case DoubleClass::kNaN: return "nan";
  }
  return "?";
}

DoubleExplanation explain_double(std::uint64_t word) {
  DoubleExplanation out;
  out.word = word;
  out.sign = static_cast<int>(word >> 63);
  out.exponent_bits = static_cast<std::uint32_t>((word >> 52) & 0x7FF);
  out.mantissa_bits = word & ((std::uint64_t{1} << 52) - 1);
  const double fraction = std::ldexp(static_cast<double>(out.mantissa_bits), -52);
  const double sign = out.sign ? -1.0 : 1.0;

  if (out.exponent_bits == 0x7FF) {
    out.value_class = out.mantissa_bits == 0 ? DoubleClass::kInfinity : DoubleClass::kNaN;
    out.unbiased_exponent = 1024;
    out.significand = 1.0 + fraction;
    out.decimal_value = out.mantissa_bits == 0 ? sign * HUGE_VAL : std::bit_cast<double>(word);
  } else if (out.exponent_bits == 0) {
    out.value_class = out.mantissa_bits == 0 ? DoubleClass::kZero : DoubleClass::kSubnormal;
    out.unbiased_exponent = -1022;
    out.significand = fraction;
    out.decimal_value = sign * std::ldexp(fraction, -1022);
  } else {
    out.value_class = DoubleClass::kNormal;
    out.unbiased_exponent = static_cast<int>(out.exponent_bits) - 1023;
    out.significand = 1.0 + fraction;
    out.decimal_value = sign * std::ldexp(out.significand, out.unbiased_exponent);
  }

  char buf[64];
  if (out.value_class == DoubleClass::kNaN) {
    std::snprintf(buf, sizeof buf, "%s", "nan");
  } else if (out.value_class == DoubleClass::kInfinity) {
    std::snprintf(buf, sizeof buf, "%s", out.sign ? "-inf" : "inf");
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", out.decimal_value);
  }
  out.decimal_text = buf;
  return out;
}

nlohmann::json to_json(const InstructionExplanation& e) {
  nlohmann::json fields = nlohmann::json::array();
  for (const FieldNote& f : e.fields) {
    fields.push_back({{"name", f.field.name},
                      {"high_bit", f.field.high_bit},
                      {"low_bit", f.field.low_bit},
                      {"value", f.field.value},
                      {"note", f.note}});
  }
  return {{"word", hex(e.word, 8)},
          {"format", std::string(1, format_letter(e.format))},
          {"mnemonic", e.mnemonic},
          {"fields", fields},
          {"operand_summary", e.operand_summary},
          {"immediate_decimal", e.immediate_decimal}};
}

nlohmann::json to_json(const IntExplanation& e) {
  return {{"word", hex(e.word, 8)},     {"bits", e.bits},
          {"sign_bit", e.sign_bit},      {"magnitude", e.magnitude},
          {"magnitude_rule", e.magnitude_rule}, {"decimal_value", e.decimal_value}};
}

nlohmann::json to_json(const DoubleExplanation& e) {
  nlohmann::json out = {{"word", hex(e.word, 16)},
                        {"sign", e.sign},
                        {"exponent_bits", e.exponent_bits},
                        {"biased_exponent", e.exponent_bits},
                        {"unbiased_exponent", e.unbiased_exponent},
                        {"mantissa_bits", hex(e.mantissa_bits, 13)},
                        {"decimal_text", e.decimal_text},
                        {"class", double_class_name(e.value_class)}};
  // JSON has no NaN or infinity; those are carried by decimal_text only
  if (std::isfinite(e.decimal_value)) {
    out["significand"] = e.significand;
    out["decimal_value"] = e.decimal_value;
  } else {
    out["significand"] = nullptr;
    out["decimal_value"] = nullptr;
  }
  return out;
}

}  // namespace rvasm
