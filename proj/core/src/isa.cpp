#include "rvasm/isa.hpp"

#include <array>
#include <string>

namespace rvasm {
namespace {

constexpr std::uint8_t kOpLoad = 0x03;
constexpr std::uint8_t kOpImm = 0x13;
constexpr std::uint8_t kOpAuipc = 0x17;
constexpr std::uint8_t kOpStore = 0x23;
constexpr std::uint8_t kOpReg = 0x33;
constexpr std::uint8_t kOpLui = 0x37;
constexpr std::uint8_t kOpBranch = 0x63;
constexpr std::uint8_t kOpJalr = 0x67;
constexpr std::uint8_t kOpJal = 0x6F;
constexpr std::uint8_t kOpSystem = 0x73;

using F = Format;
using S = OperandSchema;

// clang-format off
constexpr std::array<InstructionSpec, 47> kTable{{
    {"lui",    F::kU, kOpLui,    std::nullopt, std::nullopt, S::kUpper},
    {"auipc",  F::kU, kOpAuipc,  std::nullopt, std::nullopt, S::kUpper},
    {"jal",    F::kJ, kOpJal,    std::nullopt, std::nullopt, S::kJump},
    {"jalr",   F::kI, kOpJalr,   0, std::nullopt, S::kJumpReg},
    {"beq",    F::kB, kOpBranch, 0, std::nullopt, S::kBranch},
    {"bne",    F::kB, kOpBranch, 1, std::nullopt, S::kBranch},
    {"blt",    F::kB, kOpBranch, 4, std::nullopt, S::kBranch},
    {"bge",    F::kB, kOpBranch, 5, std::nullopt, S::kBranch},
    {"bltu",   F::kB, kOpBranch, 6, std::nullopt, S::kBranch},
    {"bgeu",   F::kB, kOpBranch, 7, std::nullopt, S::kBranch},
    {"lb",     F::kI, kOpLoad,   0, std::nullopt, S::kLoad},
    {"lh",     F::kI, kOpLoad,   1, std::nullopt, S::kLoad},
    {"lw",     F::kI, kOpLoad,   2, std::nullopt, S::kLoad},
    {"lbu",    F::kI, kOpLoad,   4, std::nullopt, S::kLoad},
    {"lhu",    F::kI, kOpLoad,   5, std::nullopt, S::kLoad},
    {"sb",     F::kS, kOpStore,  0, std::nullopt, S::kStore},
    {"sh",     F::kS, kOpStore,  1, std::nullopt, S::kStore},
    {"sw",     F::kS, kOpStore,  2, std::nullopt, S::kStore},
    {"addi",   F::kI, kOpImm,    0, std::nullopt, S::kRegRegImm},
    {"slti",   F::kI, kOpImm,    2, std::nullopt, S::kRegRegImm},
    {"sltiu",  F::kI, kOpImm,    3, std::nullopt, S::kRegRegImm},
    {"xori",   F::kI, kOpImm,    4, std::nullopt, S::kRegRegImm},
    {"ori",    F::kI, kOpImm,    6, std::nullopt, S::kRegRegImm},
    {"andi",   F::kI, kOpImm,    7, std::nullopt, S::kRegRegImm},
    {"slli",   F::kI, kOpImm,    1, 0x00, S::kRegRegShamt},
    {"srli",   F::kI, kOpImm,    5, 0x00, S::kRegRegShamt},
    {"srai",   F::kI, kOpImm,    5, 0x20, S::kRegRegShamt},
    {"add",    F::kR, kOpReg,    0, 0x00, S::kRegRegReg},
    {"sub",    F::kR, kOpReg,    0, 0x20, S::kRegRegReg},
    {"sll",    F::kR, kOpReg,    1, 0x00, S::kRegRegReg},
    {"slt",    F::kR, kOpReg,    2, 0x00, S::kRegRegReg},
    {"sltu",   F::kR, kOpReg,    3, 0x00, S::kRegRegReg},
    {"xor",    F::kR, kOpReg,    4, 0x00, S::kRegRegReg},
    {"srl",    F::kR, kOpReg,    5, 0x00, S::kRegRegReg},
    {"sra",    F::kR, kOpReg,    5, 0x20, S::kRegRegReg},
    {"or",     F::kR, kOpReg,    6, 0x00, S::kRegRegReg},
    {"and",    F::kR, kOpReg,    7, 0x00, S::kRegRegReg},
    {"ecall",  F::kI, kOpSystem, 0, std::nullopt, S::kNone, 0x000},
    {"ebreak", F::kI, kOpSystem, 0, std::nullopt, S::kNone, 0x001},
    {"mul",    F::kR, kOpReg,    0, 0x01, S::kRegRegReg},
    {"mulh",   F::kR, kOpReg,    1, 0x01, S::kRegRegReg},
    {"mulhsu", F::kR, kOpReg,    2, 0x01, S::kRegRegReg},
    {"mulhu",  F::kR, kOpReg,    3, 0x01, S::kRegRegReg},
    {"div",    F::kR, kOpReg,    4, 0x01, S::kRegRegReg},
    {"divu",   F::kR, kOpReg,    5, 0x01, S::kRegRegReg},
    {"rem",    F::kR, kOpReg,    6, 0x01, S::kRegRegReg},
    {"remu",   F::kR, kOpReg,    7, 0x01, S::kRegRegReg},
}};

constexpr std::array<PseudoSpec, 7> kPseudos{{
    {"mv",   "addi rd, rs, 0"},
    {"nop",  "addi x0, x0, 0"},
    {"li",   "addi rd, x0, imm  (imm in [-2048, 2047])"},
    {"j",    "jal x0, target"},
    {"ret",  "jalr x0, 0(x1)"},
    {"beqz", "beq rs, x0, target"},
    {"bnez", "bne rs, x0, target"},
}};

constexpr std::array<std::string_view, 32> kAbiNames{
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2",
    "s0",   "s1", "a0", "a1", "a2", "a3", "a4", "a5",
    "a6",   "a7", "s2", "s3", "s4", "s5", "s6", "s7",
    "s8",   "s9", "s10", "s11", "t3", "t4", "t5", "t6"};
// clang-format on

constexpr std::uint32_t bits(std::uint32_t value, int hi, int lo) {
  return (value >> lo) & ((1u << (hi - lo + 1)) - 1u);
}

constexpr std::int32_t sign_extend(std::uint32_t value, int width) {
  const std::uint32_t m = 1u << (width - 1);
  return static_cast<std::int32_t>((value ^ m) - m);
}

std::uint32_t assemble_fields(const Instruction& inst) {
  const InstructionSpec& s = *inst.spec;
  const auto imm = static_cast<std::uint32_t>(inst.imm);
  const std::uint32_t op = s.opcode;
  const std::uint32_t f3 = s.funct3.value_or(0);
  const std::uint32_t f7 = s.funct7.value_or(0);
  const std::uint32_t rd = inst.rd, rs1 = inst.rs1, rs2 = inst.rs2;
  switch (s.format) {
    case Format::kR:
      return f7 << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 | rd << 7 | op;
    case Format::kI:
      if (s.fixed_imm12) {
        return std::uint32_t{*s.fixed_imm12} << 20 | f3 << 12 | op;
      }
      if (s.schema == OperandSchema::kRegRegShamt) {
        return f7 << 25 | bits(imm, 4, 0) << 20 | rs1 << 15 | f3 << 12 |
               rd << 7 | op;
      }
      return bits(imm, 11, 0) << 20 | rs1 << 15 | f3 << 12 | rd << 7 | op;
    case Format::kS:
      return bits(imm, 11, 5) << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 |
             bits(imm, 4, 0) << 7 | op;
    case Format::kB:
      return bits(imm, 12, 12) << 31 | bits(imm, 10, 5) << 25 | rs2 << 20 |
             rs1 << 15 | f3 << 12 | bits(imm, 4, 1) << 8 |
             bits(imm, 11, 11) << 7 | op;
    case Format::kU:
      return bits(imm, 19, 0) << 12 | rd << 7 | op;
    case Format::kJ:
      return bits(imm, 20, 20) << 31 | bits(imm, 10, 1) << 21 |
             bits(imm, 11, 11) << 20 | bits(imm, 19, 12) << 12 | rd << 7 | op;
  }
  return 0;
}

struct LowerError {
  ErrorCode code;
  Span span;
  std::string message;
};

LowerResult fail(ErrorCode code, Span span, std::string message) {
  LowerResult r;
  r.error = code;
  r.span = span;
  r.message = std::move(message);
  return r;
}

Operand synthetic_register(int reg, Span span) {
  Operand op;
  op.kind = Operand::Kind::kRegister;
  op.reg = reg;
  op.span = span;
  return op;
}

Operand synthetic_immediate(std::int64_t value, Span span) {
  Operand op;
  op.kind = Operand::Kind::kImmediate;
  op.value = value;
  op.span = span;
  return op;
}

Operand synthetic_memory(std::int64_t offset, int base, Span span) {
  Operand op;
  op.kind = Operand::Kind::kMemory;
  op.value = offset;
  op.reg = base;
  op.span = span;
  return op;
}

// Returns std::nullopt and fills err on failure.
std::optional<ParsedInstruction> expand_impl(const ParsedInstruction& p,
                                             LowerError& err) {
  const auto& ops = p.operands;
  const Span ms = p.mnemonic_span;
  auto arity = [&](std::size_t n) {
    if (ops.size() == n) return true;
    const Span span = ops.size() > n ? ops[n].span : p.span;
    err = {ErrorCode::kOperandArity, span,
           p.mnemonic + " expects " + std::to_string(n) + " operand" +
               (n == 1 ? "" : "s")};
    return false;
  };
  ParsedInstruction out;
  out.mnemonic_span = ms;
  out.span = p.span;
  if (p.mnemonic == "mv") {
    if (!arity(2)) return std::nullopt;
    out.mnemonic = "addi";
    out.operands = {ops[0], ops[1], synthetic_immediate(0, ms)};
  } else if (p.mnemonic == "nop") {
    if (!arity(0)) return std::nullopt;
    out.mnemonic = "addi";
    out.operands = {synthetic_register(0, ms), synthetic_register(0, ms),
                    synthetic_immediate(0, ms)};
  } else if (p.mnemonic == "li") {
    if (!arity(2)) return std::nullopt;
    if (ops[1].kind == Operand::Kind::kImmediate &&
        !immediate_range(OperandSchema::kRegRegImm)->contains(ops[1].value)) {
      err = {ErrorCode::kImmediateOutOfRange, ops[1].span,
             "li immediate must fit in 12 signed bits [-2048, 2047]"};
      return std::nullopt;
    }
    out.mnemonic = "addi";
    out.operands = {ops[0], synthetic_register(0, ms), ops[1]};
  } else if (p.mnemonic == "j") {
    if (!arity(1)) return std::nullopt;
    out.mnemonic = "jal";
    out.operands = {synthetic_register(0, ms), ops[0]};
  } else if (p.mnemonic == "ret") {
    if (!arity(0)) return std::nullopt;
    out.mnemonic = "jalr";
    out.operands = {synthetic_register(0, ms), synthetic_memory(0, 1, ms)};
  } else if (p.mnemonic == "beqz" || p.mnemonic == "bnez") {
    if (!arity(2)) return std::nullopt;
    out.mnemonic = p.mnemonic == "beqz" ? "beq" : "bne";
    out.operands = {ops[0], synthetic_register(0, ms), ops[1]};
  } else {
    err = {ErrorCode::kNotAPseudo, ms, p.mnemonic + " is not a pseudoinstruction"};
    return std::nullopt;
  }
  return out;
}

}  // namespace

char format_letter(Format format) {
  switch (format) {
    case Format::kR: return 'R';
    case Format::kI: return 'I';
    case Format::kS: return 'S';
    case Format::kB: return 'B';
    case Format::kU: return 'U';
    case Format::kJ: return 'J';
  }
  return '?';
}

std::span<const InstructionSpec> instruction_table() { return kTable; }

const InstructionSpec* find_instruction(std::string_view mnemonic) {
  for (const auto& spec : kTable) {
    if (spec.mnemonic == mnemonic) return &spec;
  }
  return nullptr;
}

std::span<const PseudoSpec> pseudo_table() { return kPseudos; }

bool is_pseudo(std::string_view mnemonic) {
  for (const auto& p : kPseudos) {
    if (p.mnemonic == mnemonic) return true;
  }
  return false;
}

std::optional<int> parse_register(std::string_view token) {
  if (token.size() >= 2 && token[0] == 'x') {
    int n = 0;
    for (std::size_t i = 1; i < token.size(); ++i) {
      const char c = token[i];
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + (c - '0');
      if (n > 1000) return n;
    }
    if (token.size() > 2 && token[1] == '0') return std::nullopt;
    return n;
  }
  if (token == "fp") return 8;
  for (int i = 0; i < kNumRegisters; ++i) {
    if (kAbiNames[i] == token) return i;
  }
  return std::nullopt;
}

std::string_view abi_name(int reg) {
  return reg >= 0 && reg < kNumRegisters ? kAbiNames[reg] : std::string_view{};
}

std::optional<ImmediateRange> immediate_range(OperandSchema schema) {
  switch (schema) {
    case OperandSchema::kRegRegImm:
    case OperandSchema::kLoad:
    case OperandSchema::kJumpReg:
    case OperandSchema::kStore:
      return ImmediateRange{-2048, 2047, false};
    case OperandSchema::kRegRegShamt:
      return ImmediateRange{0, 31, false};
    case OperandSchema::kBranch:
      return ImmediateRange{-4096, 4094, true};
    case OperandSchema::kUpper:
      return ImmediateRange{0, 0xFFFFF, false};
    case OperandSchema::kJump:
      return ImmediateRange{-1048576, 1048574, true};
    case OperandSchema::kRegRegReg:
    case OperandSchema::kNone:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<ParsedInstruction> expand_pseudo(const ParsedInstruction& parsed) {
  LowerError err{};
  auto out = expand_impl(parsed, err);
  if (!out) {
    if (err.code == ErrorCode::kNotAPseudo) throw Error(err.code, err.message);
    throw EncodeError(err.code, err.span, err.message);
  }
  return {std::move(*out)};
}

LowerResult lower(const ParsedInstruction& parsed) {
  const ParsedInstruction* p = &parsed;
  std::optional<ParsedInstruction> expanded;
  if (is_pseudo(parsed.mnemonic)) {
    LowerError err{};
    expanded = expand_impl(parsed, err);
    if (!expanded) return fail(err.code, err.span, err.message);
    p = &*expanded;
  }
  const InstructionSpec* spec = find_instruction(p->mnemonic);
  if (spec == nullptr) {
    return fail(ErrorCode::kUnknownMnemonic, parsed.mnemonic_span,
                "unknown mnemonic '" + parsed.mnemonic + "'");
  }

  const auto& ops = p->operands;
  LoweredInstruction out;
  out.inst.spec = spec;

  auto arity_error = [&](std::size_t n) {
    const Span span = ops.size() > n ? ops[n].span : parsed.span;
    return fail(ErrorCode::kOperandArity, span,
                std::string(parsed.mnemonic) + " expects " + std::to_string(n) +
                    " operand" + (n == 1 ? "" : "s"));
  };
  std::optional<LowerResult> error;
  auto reg = [&](std::size_t i) -> std::uint8_t {
    const Operand& op = ops[i];
    if (op.kind != Operand::Kind::kRegister) {
      if (!error) error = fail(ErrorCode::kBadOperand, op.span, "expected a register");
      return 0;
    }
    if (op.reg < 0 || op.reg >= kNumRegisters) {
      if (!error) {
        error = fail(ErrorCode::kRegisterOutOfRange, op.span,
                     "register out of range (x0..x31)");
      }
      return 0;
    }
    return static_cast<std::uint8_t>(op.reg);
  };
  auto imm = [&](std::int64_t value, Span span) -> std::int32_t {
    if (!immediate_range(spec->schema)->contains(value)) {
      if (!error) {
        const auto r = *immediate_range(spec->schema);
        error = fail(ErrorCode::kImmediateOutOfRange, span,
                     "immediate out of range [" + std::to_string(r.min) + ", " +
                         std::to_string(r.max) + "]");
      }
      return 0;
    }
    return static_cast<std::int32_t>(value);
  };
  auto immediate = [&](std::size_t i) -> std::int32_t {
    const Operand& op = ops[i];
    if (op.kind != Operand::Kind::kImmediate) {
      if (!error) error = fail(ErrorCode::kBadOperand, op.span, "expected an immediate");
      return 0;
    }
    return imm(op.value, op.span);
  };
  auto memory = [&](std::size_t i) {
    const Operand& op = ops[i];
    if (op.kind != Operand::Kind::kMemory) {
      if (!error) {
        error = fail(ErrorCode::kBadOperand, op.span, "expected offset(register)");
      }
      return;
    }
    if (op.reg < 0 || op.reg >= kNumRegisters) {
      if (!error) {
        error = fail(ErrorCode::kRegisterOutOfRange, op.span,
                     "register out of range (x0..x31)");
      }
      return;
    }
    out.inst.rs1 = static_cast<std::uint8_t>(op.reg);
    out.inst.imm = imm(op.value, op.span);
  };
  auto target = [&](std::size_t i) {
    const Operand& op = ops[i];
    Target t;
    t.span = op.span;
    if (op.kind == Operand::Kind::kSymbol) {
      t.label = op.symbol;
    } else if (op.kind == Operand::Kind::kImmediate) {
      if (op.value < 0 || op.value > 0xFFFFFFFFLL) {
        if (!error) {
          error = fail(ErrorCode::kImmediateOutOfRange, op.span,
                       "target address out of range");
        }
        return;
      }
      if (op.value % 2 != 0) {
        if (!error) {
          error = fail(ErrorCode::kMisalignedTarget, op.span,
                       "target address must be even");
        }
        return;
      }
      t.absolute = static_cast<std::uint32_t>(op.value);
    } else {
      if (!error) error = fail(ErrorCode::kBadOperand, op.span, "expected a label or address");
      return;
    }
    out.target = std::move(t);
  };

  switch (spec->schema) {
    case OperandSchema::kRegRegReg:
      if (ops.size() != 3) return arity_error(3);
      out.inst.rd = reg(0);
      out.inst.rs1 = reg(1);
      out.inst.rs2 = reg(2);
      break;
    case OperandSchema::kRegRegImm:
    case OperandSchema::kRegRegShamt:
      if (ops.size() != 3) return arity_error(3);
      out.inst.rd = reg(0);
      out.inst.rs1 = reg(1);
      out.inst.imm = immediate(2);
      break;
    case OperandSchema::kLoad:
      if (ops.size() != 2) return arity_error(2);
      out.inst.rd = reg(0);
      memory(1);
      break;
    case OperandSchema::kJumpReg:
      if (ops.size() == 3) {
        out.inst.rd = reg(0);
        out.inst.rs1 = reg(1);
        out.inst.imm = immediate(2);
        break;
      }
      if (ops.size() != 2) return arity_error(2);
      out.inst.rd = reg(0);
      memory(1);
      break;
    case OperandSchema::kStore:
      if (ops.size() != 2) return arity_error(2);
      out.inst.rs2 = reg(0);
      memory(1);
      break;
    case OperandSchema::kBranch:
      if (ops.size() != 3) return arity_error(3);
      out.inst.rs1 = reg(0);
      out.inst.rs2 = reg(1);
      target(2);
      break;
    case OperandSchema::kUpper:
      if (ops.size() != 2) return arity_error(2);
      out.inst.rd = reg(0);
      out.inst.imm = immediate(1);
      break;
    case OperandSchema::kJump:
      if (ops.size() != 2) return arity_error(2);
      out.inst.rd = reg(0);
      target(1);
      break;
    case OperandSchema::kNone:
      if (!ops.empty()) return arity_error(0);
      break;
  }
  if (error) return std::move(*error);
  LowerResult r;
  r.value = std::move(out);
  return r;
}

ErrorCode check_instruction(const Instruction& inst) {
  if (inst.spec == nullptr) return ErrorCode::kUnknownMnemonic;
  if (inst.rd >= kNumRegisters || inst.rs1 >= kNumRegisters ||
      inst.rs2 >= kNumRegisters) {
    return ErrorCode::kRegisterOutOfRange;
  }
  if (auto range = immediate_range(inst.spec->schema)) {
    if (!range->contains(inst.imm)) {
      if (inst.spec->schema == OperandSchema::kBranch ||
          inst.spec->schema == OperandSchema::kJump) {
        return inst.imm % 2 != 0 ? ErrorCode::kMisalignedTarget
                                 : ErrorCode::kBranchOffsetOutOfRange;
      }
      return ErrorCode::kImmediateOutOfRange;
    }
  }
  return ErrorCode::kNone;
}

ErrorCode try_encode(const Instruction& inst, std::uint32_t& word) {
  const ErrorCode code = check_instruction(inst);
  if (code != ErrorCode::kNone) return code;
  word = assemble_fields(inst);
  return ErrorCode::kNone;
}

std::uint32_t encode(const Instruction& inst) {
  std::uint32_t word = 0;
  const ErrorCode code = try_encode(inst, word);
  if (code != ErrorCode::kNone) {
    throw EncodeError(code, Span{}, std::string(error_code_name(code)));
  }
  return word;
}

std::uint32_t encode(const ParsedInstruction& parsed, std::uint32_t pc) {
  LowerResult r = lower(parsed);
  if (!r.value) throw EncodeError(r.error, r.span, r.message);
  Instruction inst = r.value->inst;
  if (const auto& t = r.value->target) {
    if (!t->absolute) {
      throw EncodeError(ErrorCode::kUndefinedLabel, t->span,
                        "label '" + t->label + "' is not defined");
    }
    inst.imm = static_cast<std::int32_t>(*t->absolute - pc);
  }
  std::uint32_t word = 0;
  const ErrorCode code = try_encode(inst, word);
  if (code != ErrorCode::kNone) {
    const Span span = r.value->target ? r.value->target->span : parsed.span;
    throw EncodeError(code, span, std::string(error_code_name(code)));
  }
  return word;
}

Instruction DecodedInstruction::to_instruction() const {
  Instruction inst;
  inst.spec = spec;
  inst.rd = rd.value_or(0);
  inst.rs1 = rs1.value_or(0);
  inst.rs2 = rs2.value_or(0);
  inst.imm = immediate;
  return inst;
}

std::optional<DecodedInstruction> decode(std::uint32_t word) {
  const std::uint8_t opcode = bits(word, 6, 0);
  const std::uint8_t funct3 = bits(word, 14, 12);
  const std::uint8_t funct7 = bits(word, 31, 25);
  const InstructionSpec* match = nullptr;
  for (const auto& spec : kTable) {
    if (spec.opcode != opcode) continue;
    if (spec.funct3 && *spec.funct3 != funct3) continue;
    if (spec.funct7 && *spec.funct7 != funct7) continue;
    if (spec.fixed_imm12) {
      if (bits(word, 31, 20) != *spec.fixed_imm12 || bits(word, 19, 7) != 0) {
        continue;
      }
    }
    match = &spec;
    break;
  }
  if (match == nullptr) return std::nullopt;

  DecodedInstruction d;
  d.spec = match;
  d.mnemonic = match->mnemonic;
  d.format = match->format;
  d.raw_word = word;
  const auto rd = static_cast<std::uint8_t>(bits(word, 11, 7));
  const auto rs1 = static_cast<std::uint8_t>(bits(word, 19, 15));
  const auto rs2 = static_cast<std::uint8_t>(bits(word, 24, 20));
  switch (match->format) {
    case Format::kR:
      d.rd = rd;
      d.rs1 = rs1;
      d.rs2 = rs2;
      break;
    case Format::kI:
      if (match->fixed_imm12) {
        d.immediate = static_cast<std::int32_t>(*match->fixed_imm12);
        break;
      }
      d.rd = rd;
      d.rs1 = rs1;
      d.immediate = match->schema == OperandSchema::kRegRegShamt
                        ? static_cast<std::int32_t>(bits(word, 24, 20))
                        : sign_extend(bits(word, 31, 20), 12);
      break;
    case Format::kS:
      d.rs1 = rs1;
      d.rs2 = rs2;
      d.immediate = sign_extend(bits(word, 31, 25) << 5 | bits(word, 11, 7), 12);
      break;
    case Format::kB:
      d.rs1 = rs1;
      d.rs2 = rs2;
      d.immediate = sign_extend(bits(word, 31, 31) << 12 | bits(word, 7, 7) << 11 |
                                    bits(word, 30, 25) << 5 | bits(word, 11, 8) << 1,
                                13);
      break;
    case Format::kU:
      d.rd = rd;
      d.immediate = static_cast<std::int32_t>(bits(word, 31, 12));
      break;
    case Format::kJ:
      d.rd = rd;
      d.immediate = sign_extend(bits(word, 31, 31) << 20 | bits(word, 19, 12) << 12 |
                                    bits(word, 20, 20) << 11 | bits(word, 30, 21) << 1,
                                21);
      break;
  }
  return d;
}

std::vector<FieldSlice> bitfields(std::uint32_t word) {
  const auto d = decode(word);
  if (!d) {
    throw Error(ErrorCode::kUndecodable, "word does not decode to a supported instruction");
  }
  auto f = [word](std::string name, int hi, int lo) {
    return FieldSlice{std::move(name), hi, lo, bits(word, hi, lo)};
  };
  const FieldSlice opcode = f("opcode", 6, 0);
  switch (d->format) {
    case Format::kR:
      return {f("funct7", 31, 25), f("rs2", 24, 20), f("rs1", 19, 15),
              f("funct3", 14, 12), f("rd", 11, 7), opcode};
    case Format::kI:
      if (d->spec->schema == OperandSchema::kRegRegShamt) {
        return {f("funct7", 31, 25), f("shamt", 24, 20), f("rs1", 19, 15),
                f("funct3", 14, 12), f("rd", 11, 7), opcode};
      }
      return {f("imm[11:0]", 31, 20), f("rs1", 19, 15), f("funct3", 14, 12),
              f("rd", 11, 7), opcode};
    case Format::kS:
      return {f("imm[11:5]", 31, 25), f("rs2", 24, 20), f("rs1", 19, 15),
              f("funct3", 14, 12), f("imm[4:0]", 11, 7), opcode};
    case Format::kB:
      return {f("imm[12]", 31, 31),  f("imm[10:5]", 30, 25), f("rs2", 24, 20),
              f("rs1", 19, 15),      f("funct3", 14, 12),    f("imm[4:1]", 11, 8),
              f("imm[11]", 7, 7),    opcode};
    case Format::kU:
      return {f("imm[31:12]", 31, 12), f("rd", 11, 7), opcode};
    case Format::kJ:
      return {f("imm[20]", 31, 31), f("imm[10:1]", 30, 21), f("imm[11]", 20, 20),
              f("imm[19:12]", 19, 12), f("rd", 11, 7), opcode};
  }
  return {};
}

}  // namespace rvasm
