#include <gtest/gtest.h>

#include <map>
#include <random>

#include "rvasm/isa.hpp"
#include "rvasm/parser.hpp"
#include "support/test_data.hpp"

namespace rvasm {
namespace {

ParsedInstruction syntax_of(const std::string& source) {
  ParsedLine line = parse_line(source, 0);
  EXPECT_TRUE(line.syntax.has_value()) << source;
  return line.syntax.value_or(ParsedInstruction{});
}

TEST(Isa, GoldenVectorsEncodeBitExact) {
  const auto vectors = testing::load_encoding_vectors();
  ASSERT_GE(vectors.size(), 100u);
  for (const auto& v : vectors) {
    EXPECT_EQ(encode(syntax_of(v.source), v.pc), v.word) << v.source;
  }
}

TEST(Isa, EveryMnemonicHasTwoGoldenVectors) {
  std::map<std::string, int> counts;
  for (const auto& v : testing::load_encoding_vectors()) ++counts[v.mnemonic];
  for (const auto& spec : instruction_table()) {
    EXPECT_GE(counts[std::string(spec.mnemonic)], 2) << spec.mnemonic;
  }
  for (const auto& pseudo : pseudo_table()) {
    EXPECT_GE(counts[std::string(pseudo.mnemonic)], 2) << pseudo.mnemonic;
  }
}

TEST(Isa, GoldenVectorsDecodeAndReencode) {
  for (const auto& v : testing::load_encoding_vectors()) {
    const auto decoded = decode(v.word);
    ASSERT_TRUE(decoded) << v.source;
    EXPECT_EQ(encode(decoded->to_instruction()), v.word) << v.source;
  }
}

TEST(Isa, AddiNegativeImmediate) {
  EXPECT_EQ(encode(syntax_of("addi x1, x2, -121")), 0xF8710093u);
}

TEST(Isa, ImmediateRangeErrorCarriesSpan) {
  try {
    encode(syntax_of("addi x1, x2, 4096"));
    FAIL() << "expected EncodeError";
  } catch (const EncodeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kImmediateOutOfRange);
    EXPECT_EQ(e.span().start, 13);
    EXPECT_EQ(e.span().end, 17);
  }
}

TEST(Isa, BoundaryImmediates) {
  EXPECT_NO_THROW(encode(syntax_of("addi x1, x2, 2047")));
  EXPECT_NO_THROW(encode(syntax_of("addi x1, x2, -2048")));
  EXPECT_THROW(encode(syntax_of("addi x1, x2, -2049")), EncodeError);
  EXPECT_NO_THROW(encode(syntax_of("lui x1, 0xFFFFF")));
  EXPECT_THROW(encode(syntax_of("lui x1, 0x100000")), EncodeError);
  EXPECT_NO_THROW(encode(syntax_of("slli x1, x1, 31")));
  EXPECT_THROW(encode(syntax_of("slli x1, x1, 32")), EncodeError);
}

TEST(Isa, BranchTargetRangeAndAlignment) {
  EXPECT_NO_THROW(encode(syntax_of("beq x1, x2, 4094"), 0));
  EXPECT_THROW(encode(syntax_of("beq x1, x2, 4096"), 0), EncodeError);
  try {
    encode(syntax_of("beq x1, x2, 3"), 0);
    FAIL();
  } catch (const EncodeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMisalignedTarget);
  }
}

TEST(Isa, RegisterParsing) {
  EXPECT_EQ(parse_register("x0"), 0);
  EXPECT_EQ(parse_register("x31"), 31);
  EXPECT_EQ(parse_register("zero"), 0);
  EXPECT_EQ(parse_register("sp"), 2);
  EXPECT_EQ(parse_register("a7"), 17);
  EXPECT_EQ(parse_register("t6"), 31);
  EXPECT_EQ(parse_register("x32"), 32);
  EXPECT_FALSE(parse_register("y1"));
  EXPECT_FALSE(parse_register("x"));
  EXPECT_EQ(abi_name(8), "s0");
}

TEST(Isa, RegisterOutOfRangeIsReported) {
  try {
    encode(syntax_of("add x32, x1, x2"));
    FAIL();
  } catch (const EncodeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRegisterOutOfRange);
  }
}

TEST(Isa, PseudoExpansionIsOneInstruction) {
  const auto expansion = expand_pseudo(syntax_of("li a0, -5"));
  ASSERT_EQ(expansion.size(), 1u);
  EXPECT_EQ(expansion[0].mnemonic, "addi");
  EXPECT_EQ(encode(syntax_of("mv a0, t1")), encode(syntax_of("addi a0, t1, 0")));
  EXPECT_EQ(encode(syntax_of("nop")), 0x00000013u);
  EXPECT_EQ(encode(syntax_of("ret")), 0x00008067u);
  EXPECT_EQ(encode(syntax_of("bnez t0, 8"), 0), encode(syntax_of("bne t0, x0, 8"), 0));
  EXPECT_THROW(expand_pseudo(syntax_of("add x1, x2, x3")), Error);
}

TEST(Isa, TableEntriesAreUnique) {
  std::map<std::tuple<int, int, int, int>, std::string_view> seen;
  for (const auto& spec : instruction_table()) {
    const auto key = std::make_tuple(spec.opcode, spec.funct3.value_or(255), spec.funct7.value_or(255),
                                     spec.fixed_imm12.value_or(0xFFFF));
    EXPECT_TRUE(seen.emplace(key, spec.mnemonic).second) << spec.mnemonic;
  }
  EXPECT_EQ(instruction_table().size(), 47u);
}

TEST(Isa, BitfieldsCoverTheWord) {
  for (const std::uint32_t word : {0xF8710093u, 0x002081b3u, 0xfe72cce3u, 0x000000efu}) {
    const auto fields = bitfields(word);
    int next = 31;
    std::uint32_t rebuilt = 0;
    for (const auto& f : fields) {
      EXPECT_EQ(f.high_bit, next);
      next = f.low_bit - 1;
      rebuilt |= f.value << f.low_bit;
    }
    EXPECT_EQ(next, -1);
    EXPECT_EQ(rebuilt, word);
  }
  EXPECT_THROW(bitfields(0xFFFFFFFFu), Error);
}

TEST(Isa, RandomWordsDecodeThenEncodeIdentically) {
  std::mt19937 rng(7);
  int decoded = 0;
  for (int i = 0; i < 20000; ++i) {
    std::uint32_t word = rng();
    // bias toward valid opcodes so most samples decode
    const auto& spec = instruction_table()[rng() % instruction_table().size()];
    word = (word & ~0x7Fu) | spec.opcode;
    const auto d = decode(word);
    if (!d) continue;
    ++decoded;
    ASSERT_EQ(encode(d->to_instruction()), word) << std::hex << word;
  }
  EXPECT_GT(decoded, 5000);
}

TEST(Isa, UndecodableWords) {
  EXPECT_FALSE(decode(0x00000000u));
  EXPECT_FALSE(decode(0xFFFFFFFFu));
  EXPECT_FALSE(decode(0x40001013u));  // slli with a nonzero funct7
}

TEST(Isa, ReferenceDocListsExactlyTheTables) {
  const std::string doc = testing::read_text("../docs/isa.md");
  std::map<std::string, int> base, pseudo;
  std::map<std::string, int>* section = nullptr;
  std::size_t pos = 0;
  while (pos < doc.size()) {
    std::size_t end = doc.find('\n', pos);
    if (end == std::string::npos) end = doc.size();
    const std::string line = doc.substr(pos, end - pos);
    pos = end + 1;
    if (line.rfind("## ", 0) == 0) {
      section = line == "## Base instructions" ? &base
                : line == "## Pseudoinstructions" ? &pseudo
                                                  : nullptr;
    } else if (section != nullptr && line.rfind("| `", 0) == 0) {
      const std::size_t close = line.find('`', 3);
      ++(*section)[line.substr(3, close - 3)];
    }
  }
  ASSERT_EQ(base.size(), instruction_table().size());
  for (const InstructionSpec& spec : instruction_table()) {
    EXPECT_EQ(base[std::string(spec.mnemonic)], 1) << spec.mnemonic;
  }
  for (const auto& [mnemonic, count] : base) {
    EXPECT_EQ(count, 1) << mnemonic;
    EXPECT_NE(find_instruction(mnemonic), nullptr) << mnemonic;
  }
  ASSERT_EQ(pseudo.size(), pseudo_table().size());
  for (const PseudoSpec& spec : pseudo_table()) {
    EXPECT_EQ(pseudo[std::string(spec.mnemonic)], 1) << spec.mnemonic;
  }
}

}  // namespace
}  // namespace rvasm
