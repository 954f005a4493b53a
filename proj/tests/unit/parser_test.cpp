#include <gtest/gtest.h>

#include "rvasm/parser.hpp"
#include "rvasm/program.hpp"

namespace rvasm {
namespace {

TEST(Parser, ClassificationPrecedence) {
  EXPECT_EQ(classify_line(""), LineKind::kEmpty);
  EXPECT_EQ(classify_line("   \t"), LineKind::kEmpty);
  EXPECT_EQ(classify_line("  # note"), LineKind::kComment);
  EXPECT_EQ(classify_line("loop:"), LineKind::kLabelDecl);
  EXPECT_EQ(classify_line("loop:  # trailing"), LineKind::kLabelDecl);
  EXPECT_EQ(classify_line(".word 1, 2"), LineKind::kDataDirective);
  EXPECT_EQ(classify_line("ecall"), LineKind::kMeta);
  EXPECT_EQ(classify_line("addi x1, x2, 3"), LineKind::kInstruction);
  EXPECT_EQ(classify_line("frob x1"), LineKind::kInstruction);
}

TEST(Parser, InstructionOperands) {
  const ParsedLine line = parse_line("  addi x1, x2, -121  # comment", 0);
  ASSERT_TRUE(line.valid());
  ASSERT_TRUE(line.syntax);
  EXPECT_EQ(line.syntax->mnemonic, "addi");
  ASSERT_EQ(line.syntax->operands.size(), 3u);
  EXPECT_EQ(line.syntax->operands[2].value, -121);
  EXPECT_EQ(line.syntax->operands[2].span.start, 15);
  EXPECT_EQ(line.syntax->operands[2].span.end, 19);
}

TEST(Parser, MemoryOperand) {
  const ParsedLine line = parse_line("lw t0, -8(sp)", 0);
  ASSERT_TRUE(line.valid());
  const Operand& op = line.syntax->operands[1];
  EXPECT_EQ(op.kind, Operand::Kind::kMemory);
  EXPECT_EQ(op.reg, 2);
  EXPECT_EQ(op.value, -8);
}

TEST(Parser, UnknownMnemonicDiagnostic) {
  const ParsedLine line = parse_line("  frob x1, x2", 4);
  ASSERT_EQ(line.diagnostics.size(), 1u);
  EXPECT_EQ(line.diagnostics[0].code, ErrorCode::kUnknownMnemonic);
  EXPECT_EQ(line.diagnostics[0].line_number, 4);
  EXPECT_EQ(line.diagnostics[0].column_span, (Span{2, 6}));
}

TEST(Parser, ArityDiagnostic) {
  const ParsedLine line = parse_line("add x1, x2", 0);
  ASSERT_FALSE(line.valid());
  EXPECT_EQ(line.diagnostics[0].code, ErrorCode::kOperandArity);
}

TEST(Parser, LabelRules) {
  EXPECT_TRUE(is_valid_label_name("loop"));
  EXPECT_TRUE(is_valid_label_name("_x1_b"));
  EXPECT_FALSE(is_valid_label_name("1abc"));
  EXPECT_FALSE(is_valid_label_name(""));
  EXPECT_EQ(parse_line("1abc:", 0).diagnostics.at(0).code, ErrorCode::kBadLabel);
  EXPECT_EQ(parse_line("a::", 0).diagnostics.at(0).code, ErrorCode::kDuplicateColon);
  EXPECT_EQ(parse_line("a: addi x1, x1, 1", 0).diagnostics.at(0).code, ErrorCode::kLabelNotAlone);
  EXPECT_EQ(parse_line("loop:", 0).label, "loop");
}

TEST(Parser, DataDirectiveByteLengths) {
  EXPECT_EQ(parse_line(".string \"hi\"", 0).data->byte_length(), 4u);
  EXPECT_EQ(parse_line(".string \"abc\"", 0).data->byte_length(), 4u);
  EXPECT_EQ(parse_line(".string \"abcd\"", 0).data->byte_length(), 8u);
  EXPECT_EQ(parse_line(".string \"\"", 0).data->byte_length(), 4u);
  EXPECT_EQ(parse_line(".word 1, -2, 3", 0).data->byte_length(), 12u);
  EXPECT_EQ(parse_line(".double 1.5", 0).data->byte_length(), 8u);
}

TEST(Parser, DataDirectiveValues) {
  const ParsedLine w = parse_line(".word -1, 0x10", 0);
  ASSERT_TRUE(w.valid());
  EXPECT_EQ(w.data->bytes, (std::vector<std::uint8_t>{0xFF, 0xFF, 0xFF, 0xFF, 0x10, 0, 0, 0}));
  const ParsedLine d = parse_line(".double 1.0", 0);
  ASSERT_TRUE(d.valid());
  EXPECT_EQ(d.data->bytes, (std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 0xF0, 0x3F}));
  const ParsedLine s = parse_line(".string \"a\\nb\"", 0);
  ASSERT_TRUE(s.valid());
  EXPECT_EQ(s.data->text, "a\nb");
}

TEST(Parser, HashInsideStringIsNotAComment) {
  EXPECT_EQ(comment_start(".string \"a#b\" # c"), 14u);
  const ParsedLine s = parse_line(".string \"a#b\"", 0);
  ASSERT_TRUE(s.valid());
  EXPECT_EQ(s.data->text, "a#b");
}

TEST(Parser, DirectiveErrors) {
  EXPECT_EQ(parse_line(".string \"abc", 0).diagnostics.at(0).code, ErrorCode::kUnterminatedString);
  EXPECT_EQ(parse_line(".half 3", 0).diagnostics.at(0).code, ErrorCode::kBadDirective);
  EXPECT_FALSE(parse_line(".word", 0).valid());
  EXPECT_FALSE(parse_line(".word 5000000000", 0).valid());
}

TEST(Parser, LineTooLong) {
  const std::string text = "addi x1, x1, 1 " + std::string(kSourceLineMax, ' ') + "x";
  const ParsedLine line = parse_line(text, 0);
  ASSERT_FALSE(line.valid());
  EXPECT_EQ(line.diagnostics[0].code, ErrorCode::kLineTooLong);
}

TEST(Parser, NeverThrowsOnOddInput) {
  for (const char* text : {",", "(", "addi", "addi ,,", "lw x1, (", "lw x1, 4(x2", "beq x1, x2,",
                           ".", ":", "\"", "#", "x1:", "jal", "addi x1, x2, 0x", "\t\t\t"}) {
    EXPECT_NO_THROW(parse_line(text, 0)) << text;
  }
}

}  // namespace
}  // namespace rvasm
