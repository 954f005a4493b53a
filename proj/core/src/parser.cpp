#include "rvasm/parser.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <limits>

namespace rvasm {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool all_space(std::string_view s) {
  for (char c : s) {
    if (!is_space(c)) return false;
  }
  return true;
}

// [begin, end) of s with surrounding whitespace removed, as offsets.
std::pair<std::size_t, std::size_t> trim(std::string_view s, std::size_t begin,
                                         std::size_t end) {
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return {begin, end};
}

Span span_of(std::size_t begin, std::size_t end) {
  return Span{static_cast<int>(begin), static_cast<int>(end)};
}

struct Shape {
  LineKind kind = LineKind::kEmpty;
  std::size_t code_begin = 0;  // trimmed code, comment removed
  std::size_t code_end = 0;
};

Shape shape_of(std::string_view text) {
  Shape shape;
  if (all_space(text)) return shape;
  const auto [b, e] = trim(text, 0, comment_start(text));
  shape.code_begin = b;
  shape.code_end = e;
  if (b == e) {
    shape.kind = LineKind::kComment;
  } else if (text.size() > kSourceLineMax) {
    shape.kind = LineKind::kInstruction;
  } else if (text[e - 1] == ':') {
    shape.kind = LineKind::kLabelDecl;
  } else if (text[b] == '.') {
    shape.kind = LineKind::kDataDirective;
  } else {
    std::size_t m = b;
    while (m < e && !is_space(text[m])) ++m;
    shape.kind = text.substr(b, m - b) == "ecall" ? LineKind::kMeta
                                                  : LineKind::kInstruction;
  }
  return shape;
}

// Decimal with optional leading '-', or 0x-prefixed hex. Values beyond the
// int64 range saturate so range checks downstream reject them.
std::optional<std::int64_t> parse_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  int base = 10;
  std::string_view digits = s;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  } else if (digits[0] == '-') {
    negative = true;
    digits.remove_prefix(1);
  }
  if (digits.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ptr != digits.data() + digits.size()) return std::nullopt;
  if (ec == std::errc::result_out_of_range ||
      value > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    return negative ? std::numeric_limits<std::int64_t>::min()
                    : std::numeric_limits<std::int64_t>::max();
  }
  const auto v = static_cast<std::int64_t>(value);
  return negative ? -v : v;
}

void add_diag(ParsedLine& line, int line_number, ErrorCode code, Span span,
              std::string message) {
  const int len = static_cast<int>(line.source_text.size());
  if (len == 0) {
    span = {0, 0};
  } else {
    span.start = std::clamp(span.start, 0, len - 1);
    span.end = std::clamp(span.end, span.start + 1, len);
  }
  line.diagnostics.push_back(Diagnostic{line_number, span, code, std::move(message)});
}

struct OperandError {
  ErrorCode code;
  Span span;
  std::string message;
};

std::optional<Operand> parse_operand(std::string_view text, std::size_t begin,
                                     std::size_t end, OperandError& err) {
  Operand op;
  op.span = span_of(begin, end);
  const std::string_view token = text.substr(begin, end - begin);

  if (const auto open = token.find('('); open != std::string_view::npos) {
    if (token.back() != ')') {
      err = {ErrorCode::kBadOperand, op.span, "expected ')' to close memory operand"};
      return std::nullopt;
    }
    const auto [ob, oe] = trim(text, begin, begin + open);
    const auto [rb, re] = trim(text, begin + open + 1, end - 1);
    std::int64_t offset = 0;
    if (ob != oe) {
      auto value = parse_integer(text.substr(ob, oe - ob));
      if (!value) {
        err = {ErrorCode::kBadOperand, span_of(ob, oe), "bad memory offset"};
        return std::nullopt;
      }
      offset = *value;
    }
    auto reg = parse_register(text.substr(rb, re - rb));
    if (!reg) {
      err = {ErrorCode::kBadOperand, span_of(rb, std::max(re, rb + 1)),
             "expected a base register"};
      return std::nullopt;
    }
    op.kind = Operand::Kind::kMemory;
    op.value = offset;
    op.reg = *reg;
    return op;
  }
  if (auto reg = parse_register(token)) {
    op.kind = Operand::Kind::kRegister;
    op.reg = *reg;
    return op;
  }
  if (token[0] == '-' || (token[0] >= '0' && token[0] <= '9')) {
    auto value = parse_integer(token);
    if (!value) {
      err = {ErrorCode::kBadOperand, op.span, "malformed number"};
      return std::nullopt;
    }
    op.kind = Operand::Kind::kImmediate;
    op.value = *value;
    return op;
  }
  if (is_valid_label_name(token)) {
    op.kind = Operand::Kind::kSymbol;
    op.symbol = std::string(token);
    return op;
  }
  err = {ErrorCode::kBadOperand, op.span, "unrecognized operand"};
  return std::nullopt;
}

void parse_instruction_line(ParsedLine& line, const Shape& shape, int line_number) {
  const std::string_view text = line.source_text;
  const std::size_t b = shape.code_begin;
  const std::size_t e = shape.code_end;

  if (const auto colon = text.substr(b, e - b).find(':'); colon != std::string_view::npos) {
    add_diag(line, line_number, ErrorCode::kLabelNotAlone,
             span_of(b + colon, b + colon + 1),
             "a label declaration must be on its own line");
    return;
  }

  std::size_t m = b;
  while (m < e && !is_space(text[m])) ++m;
  ParsedInstruction pi;
  pi.mnemonic = std::string(text.substr(b, m - b));
  pi.mnemonic_span = span_of(b, m);
  pi.span = span_of(b, e);

  const auto [ob, oe] = trim(text, m, e);
  if (ob < oe) {
    std::size_t start = ob;
    while (true) {
      std::size_t comma = start;
      while (comma < oe && text[comma] != ',') ++comma;
      const auto [tb, te] = trim(text, start, comma);
      if (tb == te) {
        // empty operand: point at the neighbouring comma
        const std::size_t at = comma < oe ? comma : start - 1;
        add_diag(line, line_number, ErrorCode::kBadOperand, span_of(at, at + 1),
                 "missing operand");
        line.syntax = std::move(pi);
        return;
      }
      OperandError err{};
      auto op = parse_operand(text, tb, te, err);
      if (!op) {
        add_diag(line, line_number, err.code, err.span, err.message);
        line.syntax = std::move(pi);
        return;
      }
      pi.operands.push_back(std::move(*op));
      if (comma >= oe) break;
      start = comma + 1;
    }
  }

  LowerResult lowered = lower(pi);
  if (lowered.value) {
    line.instruction = std::move(lowered.value);
  } else {
    add_diag(line, line_number, lowered.error, lowered.span, lowered.message);
  }
  line.syntax = std::move(pi);
}

void append_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

// Splits [b, e) on commas into trimmed pieces; empty pieces are kept.
std::vector<std::pair<std::size_t, std::size_t>> split_values(std::string_view text,
                                                              std::size_t b,
                                                              std::size_t e) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = b;
  while (true) {
    std::size_t comma = start;
    while (comma < e && text[comma] != ',') ++comma;
    out.push_back(trim(text, start, comma));
    if (comma >= e) break;
    start = comma + 1;
  }
  return out;
}

void parse_data_line(ParsedLine& line, const Shape& shape, int line_number) {
  const std::string_view text = line.source_text;
  const std::size_t b = shape.code_begin;
  const std::size_t e = shape.code_end;
  std::size_t d = b;
  while (d < e && !is_space(text[d])) ++d;
  const std::string_view name = text.substr(b, d - b);
  const auto [vb, ve] = trim(text, d, e);

  DataItem item;
  if (name == ".word" || name == ".double") {
    item.directive = name == ".word" ? DataDirective::kWord : DataDirective::kDouble;
    if (vb == ve) {
      add_diag(line, line_number, ErrorCode::kBadDirective, span_of(b, d),
               std::string(name) + " expects at least one value");
      return;
    }
    for (const auto& [pb, pe] : split_values(text, vb, ve)) {
      if (pb == pe) {
        add_diag(line, line_number, ErrorCode::kBadOperand, span_of(pb, pb + 1),
                 "missing value");
        return;
      }
      const std::string_view token = text.substr(pb, pe - pb);
      if (item.directive == DataDirective::kWord) {
        auto value = parse_integer(token);
        if (!value) {
          add_diag(line, line_number, ErrorCode::kBadOperand, span_of(pb, pe),
                   "malformed integer");
          return;
        }
        if (*value < std::numeric_limits<std::int32_t>::min() || *value > 0xFFFFFFFFLL) {
          add_diag(line, line_number, ErrorCode::kImmediateOutOfRange, span_of(pb, pe),
                   ".word value does not fit in 32 bits");
          return;
        }
        const auto word = static_cast<std::uint32_t>(*value);
        item.words.push_back(static_cast<std::int32_t>(word));
        append_le(item.bytes, word, 4);
      } else {
        double value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ptr != token.data() + token.size() || ec != std::errc{}) {
          add_diag(line, line_number, ErrorCode::kBadOperand, span_of(pb, pe),
                   "malformed floating-point number");
          return;
        }
        item.doubles.push_back(value);
        append_le(item.bytes, std::bit_cast<std::uint64_t>(value), 8);
      }
    }
  } else if (name == ".string") {
    item.directive = DataDirective::kString;
    if (vb == ve || text[vb] != '"') {
      add_diag(line, line_number, ErrorCode::kBadDirective, span_of(b, d),
               ".string expects a quoted string");
      return;
    }
    std::size_t i = vb + 1;
    bool closed = false;
    for (; i < ve; ++i) {
      char c = text[i];
      if (c == '"') {
        closed = true;
        break;
      }
      if (c == '\\' && i + 1 < ve) {
        c = text[++i];
        switch (c) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case 'r': c = '\r'; break;
          case '0': c = '\0'; break;
          default: break;
        }
      }
      item.text.push_back(c);
    }
    if (!closed) {
      add_diag(line, line_number, ErrorCode::kUnterminatedString, span_of(vb, ve),
               "unterminated string literal");
      return;
    }
    if (i + 1 != ve) {
      add_diag(line, line_number, ErrorCode::kBadDirective, span_of(i + 1, ve),
               "unexpected text after string literal");
      return;
    }
    for (char c : item.text) item.bytes.push_back(static_cast<std::uint8_t>(c));
    item.bytes.push_back(0);
    while (item.bytes.size() % 4 != 0) item.bytes.push_back(0);
  } else {
    add_diag(line, line_number, ErrorCode::kBadDirective, span_of(b, d),
             "unknown directive '" + std::string(name) + "'");
    return;
  }
  line.data = std::move(item);
}

void parse_label_line(ParsedLine& line, const Shape& shape, int line_number) {
  const std::string_view text = line.source_text;
  const std::size_t b = shape.code_begin;
  std::size_t e = shape.code_end - 1;  // drop the ':'
  if (e > b && text[e - 1] == ':') {
    add_diag(line, line_number, ErrorCode::kDuplicateColon, span_of(e - 1, e),
             "duplicate ':' in label declaration");
    return;
  }
  const auto [nb, ne] = trim(text, b, e);
  const std::string_view name = text.substr(nb, ne - nb);
  if (!is_valid_label_name(name)) {
    add_diag(line, line_number, ErrorCode::kBadLabel, span_of(b, shape.code_end),
             "invalid label name '" + std::string(name) + "'");
    return;
  }
  line.label = std::string(name);
}

}  // namespace

std::string_view line_kind_name(LineKind kind) {
  switch (kind) {
    case LineKind::kEmpty: return "empty";
    case LineKind::kComment: return "comment";
    case LineKind::kLabelDecl: return "label";
    case LineKind::kDataDirective: return "data";
    case LineKind::kMeta: return "meta";
    case LineKind::kInstruction: return "instruction";
  }
  return "?";
}

std::string_view directive_name(DataDirective directive) {
  switch (directive) {
    case DataDirective::kWord: return ".word";
    case DataDirective::kDouble: return ".double";
    case DataDirective::kString: return ".string";
  }
  return "?";
}

std::size_t comment_start(std::string_view text) {
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return i;
    }
  }
  return text.size();
}

bool is_valid_label_name(std::string_view name) {
  if (name.empty() || !is_ident_start(name[0])) return false;
  for (char c : name) {
    if (!is_ident_char(c)) return false;
  }
  return !parse_register(name).has_value();
}

LineKind classify_line(std::string_view text) { return shape_of(text).kind; }

ParsedLine parse_line(std::string_view text, int line_number) {
  ParsedLine line;
  line.source_text = std::string(text);
  const Shape shape = shape_of(text);
  line.kind = shape.kind;

  if (text.size() > kSourceLineMax) {
    add_diag(line, line_number, ErrorCode::kLineTooLong,
             span_of(kSourceLineMax, text.size()),
             "line exceeds " + std::to_string(kSourceLineMax) + " characters");
    return line;
  }
  switch (shape.kind) {
    case LineKind::kEmpty:
    case LineKind::kComment:
      break;
    case LineKind::kLabelDecl:
      parse_label_line(line, shape, line_number);
      break;
    case LineKind::kDataDirective:
      parse_data_line(line, shape, line_number);
      break;
    case LineKind::kMeta:
    case LineKind::kInstruction:
      parse_instruction_line(line, shape, line_number);
      break;
  }
  return line;
}

}  // namespace rvasm
