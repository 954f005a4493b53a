#ifndef RVASM_ERROR_HPP_
#define RVASM_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rvasm {

// Machine-readable error ids shared by diagnostics, API errors and the
// session protocol. The string form (error_code_name) is part of the wire
// format; do not rename entries.
enum class ErrorCode : std::uint8_t {
  kNone,
  // source diagnostics
  kUnknownMnemonic,
  kOperandArity,
  kBadOperand,
  kImmediateOutOfRange,
  kRegisterOutOfRange,
  kMisalignedTarget,
  kBadDirective,
  kUnterminatedString,
  kDuplicateColon,
  kBadLabel,
  kLabelNotAlone,
  kLineTooLong,
  kUndefinedLabel,
  kDuplicateLabel,
  kBranchOffsetOutOfRange,
  // API errors
  kNotAPseudo,
  kUndecodable,
  kLineOutOfRange,
  kPositionOutOfBounds,
  kMisalignedStart,
  kMisalignedRange,
  kRangeTooLarge,
  kStaleMachine,
  kAlreadyHalted,
  kNoMachine,
  kBadRequest,
  kUnknownSession,
};

std::string_view error_code_name(ErrorCode code);
ErrorCode error_code_from_name(std::string_view name);

// Half-open column range [start, end) within one source line.
struct Span {
  int start = 0;
  int end = 0;

  bool operator==(const Span&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the text-level encode entry point; carries the offending token.
class EncodeError : public Error {
 public:
  EncodeError(ErrorCode code, Span span, const std::string& message)
      : Error(code, message), span_(span) {}

  Span span() const { return span_; }

 private:
  Span span_;
};

}  // namespace rvasm

#endif  // RVASM_ERROR_HPP_
