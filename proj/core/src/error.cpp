#include "rvasm/error.hpp"

#include <array>
#include <utility>

namespace rvasm {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 28> kNames{{
    {ErrorCode::kNone, "None"},
    {ErrorCode::kUnknownMnemonic, "UnknownMnemonic"},
    {ErrorCode::kOperandArity, "OperandArity"},
    {ErrorCode::kBadOperand, "BadOperand"},
    {ErrorCode::kImmediateOutOfRange, "ImmediateOutOfRange"},
    {ErrorCode::kRegisterOutOfRange, "RegisterOutOfRange"},
    {ErrorCode::kMisalignedTarget, "MisalignedTarget"},
    {ErrorCode::kBadDirective, "BadDirective"},
    {ErrorCode::kUnterminatedString, "UnterminatedString"},
    {ErrorCode::kDuplicateColon, "DuplicateColon"},
    {ErrorCode::kBadLabel, "BadLabel"},
    {ErrorCode::kLabelNotAlone, "LabelNotAlone"},
    {ErrorCode::kLineTooLong, "LineTooLong"},
    {ErrorCode::kUndefinedLabel, "UndefinedLabel"},
    {ErrorCode::kDuplicateLabel, "DuplicateLabel"},
    {ErrorCode::kBranchOffsetOutOfRange, "BranchOffsetOutOfRange"},
    {ErrorCode::kNotAPseudo, "NotAPseudo"},
    {ErrorCode::kUndecodable, "Undecodable"},
    {ErrorCode::kLineOutOfRange, "LineOutOfRange"},
    {ErrorCode::kPositionOutOfBounds, "PositionOutOfBounds"},
    {ErrorCode::kMisalignedStart, "MisalignedStart"},
    {ErrorCode::kMisalignedRange, "MisalignedRange"},
    {ErrorCode::kRangeTooLarge, "RangeTooLarge"},
    {ErrorCode::kStaleMachine, "StaleMachine"},
    {ErrorCode::kAlreadyHalted, "AlreadyHalted"},
    {ErrorCode::kNoMachine, "NoMachine"},
    {ErrorCode::kBadRequest, "BadRequest"},
    {ErrorCode::kUnknownSession, "UnknownSession"},
}};

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

ErrorCode error_code_from_name(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return ErrorCode::kNone;
}

}  // namespace rvasm
