#ifndef RVASM_SIMULATOR_HPP_
#define RVASM_SIMULATOR_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvasm/program.hpp"

// RV32IM execution with the ecall services:
//   a7 = 1   print the integer in a0
//   a7 = 4   print the NUL-terminated string at a0
//   a7 = 5   read an integer into a0
//   a7 = 10  stop
namespace rvasm {

inline constexpr std::uint32_t kDataLimit = kDataBase + 0x0010'0000;
inline constexpr std::uint32_t kStackBase = 0x7FF0'0000;
inline constexpr std::uint32_t kStackLimit = 0x8000'0000;

enum class Service : std::uint32_t {
  kPrintInt = 1,
  kPrintString = 4,
  kReadInt = 5,
  kStop = 10,
};

// Sparse byte-addressable memory in 4 KiB pages. Text, data and stack
// ranges read as zero until written; everything else is out of range.
class Memory {
 public:
  static constexpr std::uint32_t kPageSize = 4096;

  static bool in_range(std::uint32_t address);
  static bool in_range(std::uint32_t address, std::uint32_t size);

  // Callers check in_range first.
  std::uint8_t load_byte(std::uint32_t address) const;
  void store_byte(std::uint32_t address, std::uint8_t value);
  std::uint32_t load(std::uint32_t address, int size) const;
  void store(std::uint32_t address, std::uint32_t value, int size);

  void load_image(const MachineImage& image);

  std::size_t page_count() const { return pages_.size(); }

  // Compares contents; an untouched page equals a page of zeros.
  bool operator==(const Memory& other) const;

 private:
  using Page = std::array<std::uint8_t, kPageSize>;
  std::map<std::uint32_t, Page> pages_;
};

enum class FaultKind : std::uint8_t {
  kIllegalInstruction,
  kMisalignedFetch,
  kMisalignedAccess,
  kMemoryOutOfRange,
  kBreakpoint,
  kUnknownService,
};

std::string_view fault_kind_name(FaultKind kind);

struct Fault {
  FaultKind kind = FaultKind::kIllegalInstruction;
  std::uint32_t pc = 0;
  std::uint32_t address = 0;  // faulting data or target address, or the word
  std::string message;

  bool operator==(const Fault&) const = default;
};

// Writes made by the last executed instruction.
struct ChangeSet {
  std::vector<int> registers_written;              // ascending, never x0
  std::vector<std::uint32_t> memory_bytes_written;  // ascending
  std::uint32_t pc_before = 0;
  std::uint32_t pc_after = 0;

  bool operator==(const ChangeSet&) const = default;
};

struct MachineState {
  std::array<std::uint32_t, kNumRegisters> regs{};
  std::uint32_t pc = kTextBase;
  Memory memory;
  bool halted = false;
  std::optional<Fault> fault;
  std::uint64_t steps_executed = 0;
  ChangeSet last_changes;

  bool operator==(const MachineState&) const = default;
};

struct IoHooks {
  // std::nullopt means no input is available yet; the ecall is not
  // executed and the step reports kAwaitingInput.
  std::function<std::optional<std::int32_t>()> read_integer;
  std::function<void(std::string_view)> write_text;
};

MachineState reset(const MachineImage& image);

enum class StepOutcome : std::uint8_t { kExecuted, kHalted, kFaulted, kAwaitingInput };

struct StepResult {
  StepOutcome outcome = StepOutcome::kExecuted;
  ChangeSet changes;
};

// Executes one instruction. Throws Error(kAlreadyHalted) when the machine
// has stopped or faulted.
StepResult step(MachineState& state, IoHooks& hooks);

enum class StopReason : std::uint8_t { kHalted, kFault, kStepLimit, kAwaitingInput };

std::string_view stop_reason_name(StopReason reason);

struct RunResult {
  StopReason reason = StopReason::kStepLimit;
  std::uint64_t steps = 0;  // executed by this call
};

// Steps until the machine stops, faults, waits for input or executes
// max_steps instructions. The observer, if set, sees every step and may
// return false to stop early (reported as kStepLimit).
using StepObserver = std::function<bool(const MachineState&, const StepResult&)>;

RunResult run(MachineState& state, IoHooks& hooks, std::uint64_t max_steps,
              const StepObserver& observer = {});

}  // namespace rvasm

#endif  // RVASM_SIMULATOR_HPP_
