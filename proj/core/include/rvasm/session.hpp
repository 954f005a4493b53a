#ifndef RVASM_SESSION_HPP_
#define RVASM_SESSION_HPP_

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rvasm/incremental.hpp"
#include "rvasm/simulator.hpp"

// An interactive document session: edits, execution control and pane
// queries. Pane payloads are JSON values; see docs/protocol.md.
namespace rvasm {

inline constexpr std::uint32_t kMaxQueryBytes = 4096;

enum class ControlCommand : std::uint8_t { kReset, kStep, kRun, kAnimate };

struct ExecutionReport {
  std::optional<StopReason> stop_reason;  // none for reset
  std::uint64_t steps = 0;                // executed by this command
  std::string output;                     // console text written by this command
  bool awaiting_input = false;
  nlohmann::json machine;                 // registers pane after the command
};

nlohmann::json to_json(const ExecutionReport& report);
nlohmann::json to_json(const Delta& delta);
nlohmann::json to_json(const Diagnostic& diagnostic);
nlohmann::json to_json(const ChangeSet& changes);
nlohmann::json to_json(const Fault& fault);

class Session {
 public:
  // Called once per executed instruction during animate.
  using AnimateSink = std::function<void(const nlohmann::json& step)>;

  Session(std::string id, std::string_view text, AssemblyMode mode = AssemblyMode::kIncremental);

  const std::string& id() const { return id_; }
  AssemblyMode mode() const { return live_.mode(); }
  void set_mode(AssemblyMode mode) { live_.set_mode(mode); }
  const Document& document() const { return live_.document(); }
  const AssemblyState& state() const { return live_.state(); }
  const std::optional<MachineState>& machine() const { return machine_; }
  bool machine_stale() const { return stale_; }

  // Marks the machine stale. Throws Error(kPositionOutOfBounds).
  Delta apply_edit(const EditEvent& event);

  // reset needs nothing; step, run and animate need a fresh machine
  // (Error kNoMachine, kStaleMachine) that has not stopped (kAlreadyHalted).
  ExecutionReport control(ControlCommand command, std::uint64_t max_steps = 1,
                          const AnimateSink& sink = {});

  // Supplies a value for the read-integer service and resumes a command
  // suspended on input. Returns the resumed command's report, if any.
  std::optional<ExecutionReport> provide_input(std::int32_t value,
                                               const AnimateSink& sink = {});
  bool awaiting_input() const { return suspended_.has_value(); }

  // May be called from another thread; interrupts run and animate.
  void request_stop() { stop_requested_ = true; }

  nlohmann::json query_registers() const;
  // Throws kRangeTooLarge, kMisalignedRange.
  nlohmann::json query_memory(std::uint32_t start, std::uint32_t length) const;
  nlohmann::json query_disassembly(std::uint32_t start, std::uint32_t count) const;
  nlohmann::json query_diagnostics() const;
  nlohmann::json query_symbols() const;
  nlohmann::json query_text() const;
  // {"kind":"instruction","line":L} or {"kind":"instruction"|"int"|"double",
  //  "word":"0x..."} or {"kind":"int"|"double","address":A}
  nlohmann::json query_explain(const nlohmann::json& request) const;

 private:
  struct Suspended {
    ControlCommand command;
    std::uint64_t remaining;
  };

  ExecutionReport execute(ControlCommand command, std::uint64_t max_steps,
                          const AnimateSink& sink);
  std::uint32_t read_word(std::uint32_t address) const;

  std::string id_;
  LiveAssembler live_;
  std::optional<MachineState> machine_;
  bool stale_ = false;
  std::deque<std::int32_t> input_;
  std::optional<Suspended> suspended_;
  std::atomic<bool> stop_requested_{false};
};

}  // namespace rvasm

#endif  // RVASM_SESSION_HPP_
