#include "rvasm/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "rvasm/error.hpp"

namespace rvasm {

bool Memory::in_range(std::uint32_t address) {
  // text and data are contiguous
  return address < kDataLimit || (address >= kStackBase && address < kStackLimit);
}

bool Memory::in_range(std::uint32_t address, std::uint32_t size) {
  const std::uint64_t last = std::uint64_t{address} + size - 1;
  if (last > 0xFFFF'FFFFull) return false;
  return in_range(address) && in_range(static_cast<std::uint32_t>(last)) &&
         (address < kDataLimit) == (last < kDataLimit);
}

std::uint8_t Memory::load_byte(std::uint32_t address) const {
  const auto it = pages_.find(address / kPageSize);
  return it == pages_.end() ? 0 : it->second[address % kPageSize];
}

void Memory::store_byte(std::uint32_t address, std::uint8_t value) {
  auto [it, inserted] = pages_.try_emplace(address / kPageSize);
  if (inserted) it->second.fill(0);
  it->second[address % kPageSize] = value;
}

std::uint32_t Memory::load(std::uint32_t address, int size) const {
  std::uint32_t value = 0;
  for (int i = 0; i < size; ++i) value |= std::uint32_t{load_byte(address + i)} << (8 * i);
  return value;
}

void Memory::store(std::uint32_t address, std::uint32_t value, int size) {
  for (int i = 0; i < size; ++i) store_byte(address + i, static_cast<std::uint8_t>(value >> (8 * i)));
}

void Memory::load_image(const MachineImage& image) {
  const auto& text = image.text_bytes();
  for (std::size_t i = 0; i < text.size(); ++i) store_byte(kTextBase + i, text[i]);
  const auto& data = image.data_bytes();
  for (std::size_t i = 0; i < data.size(); ++i) store_byte(kDataBase + i, data[i]);
}

bool Memory::operator==(const Memory& other) const {
  auto covered = [](const std::map<std::uint32_t, Page>& a, const std::map<std::uint32_t, Page>& b) {
    for (const auto& [index, page] : a) {
      const auto it = b.find(index);
      if (it != b.end()) {
        if (it->second != page) return false;
      } else if (std::any_of(page.begin(), page.end(), [](std::uint8_t v) { return v != 0; })) {
        return false;
      }
    }
    return true;
  };
  return covered(pages_, other.pages_) && covered(other.pages_, pages_);
}

std::string_view fault_kind_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::kIllegalInstruction: return "IllegalInstruction";
    case FaultKind::kMisalignedFetch: return "MisalignedFetch";
    case FaultKind::kMisalignedAccess: return "MisalignedAccess";
    case FaultKind::kMemoryOutOfRange: return "MemoryOutOfRange";
    case FaultKind::kBreakpoint: return "Breakpoint";
    case FaultKind::kUnknownService: return "UnknownService";
  }
  return "?";
}

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kHalted: return "halted";
    case StopReason::kFault: return "fault";
    case StopReason::kStepLimit: return "step_limit";
    case StopReason::kAwaitingInput: return "awaiting_input";
  }
  return "?";
}

MachineState reset(const MachineImage& image) {
  MachineState state;
  state.pc = kTextBase;
  state.regs[2] = kStackPointerInit;
  state.memory.load_image(image);
  return state;
}

namespace {

constexpr std::uint8_t kOpLui = 0x37;
constexpr std::uint8_t kOpAuipc = 0x17;
constexpr std::uint8_t kOpJal = 0x6F;
constexpr std::uint8_t kOpJalr = 0x67;
constexpr std::uint8_t kOpBranch = 0x63;
constexpr std::uint8_t kOpLoad = 0x03;
constexpr std::uint8_t kOpStore = 0x23;
constexpr std::uint8_t kOpImm = 0x13;
constexpr std::uint8_t kOpReg = 0x33;
constexpr std::uint8_t kOpSystem = 0x73;

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

// Pending writes of one instruction; committed only if nothing faults.
class Execution {
 public:
  explicit Execution(MachineState& state) : state_(state) {}

  std::uint32_t reg(int r) const { return state_.regs[r]; }

  void set_reg(int r, std::uint32_t value) {
    if (r == 0) return;
    reg_writes_.emplace_back(r, value);
  }

  bool load(std::uint32_t address, int size, std::uint32_t& out) {
    if (!check_access(address, size)) return false;
    out = state_.memory.load(address, size);
    return true;
  }

  bool store(std::uint32_t address, std::uint32_t value, int size) {
    if (!check_access(address, size)) return false;
    for (int i = 0; i < size; ++i) {
      mem_writes_.emplace_back(address + i, static_cast<std::uint8_t>(value >> (8 * i)));
    }
    return true;
  }

  bool jump(std::uint32_t target) {
    if (target % 4 != 0) {
      fail(FaultKind::kMisalignedFetch, target, "jump target " + hex(target) + " is not aligned");
      return false;
    }
    next_pc_ = target;
    return true;
  }

  void fail(FaultKind kind, std::uint32_t address, std::string message) {
    fault_ = Fault{kind, state_.pc, address, std::move(message)};
  }

  const std::optional<Fault>& fault() const { return fault_; }

  ChangeSet commit(bool halt) {
    ChangeSet changes;
    changes.pc_before = state_.pc;
    for (const auto& [r, v] : reg_writes_) {
      state_.regs[r] = v;
      changes.registers_written.push_back(r);
    }
    for (const auto& [a, v] : mem_writes_) {
      state_.memory.store_byte(a, v);
      changes.memory_bytes_written.push_back(a);
    }
    std::sort(changes.registers_written.begin(), changes.registers_written.end());
    changes.registers_written.erase(
        std::unique(changes.registers_written.begin(), changes.registers_written.end()),
        changes.registers_written.end());
    std::sort(changes.memory_bytes_written.begin(), changes.memory_bytes_written.end());
    changes.memory_bytes_written.erase(
        std::unique(changes.memory_bytes_written.begin(), changes.memory_bytes_written.end()),
        changes.memory_bytes_written.end());
    state_.pc = next_pc_.value_or(state_.pc + 4);
    changes.pc_after = state_.pc;
    state_.halted = halt;
    ++state_.steps_executed;
    state_.last_changes = changes;
    return changes;
  }

 private:
  bool check_access(std::uint32_t address, int size) {
    if (address % static_cast<std::uint32_t>(size) != 0) {
      fail(FaultKind::kMisalignedAccess, address,
           "access of " + std::to_string(size) + " bytes at " + hex(address) + " is misaligned");
      return false;
    }
    if (!Memory::in_range(address, static_cast<std::uint32_t>(size))) {
      fail(FaultKind::kMemoryOutOfRange, address, "address " + hex(address) + " is out of range");
      return false;
    }
    return true;
  }

  MachineState& state_;
  std::vector<std::pair<int, std::uint32_t>> reg_writes_;
  std::vector<std::pair<std::uint32_t, std::uint8_t>> mem_writes_;
  std::optional<std::uint32_t> next_pc_;
  std::optional<Fault> fault_;
};

std::uint32_t alu(std::uint8_t funct3, std::uint8_t funct7, std::uint32_t a, std::uint32_t b) {
  const auto sa = static_cast<std::int32_t>(a);
  const auto sb = static_cast<std::int32_t>(b);
  if (funct7 == 0x01) {
    switch (funct3) {
      case 0: return a * b;
      case 1: return static_cast<std::uint32_t>((std::int64_t{sa} * std::int64_t{sb}) >> 32);
      case 2: return static_cast<std::uint32_t>((std::int64_t{sa} * std::int64_t{b}) >> 32);
      case 3: return static_cast<std::uint32_t>((std::uint64_t{a} * std::uint64_t{b}) >> 32);
      case 4:
        if (b == 0) return 0xFFFF'FFFF;
        if (sa == std::numeric_limits<std::int32_t>::min() && sb == -1) return a;
        return static_cast<std::uint32_t>(sa / sb);
      case 5: return b == 0 ? 0xFFFF'FFFF : a / b;
      case 6:
        if (b == 0) return a;
        if (sa == std::numeric_limits<std::int32_t>::min() && sb == -1) return 0;
        return static_cast<std::uint32_t>(sa % sb);
      case 7: return b == 0 ? a : a % b;
    }
  }
  const bool alt = funct7 == 0x20;
  switch (funct3) {
    case 0: return alt ? a - b : a + b;
    case 1: return a << (b & 31);
    case 2: return sa < sb ? 1 : 0;
    case 3: return a < b ? 1 : 0;
    case 4: return a ^ b;
    case 5: return alt ? static_cast<std::uint32_t>(sa >> (b & 31)) : a >> (b & 31);
    case 6: return a | b;
    case 7: return a & b;
  }
  return 0;
}

bool branch_taken(std::uint8_t funct3, std::uint32_t a, std::uint32_t b) {
  const auto sa = static_cast<std::int32_t>(a);
  const auto sb = static_cast<std::int32_t>(b);
  switch (funct3) {
    case 0: return a == b;
    case 1: return a != b;
    case 4: return sa < sb;
    case 5: return sa >= sb;
    case 6: return a < b;
    case 7: return a >= b;
  }
  return false;
}

constexpr std::uint32_t kMaxStringBytes = 1u << 16;

}  // namespace

StepResult step(MachineState& state, IoHooks& hooks) {
  if (state.halted) throw Error(ErrorCode::kAlreadyHalted, "the machine has stopped; reset it");

  Execution ex(state);
  bool halt = false;
  StepResult result;
  auto faulted = [&](Fault fault) {
    state.fault = std::move(fault);
    state.halted = true;
    state.last_changes = ChangeSet{{}, {}, state.pc, state.pc};
    result.outcome = StepOutcome::kFaulted;
    result.changes = state.last_changes;
    return result;
  };

  const std::uint32_t pc = state.pc;
  if (pc % 4 != 0) {
    return faulted(Fault{FaultKind::kMisalignedFetch, pc, pc, "pc " + hex(pc) + " is not aligned"});
  }
  if (!Memory::in_range(pc, 4)) {
    return faulted(Fault{FaultKind::kMemoryOutOfRange, pc, pc, "pc " + hex(pc) + " is out of range"});
  }
  const std::uint32_t word = state.memory.load(pc, 4);
  const std::optional<DecodedInstruction> decoded = decode(word);
  if (!decoded) {
    return faulted(Fault{FaultKind::kIllegalInstruction, pc, word,
                         "illegal instruction " + hex(word) + " at " + hex(pc)});
  }
  const DecodedInstruction& d = *decoded;
  const InstructionSpec& spec = *d.spec;
  const std::uint8_t f3 = spec.funct3.value_or(0);
  const int rd = d.rd.value_or(0);
  const std::uint32_t a = ex.reg(d.rs1.value_or(0));
  const std::uint32_t b = ex.reg(d.rs2.value_or(0));
  const auto imm = static_cast<std::uint32_t>(d.immediate);

  switch (spec.opcode) {
    case kOpLui:
      ex.set_reg(rd, imm << 12);
      break;
    case kOpAuipc:
      ex.set_reg(rd, pc + (imm << 12));
      break;
    case kOpJal:
      if (ex.jump(pc + imm)) ex.set_reg(rd, pc + 4);
      break;
    case kOpJalr:
      if (ex.jump((a + imm) & ~1u)) ex.set_reg(rd, pc + 4);
      break;
    case kOpBranch:
      if (branch_taken(f3, a, b)) ex.jump(pc + imm);
      break;
    case kOpLoad: {
      const int size = 1 << (f3 & 3);
      std::uint32_t value = 0;
      if (ex.load(a + imm, size, value)) {
        if (f3 == 0) value = static_cast<std::uint32_t>(static_cast<std::int8_t>(value));
        if (f3 == 1) value = static_cast<std::uint32_t>(static_cast<std::int16_t>(value));
        ex.set_reg(rd, value);
      }
      break;
    }
    case kOpStore:
      ex.store(a + imm, b, 1 << f3);
      break;
    case kOpImm: {
      // shifts carry their funct7 in imm[11:5]
      const std::uint8_t f7 = spec.funct7.value_or(0);
      ex.set_reg(rd, alu(f3, f7, a, imm));
      break;
    }
    case kOpReg:
      ex.set_reg(rd, alu(f3, spec.funct7.value_or(0), a, b));
      break;
    case kOpSystem: {
      if (spec.fixed_imm12 == 1) {
        ex.fail(FaultKind::kBreakpoint, pc, "breakpoint at " + hex(pc));
        break;
      }
      const std::uint32_t service = ex.reg(17);
      const std::uint32_t a0 = ex.reg(10);
      switch (static_cast<Service>(service)) {
        case Service::kPrintInt:
          if (hooks.write_text) hooks.write_text(std::to_string(static_cast<std::int32_t>(a0)));
          break;
        case Service::kPrintString: {
          std::string text;
          std::uint32_t at = a0;
          for (;; ++at) {
            if (!Memory::in_range(at) || at - a0 >= kMaxStringBytes) {
              ex.fail(FaultKind::kMemoryOutOfRange, at,
                      "string at " + hex(a0) + " is not terminated in range");
              break;
            }
            const std::uint8_t c = state.memory.load_byte(at);
            if (c == 0) break;
            text.push_back(static_cast<char>(c));
          }
          if (!ex.fault() && hooks.write_text) hooks.write_text(text);
          break;
        }
        case Service::kReadInt: {
          std::optional<std::int32_t> value;
          if (hooks.read_integer) value = hooks.read_integer();
          if (!value) {
            result.outcome = StepOutcome::kAwaitingInput;
            result.changes = ChangeSet{{}, {}, pc, pc};
            return result;
          }
          ex.set_reg(10, static_cast<std::uint32_t>(*value));
          break;
        }
        case Service::kStop:
          halt = true;
          break;
        default:
          ex.fail(FaultKind::kUnknownService, service,
                  "unknown ecall service " + std::to_string(service));
          break;
      }
      break;
    }
    default:
      ex.fail(FaultKind::kIllegalInstruction, word, "illegal instruction " + hex(word));
      break;
  }

  if (ex.fault()) return faulted(*ex.fault());
  result.changes = ex.commit(halt);
  result.outcome = halt ? StepOutcome::kHalted : StepOutcome::kExecuted;
  return result;
}

RunResult run(MachineState& state, IoHooks& hooks, std::uint64_t max_steps,
              const StepObserver& observer) {
  RunResult result;
  if (state.halted) {
    throw Error(ErrorCode::kAlreadyHalted, "the machine has stopped; reset it");
  }
  while (result.steps < max_steps) {
    const StepResult r = step(state, hooks);
    if (r.outcome == StepOutcome::kAwaitingInput) {
      result.reason = StopReason::kAwaitingInput;
      return result;
    }
    if (r.outcome == StepOutcome::kFaulted) {
      result.reason = StopReason::kFault;
      return result;
    }
    ++result.steps;
    if (observer && !observer(state, r)) {
      result.reason = state.halted ? StopReason::kHalted : StopReason::kStepLimit;
      return result;
    }
    if (r.outcome == StepOutcome::kHalted) {
      result.reason = StopReason::kHalted;
      return result;
    }
  }
  result.reason = StopReason::kStepLimit;
  return result;
}

}  // namespace rvasm
