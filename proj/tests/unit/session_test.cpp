#include <gtest/gtest.h>

#include "rvasm/session.hpp"
#include "support/test_data.hpp"
#include "support/trace_gen.hpp"

namespace rvasm {
namespace {

using nlohmann::json;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kNone;
}

TEST(Session, CreateEmpty) {
  Session s("s1", "");
  EXPECT_EQ(s.mode(), AssemblyMode::kIncremental);
  EXPECT_EQ(s.state().image.text_size(), 0u);
  EXPECT_TRUE(s.query_diagnostics().empty());
  EXPECT_FALSE(s.machine());
}

TEST(Session, CreateWithError) {
  Session s("s1", "nop\nfrob x1\nnop");
  const json d = s.query_diagnostics();
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]["code"], "UnknownMnemonic");
  EXPECT_EQ(s.state().image.read_word(4), 0u);
}

TEST(Session, EditDeltas) {
  Session s("s1", "loop\nnop\n\n");
  EXPECT_TRUE(s.apply_edit(EditEvent::insert_char(0, 4, ':')).full_reassembly);
  const Delta d = s.apply_edit(EditEvent::insert_char(2, 0, 'a'));
  EXPECT_EQ(d.edit_class.tag, EditClassTag::kIncrementalLineInsert);
  EXPECT_EQ(d.word_inserted_at, 4u);
  EXPECT_FALSE(s.apply_edit(EditEvent::insert_newline(1, 0)).image_changed);
  EXPECT_EQ(code_of([&] { s.apply_edit(EditEvent::insert_char(40, 0, 'x')); }),
            ErrorCode::kPositionOutOfBounds);
}

TEST(Session, ControlRules) {
  Session s("s1", "addi x1, x0, 5\nli a7, 10\necall");
  EXPECT_EQ(code_of([&] { s.control(ControlCommand::kStep); }), ErrorCode::kNoMachine);
  EXPECT_EQ(code_of([&] { s.query_registers(); }), ErrorCode::kNoMachine);
  s.control(ControlCommand::kReset);
  const json regs = s.query_registers();
  EXPECT_EQ(regs["regs"].size(), 32u);
  EXPECT_EQ(regs["regs"][2], kStackPointerInit);
  EXPECT_TRUE(regs["changed"].empty());
  const ExecutionReport r = s.control(ControlCommand::kStep);
  EXPECT_EQ(r.steps, 1u);
  EXPECT_EQ(s.query_registers()["changed"], json::array({1}));
  s.apply_edit(EditEvent::insert_newline(0, 0));
  EXPECT_TRUE(s.machine_stale());
  EXPECT_EQ(code_of([&] { s.control(ControlCommand::kStep); }), ErrorCode::kStaleMachine);
  s.control(ControlCommand::kReset);
  const ExecutionReport done = s.control(ControlCommand::kRun, 100);
  EXPECT_EQ(done.stop_reason, StopReason::kHalted);
  EXPECT_EQ(code_of([&] { s.control(ControlCommand::kStep); }), ErrorCode::kAlreadyHalted);
}

TEST(Session, RunSumFixture) {
  Session s("s1", testing::read_text("fixtures/sum.s"));
  s.control(ControlCommand::kReset);
  const ExecutionReport r = s.control(ControlCommand::kRun, 10000);
  EXPECT_EQ(r.stop_reason, StopReason::kHalted);
  EXPECT_EQ(r.output, "55");
  EXPECT_EQ(r.machine["regs"][10], 55);
}

TEST(Session, AnimateStreamsEverySteps) {
  Session s("s1", testing::read_text("fixtures/sum.s"));
  s.control(ControlCommand::kReset);
  std::vector<json> steps;
  const ExecutionReport r =
      s.control(ControlCommand::kAnimate, 5, [&](const json& step) { steps.push_back(step); });
  EXPECT_EQ(r.steps, 5u);
  ASSERT_EQ(steps.size(), 5u);
  EXPECT_EQ(steps[4]["steps_executed"], 5);
  EXPECT_EQ(steps[0]["changes"]["registers"], json::array({5}));
}

TEST(Session, InputSuspendsAndResumes) {
  Session s("s1", testing::read_text("fixtures/echo.s"));
  s.control(ControlCommand::kReset);
  ExecutionReport r = s.control(ControlCommand::kRun, 1000);
  EXPECT_TRUE(r.awaiting_input);
  EXPECT_TRUE(s.awaiting_input());
  auto resumed = s.provide_input(12);
  ASSERT_TRUE(resumed);
  EXPECT_EQ(resumed->output, "12");
  EXPECT_TRUE(resumed->awaiting_input);
  resumed = s.provide_input(0);
  ASSERT_TRUE(resumed);
  EXPECT_EQ(resumed->stop_reason, StopReason::kHalted);
  EXPECT_FALSE(s.provide_input(3));
}

TEST(Session, StopInterruptsRun) {
  Session s("s1", "loop:\nj loop");
  s.control(ControlCommand::kReset);
  int seen = 0;
  const ExecutionReport r = s.control(ControlCommand::kAnimate, 1000000, [&](const json&) {
    if (++seen == 10) s.request_stop();
  });
  EXPECT_EQ(r.steps, 10u);
  EXPECT_EQ(r.stop_reason, StopReason::kStepLimit);
}

TEST(Session, MemoryAndDisassemblyPanes) {
  Session s("s1", "addi x1, x2, -121\nmsg:\n.string \"hi\"");
  const json mem = s.query_memory(kDataBase, 4);
  EXPECT_EQ(mem["bytes"], json::array({'h', 'i', 0, 0}));
  EXPECT_EQ(mem["source"], "image");
  EXPECT_EQ(code_of([&] { s.query_memory(0, kMaxQueryBytes + 4); }), ErrorCode::kRangeTooLarge);
  EXPECT_EQ(code_of([&] { s.query_memory(2, 4); }), ErrorCode::kMisalignedRange);
  const json dis = s.query_disassembly(0, 3);
  ASSERT_EQ(dis["rows"].size(), 3u);
  EXPECT_EQ(dis["rows"][0]["text"], "addi x1, x2, -121");
}

TEST(Session, SymbolsAndExplain) {
  Session s("s1", "top:\naddi x1, x2, -121\nj top");
  const json syms = s.query_symbols();
  ASSERT_EQ(syms.size(), 1u);
  EXPECT_EQ(syms[0]["label"], "top");
  EXPECT_EQ(syms[0]["references"].size(), 1u);
  const json e = s.query_explain({{"kind", "instruction"}, {"line", 1}});
  EXPECT_EQ(e["mnemonic"], "addi");
  EXPECT_EQ(e["immediate_decimal"], -121);
  EXPECT_EQ(s.query_explain({{"kind", "int"}, {"word", "0xFFFFFF87"}})["decimal_value"], -121);
  EXPECT_EQ(s.query_explain({{"kind", "double"}, {"word", "0x3FF0000000000000"}})["decimal_value"], 1.0);
  EXPECT_EQ(code_of([&] { s.query_explain({{"kind", "instruction"}, {"line", 0}}); }),
            ErrorCode::kUndecodable);
}

json panes(const Session& s) {
  json out = {{"diagnostics", s.query_diagnostics()},
              {"symbols", s.query_symbols()},
              {"text", s.query_text()},
              {"memory", s.query_memory(0, 256)},
              {"data", s.query_memory(kDataBase, 64)},
              {"disassembly", s.query_disassembly(0, 32)}};
  return out;
}

TEST(Session, ModeEquivalenceOfPanes) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    testing::TraceGenerator gen(seed);
    const std::string text = gen.program(60);
    Document doc(text);
    std::vector<EditEvent> events;
    while (events.size() < 40) gen.edits(doc, events);
    Session inc("a", text, AssemblyMode::kIncremental);
    Session full("b", text, AssemblyMode::kFull);
    for (const EditEvent& e : events) {
      inc.apply_edit(e);
      full.apply_edit(e);
      ASSERT_EQ(panes(inc), panes(full)) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace rvasm
