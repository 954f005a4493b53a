#include <gtest/gtest.h>

#include "rvasm/assembler.hpp"
#include "rvasm/edit_trace.hpp"
#include "rvasm/incremental.hpp"
#include "rvasm/state_dump.hpp"
#include "support/trace_gen.hpp"

namespace rvasm {
namespace {

// Checks the incremental state against a full assembly after every event.
class StepEquivalence : public ::testing::TestWithParam<int> {};

TEST_P(StepEquivalence, IncrementalMatchesFullAfterEveryEvent) {
  const int first = GetParam();
  for (int seed = first; seed < first + 25; ++seed) {
    testing::TraceGenerator gen(static_cast<std::uint64_t>(seed));
    const std::string text = gen.program(120);
    Document doc(text);
    std::vector<EditEvent> events;
    while (events.size() < 80) gen.edits(doc, events);
    LiveAssembler live(text);
    for (std::size_t i = 0; i < events.size(); ++i) {
      live.apply(events[i]);
      const std::string expected = dump_state(assemble_full(live.document().lines()),
                                              DumpStyle::kObservable);
      ASSERT_EQ(dump_state(live.state(), DumpStyle::kObservable), expected)
          << "seed " << seed << " event " << i << " " << edit_event_to_json(events[i]).dump();
    }
    EXPECT_EQ(live.document(), doc);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, StepEquivalence, ::testing::Values(0, 25, 50, 75));

TEST(Equivalence, ModeSwitchMidTrace) {
  testing::TraceGenerator gen(99);
  const std::string text = gen.program(60);
  Document doc(text);
  std::vector<EditEvent> events;
  while (events.size() < 60) gen.edits(doc, events);
  LiveAssembler live(text);
  for (std::size_t i = 0; i < events.size(); ++i) {
    live.set_mode(i % 7 < 3 ? AssemblyMode::kFull : AssemblyMode::kIncremental);
    live.apply(events[i]);
  }
  EXPECT_EQ(dump_state(live.state(), DumpStyle::kObservable),
            dump_state(assemble_full(doc.text()), DumpStyle::kObservable));
}

}  // namespace
}  // namespace rvasm
