#include <gtest/gtest.h>

#include "rvasm/assembler.hpp"
#include "rvasm/incremental.hpp"
#include "rvasm/state_dump.hpp"

namespace rvasm {
namespace {

TEST(StateDump, Header) {
  EXPECT_EQ(dump_state(assemble_full("")).rfind("rvasm-state 1 complete\n", 0), 0u);
  EXPECT_EQ(dump_state(assemble_full(""), DumpStyle::kObservable).rfind("rvasm-state 1 observable\n", 0), 0u);
}

TEST(StateDump, LineRowsAndBytes) {
  const std::string dump = dump_state(assemble_full("loop:\naddi x1, x2, -121\nj loop\n.word 7"));
  EXPECT_NE(dump.find("1 instruction addr=0x00000000 len=4 word=0xf8710093 err=0 src=\"addi x1, x2, -121\""),
            std::string::npos)
      << dump;
  EXPECT_NE(dump.find("loop decl=0 addr=0x00000000 seg=text"), std::string::npos) << dump;
  EXPECT_NE(dump.find("text 8\n"), std::string::npos) << dump;
  EXPECT_NE(dump.find("data 4\n10000000: 07 00 00 00"), std::string::npos) << dump;
}

TEST(StateDump, ObservableDropsStaleReferences) {
  LiveAssembler live("a:\nnop\nj a");
  live.apply(EditEvent::insert_char(2, 0, '#'));
  const std::string complete = dump_state(live.state());
  const std::string observable = dump_state(live.state(), DumpStyle::kObservable);
  EXPECT_EQ(observable, dump_state(assemble_full(live.document().text()), DumpStyle::kObservable));
  EXPECT_EQ(observable.find("stale"), std::string::npos);
}

TEST(StateDump, IncludesDiagnostics) {
  const std::string dump = dump_state(assemble_full("frob"));
  EXPECT_NE(dump.find("  diag UnknownMnemonic 0-4"), std::string::npos) << dump;
}

}  // namespace
}  // namespace rvasm
