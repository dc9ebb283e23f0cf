#include <thread>

#include <gtest/gtest.h>

#include "support.hpp"
#include "websuite/errors.hpp"
#include "websuite/logmodel.hpp"

namespace websuite {
namespace {

using websuite::testing::read_file;
using websuite::testing::TempDir;

LogEntry entry(std::string_view ref, std::string payload, std::int64_t at = 0,
               std::string element = {}) {
  LogEntry e;
  e.ref = parse_ref(ref);
  e.payload = std::move(payload);
  e.at_ms = at;
  e.element_id = std::move(element);
  return e;
}

TEST(LogLine, FormatsRefAndPayload) {
  EXPECT_EQ(format_line(entry("click/iconbutton", "Search")), "click/iconbutton // Search");
  EXPECT_EQ(format_line(entry("nav", "/thanks?cart=x")), "nav // /thanks?cart=x");
  EXPECT_EQ(format_line(entry("type/text", "Name=John Doe")), "type/text // Name=John Doe");
}

TEST(LogLine, ParsesBack) {
  auto e = parse_line("click/iconbutton // Search");
  EXPECT_EQ(e.ref, parse_ref("click/iconbutton"));
  EXPECT_EQ(e.payload, "Search");
  auto n = parse_line("nav // /search?query=macbook");
  EXPECT_TRUE(n.is_nav());
  EXPECT_EQ(n.payload, "/search?query=macbook");
}

TEST(LogLine, PayloadMayContainSeparator) {
  auto e = parse_line("type/text // a // b");
  EXPECT_EQ(e.payload, "a // b");
  EXPECT_EQ(parse_line("click/button // ").payload, "");
}

TEST(LogLine, MalformedLines) {
  for (const char* bad : {"garbage", "click/button//x", "click/nothing // x", "Click/Button // x"}) {
    try {
      parse_line(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedLine) << bad;
    }
  }
}

TEST(Debounce, CollapsesRapidTyping) {
  LogStream s{"s", {entry("type/text", "Name=Jo", 0, "f"), entry("type/text", "Name=John", 200, "f")}};
  auto d = debounce_type_entries(s);
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_EQ(d.entries[0].payload, "Name=John");
}

TEST(Debounce, KeepsSlowTyping) {
  LogStream s{"s", {entry("type/text", "Name=Jo", 0, "f"), entry("type/text", "Name=John", 800, "f")}};
  EXPECT_EQ(debounce_type_entries(s).entries.size(), 2u);
  EXPECT_TRUE(debounce_type_entries(LogStream{}).entries.empty());
}

TEST(Debounce, WindowBoundaryIsExclusive) {
  LogStream s{"s", {entry("type/text", "A=1", 0, "f"), entry("type/text", "A=2", 500, "f")}};
  EXPECT_EQ(debounce_type_entries(s).entries.size(), 2u);
  s.entries[1].at_ms = 499;
  EXPECT_EQ(debounce_type_entries(s).entries.size(), 1u);
}

TEST(Debounce, ChainsSuccessiveGaps) {
  LogStream s{"s",
              {entry("type/text", "A=1", 0, "f"), entry("type/text", "A=12", 400, "f"),
               entry("type/text", "A=123", 800, "f")}};
  auto d = debounce_type_entries(s);
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_EQ(d.entries[0].payload, "A=123");
  EXPECT_EQ(d.entries[0].at_ms, 800);
}

TEST(Debounce, DifferentElementsOrInterleavingStaySeparate) {
  LogStream s{"s",
              {entry("type/text", "A=1", 0, "a"), entry("type/text", "B=1", 100, "b"),
               entry("type/text", "A=12", 200, "a")}};
  EXPECT_EQ(debounce_type_entries(s).entries.size(), 3u);
  LogStream t{"t",
              {entry("type/text", "A=1", 0, "a"), entry("click/button", "Go", 100),
               entry("type/text", "A=12", 200, "a")}};
  EXPECT_EQ(debounce_type_entries(t).entries.size(), 3u);
}

TEST(Debounce, WithoutElementIdUsesFieldLabel) {
  LogStream s{"s", {entry("type/text", "Name=J", 0), entry("type/text", "Name=Jo", 100),
                    entry("type/text", "City=B", 200)}};
  auto d = debounce_type_entries(s);
  ASSERT_EQ(d.entries.size(), 2u);
  EXPECT_EQ(d.entries[0].payload, "Name=Jo");
}

TEST(Debounce, NonTypeEntriesUntouched) {
  LogStream s{"s", {entry("click/button", "A", 0, "b"), entry("click/button", "A", 10, "b")}};
  EXPECT_EQ(debounce_type_entries(s).entries.size(), 2u);
}

TEST(LogStore, AppendsWithGaplessSeq) {
  TempDir dir;
  LogStore store(dir.path());
  store.open_session("s1", "task");
  EXPECT_EQ(store.append("s1", entry("click/button", "A", 5)), 1);
  EXPECT_EQ(store.append("s1", entry("click/button", "B", 3)), 2);
  auto snap = store.snapshot("s1");
  ASSERT_EQ(snap.entries.size(), 2u);
  EXPECT_EQ(snap.entries[1].at_ms, 5);  // clamped, never decreasing
  EXPECT_EQ(read_file(dir.path() / "task" / "s1.log"),
            "click/button // A\nclick/button // B\n");
}

TEST(LogStore, FileIsReadableBeforeClose) {
  TempDir dir;
  LogStore store(dir.path());
  store.open_session("s1", ".");
  store.append("s1", entry("type/text", "Name=J", 10, "field"));
  auto stream = read_log_file(store.log_path("s1"));
  ASSERT_EQ(stream.entries.size(), 1u);
  EXPECT_EQ(stream.entries[0].seq, 1);
  EXPECT_EQ(stream.entries[0].at_ms, 10);
  EXPECT_EQ(stream.entries[0].element_id, "field");
  EXPECT_EQ(stream.session_id, "s1");
}

TEST(LogStore, ClosedOrUnknownSession) {
  TempDir dir;
  LogStore store(dir.path());
  store.open_session("s1", ".");
  store.close_session("s1");
  try {
    store.append("s1", entry("click/button", "A"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSession);
  }
  EXPECT_THROW(store.append("nope", entry("click/button", "A")), Error);
  EXPECT_FALSE(store.has_session("nope"));
}

TEST(LogStore, RejectsNewlineInPayload) {
  TempDir dir;
  LogStore store(dir.path());
  store.open_session("s1", ".");
  EXPECT_THROW(store.append("s1", entry("click/button", "A\nB")), Error);
}

TEST(LogStore, ConcurrentSessionsKeepTheirOwnOrder) {
  TempDir dir;
  LogStore store(dir.path());
  constexpr int kSessions = 4;
  constexpr int kAppends = 200;
  for (int s = 0; s < kSessions; ++s) store.open_session("s" + std::to_string(s), ".");
  std::vector<std::thread> workers;
  for (int s = 0; s < kSessions; ++s) {
    workers.emplace_back([&, s] {
      for (int i = 0; i < kAppends; ++i) {
        store.append("s" + std::to_string(s), entry("click/button", std::to_string(i), i));
      }
    });
  }
  for (auto& w : workers) w.join();
  for (int s = 0; s < kSessions; ++s) {
    auto stream = read_log_file(dir.path() / ("s" + std::to_string(s) + ".log"));
    ASSERT_EQ(stream.entries.size(), static_cast<std::size_t>(kAppends));
    for (int i = 0; i < kAppends; ++i) {
      EXPECT_EQ(stream.entries[i].seq, i + 1);
      EXPECT_EQ(stream.entries[i].payload, std::to_string(i));
    }
  }
}

TEST(LogStore, ReadMissingFileThrows) {
  TempDir dir;
  EXPECT_THROW(read_log_file(dir.path() / "missing.log"), Error);
}

}  // namespace
}  // namespace websuite
