#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "hurryup/live_session.hpp"

using namespace hurryup;
using namespace hurryup::live;

namespace {

struct RecordingBackend : affinity::Backend {
  std::vector<std::pair<int, int>> placements;
  std::vector<mapper::MigrationPlan> plans;
  void place(int tid, int core) override { placements.push_back({tid, core}); }
  void apply(const mapper::MigrationPlan& plan, double) override {
    plans.push_back(plan);
  }
};

}  // namespace

TEST_CASE("snapshot session: one completion at 70 ms, four in flight") {
  RecordingBackend backend;
  std::ostringstream log;
  LiveSession session({2, 4}, {25, 50}, backend, log);
  std::vector<proto::StatsEvent> events{
      {75, "ixI.", 1498060927539}, {77, "1J.D", 1498060927953},
      {78, "579[", 1498060927954}, {79, "Xrt@", 1498060928003},
      {80, "qc8o", 1498060928014}, {77, "1J.D", 1498060928023},
  };
  for (const auto& e : events) session.ingest(e);
  CHECK(session.stats().completed == 1);
  CHECK(session.stats().in_flight == 4);
  REQUIRE(session.stats().completed_latencies_ms.size() == 1);
  CHECK(session.stats().completed_latencies_ms[0] == 70.0);
  auto report = session.report();
  CHECK(report.requests == 1);
  CHECK(report.p90_ms == 70.0);
  // five distinct threads discovered, placed round-robin over core ids
  REQUIRE(backend.placements.size() == 5);
  CHECK(backend.placements[0] == std::pair<int, int>{75, 0});
  CHECK(backend.placements[4] == std::pair<int, int>{80, 4});
}

TEST_CASE("windows fire on the sampling cadence and apply plans") {
  RecordingBackend backend;
  std::ostringstream log;
  LiveSession session({1, 5}, {25, 50}, backend, log);
  session.anchor_clock(1000);
  session.ingest({10, "rq1", 1000});  // thread 10 -> core 0 (big)
  session.ingest({11, "rq2", 1000});  // thread 11 -> core 1 (little)
  session.maybe_window(1010);         // not yet
  CHECK(session.stats().windows == 0);
  session.maybe_window(1030);  // window elapses; rq2 elapsed 30 <= 50: no move
  CHECK(session.stats().windows == 1);
  CHECK(session.stats().moves == 0);
  session.maybe_window(1040);  // next window starts at 1030
  CHECK(session.stats().windows == 1);
  session.maybe_window(1090);  // rq2 elapsed 90 > 50 on a little core
  CHECK(session.stats().windows == 2);
  REQUIRE(session.stats().moves == 1);
  REQUIRE(backend.plans.size() == 1);
  CHECK(backend.plans[0][0].thread_id == 11);
  CHECK(backend.plans[0][0].to_core_id == 0);
  REQUIRE(backend.plans[0][0].displaced_thread_id.has_value());
  CHECK(*backend.plans[0][0].displaced_thread_id == 10);
  CHECK(*backend.plans[0][0].displaced_to_core_id == 1);
  CHECK(log.str().find("window t=") != std::string::npos);
}

TEST_CASE("threads beyond the core count are tracked but never mapped") {
  RecordingBackend backend;
  std::ostringstream log;
  LiveSession session({1, 1}, {25, 50}, backend, log);
  session.ingest({1, "a", 100});
  session.ingest({2, "b", 100});
  session.ingest({3, "c", 100});  // third thread, two cores
  CHECK(backend.placements.size() == 2);
  CHECK(log.str().find("not mapped") != std::string::npos);
  session.ingest({3, "c", 250});  // its latency still counts
  CHECK(session.stats().completed == 1);
  CHECK(session.stats().completed_latencies_ms[0] == 150.0);
  // a window never proposes moving the unmapped thread
  session.anchor_clock(100);
  session.run_window(1000);
  for (const auto& plan : backend.plans)
    for (const auto& m : plan) CHECK(m.thread_id != 3);
}

TEST_CASE("duplicate begins are rejected and counted") {
  RecordingBackend backend;
  std::ostringstream log;
  LiveSession session({1, 1}, {25, 50}, backend, log);
  session.ingest({1, "a", 100});
  session.ingest({1, "b", 120});
  CHECK(session.stats().rejected_events == 1);
  CHECK(session.stats().in_flight == 1);
}
