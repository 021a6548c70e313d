#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <vector>

#include "hurryup/affinity.hpp"
#include "hurryup/mapper.hpp"
#include "hurryup/metrics.hpp"
#include "hurryup/statsproto.hpp"

namespace hurryup::live {

struct SessionStats {
  std::vector<double> completed_latencies_ms;
  std::int64_t completed = 0;
  std::int64_t in_flight = 0;
  std::int64_t rejected_events = 0;
  std::int64_t windows = 0;
  std::int64_t moves = 0;
};

// The mapper wired to a real stats stream: latency accounting from begin/end
// recurrence, thread discovery with round-robin placement, sampling-window
// decisions pushed to an affinity backend. Timing is the caller's job (the
// CLI runs a reader thread plus a wall-clock window loop); this class is the
// deterministic part.
class LiveSession {
 public:
  LiveSession(const Topology& topo, const MapperConfig& cfg,
              affinity::Backend& backend, std::ostream& log);

  void ingest(const proto::StatsEvent& e);
  // Runs a decision pass if the sampling window has elapsed at now_ms.
  void maybe_window(double now_ms);
  // Unconditional decision pass (used at a window boundary).
  void run_window(double now_ms);

  double next_window_ms() const {
    return start_sampling_ms_ + cfg_.sampling_time_ms;
  }
  void anchor_clock(double now_ms);  // sets the first window's origin

  const SessionStats& stats() const { return stats_; }
  metrics::Report report() const;

 private:
  Topology topo_;
  MapperConfig cfg_;
  affinity::Backend& backend_;
  std::ostream& log_;
  mapper::RequestTable table_;
  mapper::CoreOccupancy occ_;
  double start_sampling_ms_ = 0;
  bool clock_anchored_ = false;
  int next_core_slot_ = 0;
  std::set<int> known_threads_;
  std::set<int> unmapped_threads_;
  SessionStats stats_;
};

}  // namespace hurryup::live
