#pragma once

// Brute-force reference for the migration selection pass, written as a
// line-by-line transcription of the sampling-window policy loop and kept
// deliberately independent of the library implementation: plain maps, a
// mutable placement it updates move by move, no shared helpers.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hurryup/mapper.hpp"

namespace oracle {

struct Placement {
  std::map<int, int> core_of_thread;
  std::map<int, int> thread_on_core;

  void map_thread(int tid, int core) {
    auto old = core_of_thread.find(tid);
    if (old != core_of_thread.end()) {
      auto occ = thread_on_core.find(old->second);
      if (occ != thread_on_core.end() && occ->second == tid) thread_on_core.erase(occ);
      core_of_thread.erase(old);
    }
    core_of_thread[tid] = core;
    thread_on_core[core] = tid;
  }
};

inline std::vector<hurryup::mapper::Move> select(
    const std::map<std::string, std::pair<int, double>>& request_table,
    Placement placement, int big_cores, double now_ms, double migration_threshold) {
  // ThreadsOnLittle = []
  std::vector<std::pair<int, double>> threads_on_little;
  for (const auto& [rid, rec] : request_table) {
    int tid = rec.first;
    double time_elapsed = now_ms - rec.second;
    if (time_elapsed > migration_threshold) {
      auto core = placement.core_of_thread.find(tid);
      bool on_little = core != placement.core_of_thread.end() && core->second >= big_cores;
      if (on_little) threads_on_little.push_back({tid, time_elapsed});
    }
  }
  // sort by TimeElapsed descending (ties: lower thread id first)
  std::sort(threads_on_little.begin(), threads_on_little.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });

  std::vector<hurryup::mapper::Move> moves;
  for (int b = 0; b < big_cores; ++b) {
    if (b >= static_cast<int>(threads_on_little.size())) break;
    int big_core = b;
    std::optional<int> thread_on_big;
    if (auto it = placement.thread_on_core.find(big_core);
        it != placement.thread_on_core.end())
      thread_on_big = it->second;
    int thread_id = threads_on_little[b].first;
    int little_core = placement.core_of_thread.at(thread_id);

    hurryup::mapper::Move m;
    m.thread_id = thread_id;
    m.to_core_id = big_core;
    placement.map_thread(thread_id, big_core);
    if (thread_on_big) {
      m.displaced_thread_id = *thread_on_big;
      m.displaced_to_core_id = little_core;
      placement.map_thread(*thread_on_big, little_core);
    }
    moves.push_back(m);
  }
  return moves;
}

}  // namespace oracle
