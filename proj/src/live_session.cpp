#include "hurryup/live_session.hpp"

#include <ostream>

namespace hurryup::live {

LiveSession::LiveSession(const Topology& topo, const MapperConfig& cfg,
                         affinity::Backend& backend, std::ostream& log)
    : topo_(topo), cfg_(cfg), backend_(backend), log_(log) {}

void LiveSession::anchor_clock(double now_ms) {
  if (clock_anchored_) return;
  clock_anchored_ = true;
  start_sampling_ms_ = now_ms;
}

void LiveSession::ingest(const proto::StatsEvent& e) {
  int tid = static_cast<int>(e.thread_id);
  if (auto it = table_.find(e.request_id); it != table_.end()) {
    // end event: the request's latency is the timestamp delta
    stats_.completed_latencies_ms.push_back(
        static_cast<double>(e.timestamp_ms) - it->second.start_timestamp_ms);
    ++stats_.completed;
    table_.erase(it);
    stats_.in_flight = static_cast<std::int64_t>(table_.size());
    return;
  }
  if (!known_threads_.count(tid)) {
    known_threads_.insert(tid);
    if (next_core_slot_ < topo_.core_count()) {
      int core = next_core_slot_++;
      occ_.place(tid, core);
      backend_.place(tid, core);
    } else {
      // more live threads than cores: observed for latency accounting only
      unmapped_threads_.insert(tid);
      log_ << "thread " << tid << " exceeds core count; tracked but not mapped\n";
    }
  }
  if (auto issue = mapper::ingest_event(table_, e)) {
    ++stats_.rejected_events;
    log_ << "rejected event: " << issue->reason << "\n";
  }
  stats_.in_flight = static_cast<std::int64_t>(table_.size());
}

void LiveSession::run_window(double now_ms) {
  auto plan = mapper::select_migrations(table_, occ_, topo_, now_ms, cfg_);
  ++stats_.windows;
  log_ << "window t=" << now_ms << " in_flight=" << table_.size()
       << " moves=" << plan.size() << "\n";
  if (!plan.empty()) {
    mapper::apply_plan(occ_, plan);
    backend_.apply(plan, now_ms);
    stats_.moves += static_cast<std::int64_t>(plan.size());
  }
  start_sampling_ms_ = now_ms;
}

void LiveSession::maybe_window(double now_ms) {
  anchor_clock(now_ms);
  if (now_ms - start_sampling_ms_ >= cfg_.sampling_time_ms) run_window(now_ms);
}

metrics::Report LiveSession::report() const {
  metrics::Report r = metrics::report_from_latencies(stats_.completed_latencies_ms);
  return r;
}

}  // namespace hurryup::live
