#include "hurryup/mapper.hpp"

#include <algorithm>

namespace hurryup::mapper {

std::optional<IngestIssue> ingest_event(RequestTable& table, const proto::StatsEvent& e) {
  auto it = table.find(e.request_id);
  if (it != table.end()) {
    table.erase(it);  // request already finished
    return std::nullopt;
  }
  for (const auto& [rid, rec] : table) {
    if (rec.thread_id == e.thread_id) {
      return IngestIssue{e, "thread " + std::to_string(e.thread_id) +
                                " already serving request '" + rid + "'"};
    }
  }
  table.emplace(e.request_id,
                RequestRecord{static_cast<int>(e.thread_id),
                              static_cast<double>(e.timestamp_ms)});
  return std::nullopt;
}

void CoreOccupancy::place(int thread_id, int core_id) {
  if (core_to_thread_.count(core_id))
    throw Error("core " + std::to_string(core_id) + " already occupied");
  if (thread_to_core_.count(thread_id))
    throw Error("thread " + std::to_string(thread_id) + " already placed");
  core_to_thread_[core_id] = thread_id;
  thread_to_core_[thread_id] = core_id;
}

void CoreOccupancy::detach(int thread_id) {
  auto it = thread_to_core_.find(thread_id);
  if (it == thread_to_core_.end()) return;
  core_to_thread_.erase(it->second);
  thread_to_core_.erase(it);
}

void CoreOccupancy::relocate(int thread_id, int core_id) {
  detach(thread_id);
  place(thread_id, core_id);
}

std::optional<int> CoreOccupancy::thread_on(int core_id) const {
  auto it = core_to_thread_.find(core_id);
  if (it == core_to_thread_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> CoreOccupancy::core_of(int thread_id) const {
  auto it = thread_to_core_.find(thread_id);
  if (it == thread_to_core_.end()) return std::nullopt;
  return it->second;
}

std::vector<Candidate> migration_candidates(const RequestTable& table,
                                            const CoreOccupancy& occ,
                                            const Topology& topo, double now_ms,
                                            double threshold_ms) {
  std::vector<Candidate> out;
  for (const auto& [rid, rec] : table) {
    double elapsed = now_ms - rec.start_timestamp_ms;
    if (!(elapsed > threshold_ms)) continue;  // strictly past the threshold
    auto core = occ.core_of(rec.thread_id);
    if (!core || topo.is_big(*core)) continue;
    out.push_back({rec.thread_id, elapsed});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.elapsed_ms != b.elapsed_ms) return a.elapsed_ms > b.elapsed_ms;
    return a.thread_id < b.thread_id;
  });
  return out;
}

MigrationPlan select_migrations(const RequestTable& table, const CoreOccupancy& occ,
                                const Topology& topo, double now_ms,
                                const MapperConfig& cfg) {
  auto candidates =
      migration_candidates(table, occ, topo, now_ms, cfg.migration_threshold_ms);
  MigrationPlan plan;
  for (int b = 0; b < topo.big_cores; ++b) {
    if (b >= static_cast<int>(candidates.size())) break;  // no more candidates
    int big_core = b;  // big core ids come first
    Move m;
    m.thread_id = candidates[b].thread_id;
    m.to_core_id = big_core;
    if (auto on_big = occ.thread_on(big_core)) {
      m.displaced_thread_id = *on_big;
      m.displaced_to_core_id = *occ.core_of(m.thread_id);
    }
    plan.push_back(m);
  }
  return plan;
}

void apply_plan(CoreOccupancy& occ, const MigrationPlan& plan) {
  for (const Move& m : plan) {
    occ.detach(m.thread_id);
    if (m.displaced_thread_id) occ.detach(*m.displaced_thread_id);
    occ.place(m.thread_id, m.to_core_id);
    if (m.displaced_thread_id)
      occ.place(*m.displaced_thread_id, *m.displaced_to_core_id);
  }
}

CoreOccupancy initial_mapping(int pool_size, const Topology& topo, Policy policy,
                              Rng& rng) {
  int cores = topo.core_count();
  if (pool_size > cores)
    throw PoolExceedsCores("thread pool of " + std::to_string(pool_size) +
                           " exceeds " + std::to_string(cores) + " cores");
  CoreOccupancy occ;
  if (policy == Policy::HurryUp) {
    for (int i = 0; i < pool_size; ++i) occ.place(i, i % cores);
  } else {
    std::vector<int> remaining(cores);
    for (int i = 0; i < cores; ++i) remaining[i] = i;
    for (int i = 0; i < pool_size; ++i) {
      int pick = rng.uniform_int(0, static_cast<int>(remaining.size()) - 1);
      occ.place(i, remaining[pick]);
      remaining.erase(remaining.begin() + pick);
    }
  }
  return occ;
}

StepResult mapper_step(MapperState& state, const CoreOccupancy& occ,
                       const Topology& topo,
                       std::span<const proto::StatsEvent> events, double now_ms,
                       const MapperConfig& cfg) {
  StepResult result;
  for (const auto& e : events) {
    if (auto issue = ingest_event(state.table, e))
      result.issues.push_back(std::move(*issue));
  }
  if (now_ms - state.start_sampling_time_ms >= cfg.sampling_time_ms) {
    result.plan = select_migrations(state.table, occ, topo, now_ms, cfg);
    state.start_sampling_time_ms = now_ms;
  }
  return result;
}

}  // namespace hurryup::mapper
