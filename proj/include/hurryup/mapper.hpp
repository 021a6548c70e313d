#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurryup/rng.hpp"
#include "hurryup/statsproto.hpp"
#include "hurryup/types.hpp"

namespace hurryup::mapper {

struct RequestRecord {
  int thread_id = -1;
  double start_timestamp_ms = 0;

  bool operator==(const RequestRecord&) const = default;
};

// In-flight requests keyed by request id. One active request per thread.
using RequestTable = std::map<std::string, RequestRecord>;

struct IngestIssue {
  proto::StatsEvent event;
  std::string reason;
};

// Id recurrence decides begin vs end: a known id removes its record, a new
// id inserts one. A begin naming a thread that already has an active request
// is rejected and reported (producer bug), leaving the table untouched.
std::optional<IngestIssue> ingest_event(RequestTable& table, const proto::StatsEvent& e);

// Thread <-> core placement, a partial bijection (threads never share a core
// here; the pool is never larger than the core count).
class CoreOccupancy {
 public:
  void place(int thread_id, int core_id);  // throws Error if either side is taken
  void detach(int thread_id);
  void relocate(int thread_id, int core_id);

  std::optional<int> thread_on(int core_id) const;
  std::optional<int> core_of(int thread_id) const;
  const std::map<int, int>& by_thread() const { return thread_to_core_; }
  std::size_t size() const { return thread_to_core_.size(); }

 private:
  std::map<int, int> core_to_thread_;
  std::map<int, int> thread_to_core_;
};

struct Move {
  int thread_id = -1;
  int to_core_id = -1;
  std::optional<int> displaced_thread_id;
  std::optional<int> displaced_to_core_id;

  bool operator==(const Move&) const = default;
};

// Ordered moves; when the target big core is occupied, the displaced pair
// records the swap of its thread onto the vacated little core.
using MigrationPlan = std::vector<Move>;

struct Candidate {
  int thread_id = -1;
  double elapsed_ms = 0;
};

// Threads that have been serving one request on a little core strictly
// longer than the threshold, longest elapsed first (ties by lower thread id).
std::vector<Candidate> migration_candidates(const RequestTable& table,
                                            const CoreOccupancy& occ,
                                            const Topology& topo, double now_ms,
                                            double threshold_ms);

// One decision pass: walk the big cores in id order, assigning the i-th
// candidate to the i-th big core until either side runs out. An occupied big
// core swaps its thread onto the candidate's vacated little core; an idle
// big core yields a plain move.
MigrationPlan select_migrations(const RequestTable& table, const CoreOccupancy& occ,
                                const Topology& topo, double now_ms,
                                const MapperConfig& cfg);

void apply_plan(CoreOccupancy& occ, const MigrationPlan& plan);

class PoolExceedsCores : public Error {
 public:
  using Error::Error;
};

// HurryUp places thread i on core (i mod cores), walking core ids in order;
// StaticRandom draws a distinct core per thread uniformly at random and the
// placement is permanent (no plans are ever produced for it).
CoreOccupancy initial_mapping(int pool_size, const Topology& topo, Policy policy, Rng& rng);

struct MapperState {
  RequestTable table;
  double start_sampling_time_ms = 0;
};

struct StepResult {
  std::optional<MigrationPlan> plan;  // present iff the sampling window elapsed
  std::vector<IngestIssue> issues;
};

// Ingests a batch (rejected events become issues, the step never halts),
// then emits a plan iff now - start_sampling_time >= sampling_time, in which
// case the window restarts at now. The caller enacts the plan and keeps
// `occ` in sync (apply_plan, or the engine's physical migration path).
StepResult mapper_step(MapperState& state, const CoreOccupancy& occ,
                       const Topology& topo,
                       std::span<const proto::StatsEvent> events, double now_ms,
                       const MapperConfig& cfg);

}  // namespace hurryup::mapper
