#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <queue>
#include <span>
#include <vector>

#include "hurryup/mapper.hpp"
#include "hurryup/rng.hpp"
#include "hurryup/types.hpp"
#include "hurryup/workload.hpp"

namespace hurryup::sim {

// Time a request spent pinned to one core, with the work units it got
// through there. Per-request dwell lists are what the work-conservation
// checks integrate over.
struct DwellSegment {
  int core_id = -1;
  double start_ms = 0;
  double end_ms = 0;
  double work_kw = 0;
};

struct RequestOutcome {
  std::int64_t id = 0;
  int keywords = 1;
  double work_units = 0;    // keywords scaled by the request's noise multiplier
  double overhead_ms = 0;   // noise-scaled fixed overhead, core-independent
  double arrival_ms = 0;
  double start_ms = -1;
  double completion_ms = -1;
  int migrations = 0;
  CoreType final_core_type = CoreType::Little;
  std::vector<DwellSegment> dwells;

  double latency_ms() const { return completion_ms - arrival_ms; }
};

// One row of the piecewise-constant power signal: these watts hold from t_ms
// until the next row's t_ms. The final row marks the makespan.
struct PowerSample {
  double t_ms = 0;
  double big_w = 0;
  double little_w = 0;
  double rest_w = 0;
};

struct Trace {
  std::vector<RequestOutcome> requests;  // arrival order
  std::vector<PowerSample> power;
  double big_energy_j = 0;
  double little_energy_j = 0;
  double rest_energy_j = 0;
  double makespan_ms = 0;
  std::int64_t arrived = 0;
  std::int64_t completed = 0;
  std::int64_t migrations = 0;

  double total_energy_j() const {
    return big_energy_j + little_energy_j + rest_energy_j;
  }
  std::uint64_t hash() const;  // bit-exact digest for determinism checks
};

double service_time_base_ms(int keywords, CoreType core, const ServiceModel& model);
// base * lognormal(1, noise_cv); with noise_cv = 0 this is the base exactly.
double service_time_ms(int keywords, CoreType core, const ServiceModel& model, Rng& rng);

struct ClusterWatts {
  double big_w = 0;
  double little_w = 0;
  double rest_w = 0;
};

ClusterWatts cluster_watts(const PowerModel& pm, const Topology& topo,
                           int big_active, int little_active);

struct ClusterEnergy {
  double big_j = 0;
  double little_j = 0;
  double rest_j = 0;
};

// Energy of one constant-activity interval, split by cluster.
ClusterEnergy integrate_power(const PowerModel& pm, const Topology& topo,
                              int big_active, int little_active, double dt_ms);

// Re-derive cluster energies from the trace's power rows (offline check
// against the engine's accumulated totals).
ClusterEnergy reintegrate_energy(const Trace& trace);

// Deterministic event-driven model of the server: open-loop arrivals into a
// single FIFO queue over a fixed thread pool, one thread per core, service
// progress at the core's speed, sampling-window migrations under the HurryUp
// policy, and piecewise-constant power accounting. Arrivals stop at
// duration_s; the run continues until the system drains.
class Engine {
 public:
  explicit Engine(const SimConfig& cfg);
  Engine(const SimConfig& cfg, std::vector<workload::Arrival> arrivals);

  // Processes one event; returns false once the system has drained.
  bool step();
  void run_all();
  Trace finish();  // call after run_all (or once step() returns false)

  double now_ms() const { return now_; }
  int queued() const { return static_cast<int>(wait_.size()); }
  int in_service() const { return in_service_; }
  const mapper::CoreOccupancy& occupancy() const { return occ_; }
  std::span<const RequestOutcome> requests() const { return requests_; }
  const std::vector<proto::StatsEvent>& pending_stats() const { return pending_; }

  // Physical migration of one thread, the primitive behind mapper plans:
  // progress so far is banked at the old core's rate, the completion event is
  // rescheduled at now + overhead + remaining work at the new core's rate,
  // and the dwell accounting records the core change.
  void apply_migration(int thread_id, int to_core_id, double now_ms);

 private:
  enum EventType { kCompletion = 0, kArrival = 1, kMapperTick = 2 };
  struct Event {
    double t = 0;
    int type = 0;
    std::uint64_t seq = 0;
    int arg = 0;            // thread id or arrival index
    std::uint64_t gen = 0;  // completion generation, for lazy cancellation
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.t != b.t) return a.t > b.t;
      if (a.type != b.type) return a.type > b.type;
      return a.seq > b.seq;
    }
  };
  struct ThreadState {
    int active_request = -1;
    double work_remaining = 0;
    double overhead_remaining_ms = 0;
    double checkpoint_ms = 0;  // sits past `now` while a migration is in flight
    std::uint64_t completion_gen = 0;
    DwellSegment dwell;
  };

  void init();
  void push_event(double t, int type, int arg, std::uint64_t gen = 0);
  std::int64_t outstanding() const;
  void emit_stats(int thread_id, std::int64_t request_id, double t);
  void note_power_change(double t);
  void progress_to(ThreadState& ts, double now);
  void schedule_completion(int thread_id);
  void start_service(int thread_id, int request_index, double now);
  void migrate_physics(int thread_id, int to_core_id, double now_ms);
  void apply_plan(const mapper::MigrationPlan& plan, double now);
  void on_arrival(int index, double now);
  void on_completion(int thread_id, double now);
  void on_tick(double now);
  void mark_done(double now);

  SimConfig cfg_;
  std::vector<workload::Arrival> arrivals_;
  std::vector<RequestOutcome> requests_;
  std::vector<ThreadState> threads_;
  mapper::CoreOccupancy occ_;
  mapper::MapperState mstate_;
  std::vector<proto::StatsEvent> pending_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::deque<int> idle_;
  std::deque<int> wait_;
  std::size_t next_arrival_ = 0;
  std::uint64_t seq_ = 0;
  int in_service_ = 0;
  int big_active_ = 0;
  int little_active_ = 0;
  double now_ = 0;
  bool done_ = false;
  bool finished_ = false;

  std::vector<PowerSample> power_;
  double last_power_t_ = 0;
  double big_e_ = 0, little_e_ = 0, rest_e_ = 0;
  std::int64_t completed_ = 0;
  std::int64_t arrived_ = 0;
  std::int64_t migrations_ = 0;
};

Trace run(const SimConfig& cfg);
Trace run_replay(const SimConfig& cfg, std::vector<workload::Arrival> arrivals);

// request_id,keywords,arrival_ms,start_ms,completion_ms,latency_ms,migrations,final_core_type
void write_trace_csv(std::ostream& out, const Trace& trace);
// t_ms,big_cluster_w,little_cluster_w,rest_w
void write_power_csv(std::ostream& out, const Trace& trace);

}  // namespace hurryup::sim
