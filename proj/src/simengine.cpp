#include "hurryup/simengine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hurryup::sim {

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  }
  void f64(double v) {
    auto u = std::bit_cast<std::uint64_t>(v);
    bytes(&u, sizeof u);
  }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
};

}  // namespace

std::uint64_t Trace::hash() const {
  Fnv fnv;
  fnv.i64(static_cast<std::int64_t>(requests.size()));
  for (const RequestOutcome& r : requests) {
    fnv.i64(r.id);
    fnv.i64(r.keywords);
    fnv.f64(r.work_units);
    fnv.f64(r.arrival_ms);
    fnv.f64(r.start_ms);
    fnv.f64(r.completion_ms);
    fnv.i64(r.migrations);
    fnv.i64(r.final_core_type == CoreType::Big ? 1 : 0);
    for (const DwellSegment& d : r.dwells) {
      fnv.i64(d.core_id);
      fnv.f64(d.start_ms);
      fnv.f64(d.end_ms);
      fnv.f64(d.work_kw);
    }
  }
  for (const PowerSample& p : power) {
    fnv.f64(p.t_ms);
    fnv.f64(p.big_w);
    fnv.f64(p.little_w);
    fnv.f64(p.rest_w);
  }
  fnv.f64(big_energy_j);
  fnv.f64(little_energy_j);
  fnv.f64(rest_energy_j);
  fnv.f64(makespan_ms);
  return fnv.h;
}

double service_time_base_ms(int keywords, CoreType core, const ServiceModel& model) {
  return model.fixed_overhead_ms + keywords * model.ms_per_keyword(core);
}

double service_time_ms(int keywords, CoreType core, const ServiceModel& model,
                       Rng& rng) {
  return service_time_base_ms(keywords, core, model) *
         rng.lognormal_mean1(model.noise_cv);
}

ClusterWatts cluster_watts(const PowerModel& pm, const Topology& topo,
                           int big_active, int little_active) {
  ClusterWatts w;
  w.big_w = big_active * pm.big_active_w +
            (topo.big_cores - big_active) * pm.big_idle_w;
  w.little_w = little_active * pm.little_active_w +
               (topo.little_cores - little_active) * pm.little_idle_w;
  w.rest_w = pm.rest_of_system_w;
  return w;
}

ClusterEnergy integrate_power(const PowerModel& pm, const Topology& topo,
                              int big_active, int little_active, double dt_ms) {
  ClusterWatts w = cluster_watts(pm, topo, big_active, little_active);
  double dt_s = dt_ms / 1000.0;
  return {w.big_w * dt_s, w.little_w * dt_s, w.rest_w * dt_s};
}

ClusterEnergy reintegrate_energy(const Trace& trace) {
  ClusterEnergy e;
  for (std::size_t i = 0; i + 1 < trace.power.size(); ++i) {
    double dt_s = (trace.power[i + 1].t_ms - trace.power[i].t_ms) / 1000.0;
    e.big_j += trace.power[i].big_w * dt_s;
    e.little_j += trace.power[i].little_w * dt_s;
    e.rest_j += trace.power[i].rest_w * dt_s;
  }
  return e;
}

Engine::Engine(const SimConfig& cfg)
    : Engine(cfg, [&cfg] {
        Rng rng = Rng::stream(cfg.rng_seed, kStreamArrivals);
        return workload::generate(cfg.qps, cfg.duration_s, cfg.keyword_dist, rng);
      }()) {}

Engine::Engine(const SimConfig& cfg, std::vector<workload::Arrival> arrivals)
    : cfg_(cfg), arrivals_(std::move(arrivals)) {
  auto violations = validate_config(cfg_);
  if (!violations.empty()) throw Error("invalid config: " + violations.front());
  init();
}

void Engine::init() {
  std::stable_sort(arrivals_.begin(), arrivals_.end(),
                   [](const workload::Arrival& a, const workload::Arrival& b) {
                     if (a.arrival_ms != b.arrival_ms) return a.arrival_ms < b.arrival_ms;
                     return a.id < b.id;
                   });

  // Per-request noise is drawn once, in arrival order, from its own stream:
  // identical for every policy and mapper setting sharing a seed.
  Rng noise = Rng::stream(cfg_.rng_seed, kStreamNoise);
  requests_.reserve(arrivals_.size());
  for (const workload::Arrival& a : arrivals_) {
    RequestOutcome r;
    r.id = a.id;
    r.keywords = a.keywords;
    r.arrival_ms = a.arrival_ms;
    double m = noise.lognormal_mean1(cfg_.service_model.noise_cv);
    r.work_units = a.keywords * m;
    r.overhead_ms = cfg_.service_model.fixed_overhead_ms * m;
    requests_.push_back(std::move(r));
  }

  Rng placement = Rng::stream(cfg_.rng_seed, kStreamPlacement);
  occ_ = mapper::initial_mapping(cfg_.thread_pool_size, cfg_.topology, cfg_.policy,
                                 placement);
  threads_.resize(cfg_.thread_pool_size);
  for (int t = 0; t < cfg_.thread_pool_size; ++t) idle_.push_back(t);

  ClusterWatts w = cluster_watts(cfg_.power_model, cfg_.topology, 0, 0);
  power_.push_back({0, w.big_w, w.little_w, w.rest_w});

  if (!arrivals_.empty()) {
    push_event(arrivals_[0].arrival_ms, kArrival, 0);
    if (cfg_.policy == Policy::HurryUp)
      push_event(cfg_.mapper.sampling_time_ms, kMapperTick, 0);
  } else {
    done_ = true;
  }
}

void Engine::push_event(double t, int type, int arg, std::uint64_t gen) {
  events_.push({t, type, seq_++, arg, gen});
}

std::int64_t Engine::outstanding() const {
  return static_cast<std::int64_t>(arrivals_.size() - next_arrival_) +
         static_cast<std::int64_t>(wait_.size()) + in_service_;
}

void Engine::emit_stats(int thread_id, std::int64_t request_id, double t) {
  if (cfg_.policy != Policy::HurryUp) return;
  pending_.push_back({thread_id, std::to_string(request_id),
                      static_cast<std::int64_t>(std::floor(t))});
}

void Engine::note_power_change(double t) {
  const PowerSample& prev = power_.back();
  if (t > last_power_t_) {
    double dt_s = (t - last_power_t_) / 1000.0;
    big_e_ += prev.big_w * dt_s;
    little_e_ += prev.little_w * dt_s;
    rest_e_ += prev.rest_w * dt_s;
    last_power_t_ = t;
  }
  ClusterWatts w = cluster_watts(cfg_.power_model, cfg_.topology, big_active_,
                                 little_active_);
  PowerSample row{t, w.big_w, w.little_w, w.rest_w};
  if (power_.back().t_ms == t) {
    power_.back() = row;
    // collapse rows that ended up identical to their predecessor
    if (power_.size() >= 2) {
      const PowerSample& a = power_[power_.size() - 2];
      if (a.big_w == row.big_w && a.little_w == row.little_w && a.rest_w == row.rest_w)
        power_.pop_back();
    }
  } else if (prev.big_w != row.big_w || prev.little_w != row.little_w ||
             prev.rest_w != row.rest_w) {
    power_.push_back(row);
  }
}

void Engine::progress_to(ThreadState& ts, double now) {
  double dt = now - ts.checkpoint_ms;
  if (dt <= 0) return;
  double oh = std::min(ts.overhead_remaining_ms, dt);
  ts.overhead_remaining_ms -= oh;
  dt -= oh;
  if (dt > 0) {
    double rate_ms =
        cfg_.service_model.ms_per_keyword(cfg_.topology.core_type(ts.dwell.core_id));
    double done = dt / rate_ms;
    ts.work_remaining -= done;
    ts.dwell.work_kw += done;
  }
  ts.checkpoint_ms = now;
}

void Engine::schedule_completion(int thread_id) {
  ThreadState& ts = threads_[thread_id];
  double rate_ms =
      cfg_.service_model.ms_per_keyword(cfg_.topology.core_type(ts.dwell.core_id));
  double t = ts.checkpoint_ms + ts.overhead_remaining_ms + ts.work_remaining * rate_ms;
  push_event(t, kCompletion, thread_id, ++ts.completion_gen);
}

void Engine::start_service(int thread_id, int request_index, double now) {
  RequestOutcome& r = requests_[request_index];
  r.start_ms = now;
  ThreadState& ts = threads_[thread_id];
  ts.active_request = request_index;
  ts.work_remaining = r.work_units;
  ts.overhead_remaining_ms = r.overhead_ms;
  ts.checkpoint_ms = now;
  int core = *occ_.core_of(thread_id);
  ts.dwell = {core, now, now, 0};
  ++in_service_;
  (cfg_.topology.is_big(core) ? big_active_ : little_active_) += 1;
  note_power_change(now);
  schedule_completion(thread_id);
  emit_stats(thread_id, r.id, now);
}

void Engine::on_arrival(int index, double now) {
  ++arrived_;
  if (next_arrival_ + 1 < arrivals_.size())
    push_event(arrivals_[next_arrival_ + 1].arrival_ms, kArrival,
               static_cast<int>(next_arrival_ + 1));
  ++next_arrival_;
  if (!idle_.empty()) {
    int t = idle_.front();
    idle_.pop_front();
    start_service(t, index, now);
  } else {
    wait_.push_back(index);
  }
}

void Engine::on_completion(int thread_id, double now) {
  ThreadState& ts = threads_[thread_id];
  progress_to(ts, now);
  RequestOutcome& r = requests_[ts.active_request];
  // fold the rounding residue into the final dwell: per-request work is
  // conserved exactly
  ts.dwell.work_kw += ts.work_remaining;
  ts.work_remaining = 0;
  ts.dwell.end_ms = now;
  r.dwells.push_back(ts.dwell);
  r.completion_ms = now;
  int core = ts.dwell.core_id;
  r.final_core_type = cfg_.topology.core_type(core);
  ++completed_;
  --in_service_;
  emit_stats(thread_id, r.id, now);
  ts.active_request = -1;
  (cfg_.topology.is_big(core) ? big_active_ : little_active_) -= 1;
  note_power_change(now);
  if (!wait_.empty()) {
    int next = wait_.front();
    wait_.pop_front();
    start_service(thread_id, next, now);
  } else {
    idle_.push_back(thread_id);
  }
  if (outstanding() == 0) mark_done(now);
}

// Physics of a core switch for one thread; occupancy is updated by the
// caller. Work done so far stays banked at the old core's rate, then the
// thread sits out migration_overhead_ms before progressing at the new rate.
void Engine::migrate_physics(int thread_id, int to_core_id, double now_ms) {
  ThreadState& ts = threads_[thread_id];
  if (ts.active_request < 0) return;  // idle thread: placement change only
  progress_to(ts, now_ms);
  ts.dwell.end_ms = now_ms;
  requests_[ts.active_request].dwells.push_back(ts.dwell);
  (cfg_.topology.is_big(ts.dwell.core_id) ? big_active_ : little_active_) -= 1;
  ts.dwell = {to_core_id, now_ms, now_ms, 0};
  ts.checkpoint_ms = now_ms + cfg_.migration_overhead_ms;
  (cfg_.topology.is_big(to_core_id) ? big_active_ : little_active_) += 1;
  note_power_change(now_ms);
  schedule_completion(thread_id);
  requests_[ts.active_request].migrations += 1;
  ++migrations_;
}

void Engine::apply_migration(int thread_id, int to_core_id, double now_ms) {
  auto old_core = occ_.core_of(thread_id);
  if (!old_core) throw Error("thread " + std::to_string(thread_id) + " is not placed");
  if (*old_core == to_core_id) return;  // same-core move: nothing changes
  occ_.relocate(thread_id, to_core_id);
  migrate_physics(thread_id, to_core_id, now_ms);
}

void Engine::apply_plan(const mapper::MigrationPlan& plan, double now) {
  for (const mapper::Move& m : plan) {
    if (m.displaced_thread_id) {
      // swap: both placements change at once, then both threads' physics
      occ_.detach(m.thread_id);
      occ_.detach(*m.displaced_thread_id);
      occ_.place(m.thread_id, m.to_core_id);
      occ_.place(*m.displaced_thread_id, *m.displaced_to_core_id);
      migrate_physics(m.thread_id, m.to_core_id, now);
      migrate_physics(*m.displaced_thread_id, *m.displaced_to_core_id, now);
    } else {
      apply_migration(m.thread_id, m.to_core_id, now);
    }
  }
}

void Engine::on_tick(double now) {
  auto result = mapper::mapper_step(mstate_, occ_, cfg_.topology, pending_, now,
                                    cfg_.mapper);
  pending_.clear();
  if (result.plan) apply_plan(*result.plan, now);
  if (outstanding() > 0)
    push_event(now + cfg_.mapper.sampling_time_ms, kMapperTick, 0);
}

void Engine::mark_done(double now) {
  done_ = true;
  now_ = now;
}

bool Engine::step() {
  while (!done_ && !events_.empty()) {
    Event ev = events_.top();
    events_.pop();
    if (ev.type == kCompletion &&
        ev.gen != threads_[ev.arg].completion_gen)
      continue;  // superseded by a migration reschedule
    now_ = ev.t;
    switch (ev.type) {
      case kArrival:
        on_arrival(ev.arg, ev.t);
        break;
      case kCompletion:
        on_completion(ev.arg, ev.t);
        break;
      case kMapperTick:
        on_tick(ev.t);
        break;
    }
    return !done_;
  }
  return false;
}

void Engine::run_all() {
  while (step()) {
  }
}

Trace Engine::finish() {
  if (finished_) throw Error("finish() called twice");
  finished_ = true;
  note_power_change(now_);  // close the last open interval
  Trace trace;
  if (power_.back().t_ms != now_) {
    const PowerSample& last = power_.back();
    power_.push_back({now_, last.big_w, last.little_w, last.rest_w});
  }
  trace.requests = std::move(requests_);
  trace.power = std::move(power_);
  trace.big_energy_j = big_e_;
  trace.little_energy_j = little_e_;
  trace.rest_energy_j = rest_e_;
  trace.makespan_ms = now_;
  trace.arrived = arrived_;
  trace.completed = completed_;
  trace.migrations = migrations_;
  return trace;
}

Trace run(const SimConfig& cfg) {
  Engine engine(cfg);
  engine.run_all();
  return engine.finish();
}

Trace run_replay(const SimConfig& cfg, std::vector<workload::Arrival> arrivals) {
  Engine engine(cfg, std::move(arrivals));
  engine.run_all();
  return engine.finish();
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "request_id,keywords,arrival_ms,start_ms,completion_ms,latency_ms,"
         "migrations,final_core_type\n";
  char buf[256];
  for (const RequestOutcome& r : trace.requests) {
    std::snprintf(buf, sizeof buf, "%lld,%d,%.6f,%.6f,%.6f,%.6f,%d,%s\n",
                  static_cast<long long>(r.id), r.keywords, r.arrival_ms, r.start_ms,
                  r.completion_ms, r.latency_ms(), r.migrations,
                  to_string(r.final_core_type));
    out << buf;
  }
}

void write_power_csv(std::ostream& out, const Trace& trace) {
  out << "t_ms,big_cluster_w,little_cluster_w,rest_w\n";
  char buf[160];
  for (const PowerSample& p : trace.power) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f\n", p.t_ms, p.big_w,
                  p.little_w, p.rest_w);
    out << buf;
  }
}

}  // namespace hurryup::sim
