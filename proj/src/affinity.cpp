#include "hurryup/affinity.hpp"

#include <ostream>

#ifdef __linux__
#include <sched.h>

#include <cerrno>
#include <cstring>
#endif

namespace hurryup::affinity {

void LoggingBackend::place(int thread_id, int core_id) {
  out_ << "place thread " << thread_id << " -> core " << core_id << "\n";
}

void LoggingBackend::apply(const mapper::MigrationPlan& plan, double now_ms) {
  for (const mapper::Move& m : plan) {
    out_ << "t=" << now_ms << " migrate thread " << m.thread_id << " -> core "
         << m.to_core_id;
    if (m.displaced_thread_id)
      out_ << " (swap thread " << *m.displaced_thread_id << " -> core "
           << *m.displaced_to_core_id << ")";
    out_ << "\n";
  }
}

#ifdef __linux__

void SchedAffinityBackend::pin(int thread_id, int core_id) {
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(core_id, &set);
  if (sched_setaffinity(thread_id, sizeof set, &set) != 0) {
    log_ << "sched_setaffinity(" << thread_id << ", core " << core_id
         << ") failed: " << std::strerror(errno) << "\n";
  }
}

void SchedAffinityBackend::place(int thread_id, int core_id) {
  pin(thread_id, core_id);
}

void SchedAffinityBackend::apply(const mapper::MigrationPlan& plan, double now_ms) {
  (void)now_ms;
  for (const mapper::Move& m : plan) {
    pin(m.thread_id, m.to_core_id);
    if (m.displaced_thread_id) pin(*m.displaced_thread_id, *m.displaced_to_core_id);
  }
}

#endif

}  // namespace hurryup::affinity
