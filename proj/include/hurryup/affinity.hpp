#pragma once

#include <iosfwd>
#include <memory>

#include "hurryup/mapper.hpp"

namespace hurryup::affinity {

// Where migration decisions land. The default backend only logs the intended
// moves; the sched backend pins real OS threads.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual void place(int thread_id, int core_id) = 0;
  virtual void apply(const mapper::MigrationPlan& plan, double now_ms) = 0;
};

class LoggingBackend : public Backend {
 public:
  explicit LoggingBackend(std::ostream& out) : out_(out) {}
  void place(int thread_id, int core_id) override;
  void apply(const mapper::MigrationPlan& plan, double now_ms) override;

 private:
  std::ostream& out_;
};

#ifdef __linux__
// Applies moves with sched_setaffinity on the given OS thread ids.
// Best effort: failures (dead tid, missing permission) are logged, not fatal.
class SchedAffinityBackend : public Backend {
 public:
  explicit SchedAffinityBackend(std::ostream& log) : log_(log) {}
  void place(int thread_id, int core_id) override;
  void apply(const mapper::MigrationPlan& plan, double now_ms) override;

 private:
  void pin(int thread_id, int core_id);
  std::ostream& log_;
};
#endif

}  // namespace hurryup::affinity
