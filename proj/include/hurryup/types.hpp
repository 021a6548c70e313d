#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hurryup {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CoreType { Big, Little };

const char* to_string(CoreType t);

// Core ids are dense, starting at 0, with every big core listed before the
// little cores. That fixed order is what makes the mapper's big-core walk
// deterministic.
struct Topology {
  int big_cores = 2;
  int little_cores = 4;

  int core_count() const { return big_cores + little_cores; }
  bool is_big(int core_id) const { return core_id < big_cores; }
  CoreType core_type(int core_id) const {
    return is_big(core_id) ? CoreType::Big : CoreType::Little;
  }
};

// Linear-in-keywords service time: a request with k keywords needs
// fixed_overhead_ms + k * ms_per_keyword on a given core type, scaled by a
// per-request lognormal noise factor with the given coefficient of variation.
struct ServiceModel {
  double little_ms_per_keyword = 100.0;
  double big_ms_per_keyword = 500.0 / 17.0;
  double fixed_overhead_ms = 0.0;
  double noise_cv = 0.15;

  double ms_per_keyword(CoreType t) const {
    return t == CoreType::Big ? big_ms_per_keyword : little_ms_per_keyword;
  }
};

// Per-core watts plus a constant rest-of-system draw. Defaults are a
// least-squares calibration for a 2x Cortex-A57 (1.15 GHz) + 4x Cortex-A53
// (0.6 GHz) class development board; see the README for the numbers.
struct PowerModel {
  double big_active_w = 0.76;
  double big_idle_w = 0.0019;
  double little_active_w = 0.0694;
  double little_idle_w = 0.0137;
  double rest_of_system_w = 0.76;

  double active_w(CoreType t) const {
    return t == CoreType::Big ? big_active_w : little_active_w;
  }
  double idle_w(CoreType t) const {
    return t == CoreType::Big ? big_idle_w : little_idle_w;
  }
};

struct MapperConfig {
  double sampling_time_ms = 25.0;
  double migration_threshold_ms = 50.0;
};

// Alternative preset: a 50 ms sampling interval also works well and halves
// the bookkeeping rate.
inline MapperConfig mapper_config_slow_sampling() { return {50.0, 50.0}; }

struct KeywordDist {
  enum class Kind { Uniform, Zipf, Fixed };

  Kind kind = Kind::Uniform;
  int lo = 1;   // uniform
  int hi = 10;  // uniform
  double s = 1.0;  // zipf exponent
  int max_k = 10;  // zipf support [1, max_k]
  int k = 5;       // fixed

  static KeywordDist uniform(int lo, int hi);
  static KeywordDist zipf(double s, int max_k);
  static KeywordDist fixed(int k);

  // Accepts "uniform(lo,hi)", "zipf(s,max_k)", "fixed(k)".
  static std::optional<KeywordDist> parse(std::string_view text);
  std::string to_string() const;
};

enum class Policy { HurryUp, StaticRandom };

const char* to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view text);

struct SimConfig {
  Topology topology;
  ServiceModel service_model;
  PowerModel power_model;
  MapperConfig mapper;
  int thread_pool_size = 6;
  double qps = 30.0;
  double duration_s = 60.0;
  KeywordDist keyword_dist;
  double migration_overhead_ms = 0.0;
  std::uint64_t rng_seed = 1;
  Policy policy = Policy::HurryUp;
};

// Returns one human-readable violation per broken invariant, naming the
// offending field; empty means the config is accepted by every module.
// Total: never throws, whatever the field values (including NaN/inf).
std::vector<std::string> validate_config(const SimConfig& cfg);

}  // namespace hurryup
