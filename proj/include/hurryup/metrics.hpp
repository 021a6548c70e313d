#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hurryup/simengine.hpp"
#include "hurryup/types.hpp"

namespace hurryup::metrics {

class EmptySample : public Error {
 public:
  using Error::Error;
};

// Nearest-rank estimator: the value at index ceil(p/100 * n) (1-based) of
// the sorted sample. No interpolation, deterministic on small samples.
double percentile(std::span<const double> values, double p);

struct HistogramBin {
  double lo_ms = 0;
  double hi_ms = 0;
  double pdf = 0;  // probability mass of the bin
  double cdf = 0;  // running sum; the last bin's cdf is exactly 1
};

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_ms);

struct Report {
  double p50_ms = 0;
  double p90_ms = 0;
  double p95_ms = 0;
  double p99_ms = 0;
  double max_ms = 0;
  double big_energy_j = 0;
  double little_energy_j = 0;
  double rest_energy_j = 0;
  double total_energy_j = 0;
  std::int64_t requests = 0;
  std::int64_t migrations = 0;
  double big_completion_share = 0;
  double little_completion_share = 0;
  double qps_achieved = 0;
};

Report report_from_trace(const sim::Trace& trace, double duration_s);

// Session-style report: observed latencies only, no energy accounting.
Report report_from_latencies(std::span<const double> latencies_ms);

struct Comparison {
  double tail_reduction_pct = 0;   // (static p90 - hurryup p90) / static p90 * 100
  double energy_overhead_pct = 0;  // (hurryup E - static E) / static E * 100
};

Comparison compare(const Report& hurryup, const Report& static_baseline);

std::string report_to_json(const Report& r);
std::string comparison_to_json(const Comparison& c);
std::string report_to_text(const Report& r);

// bin_lo_ms,bin_hi_ms,pdf,cdf — plot-ready
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);

}  // namespace hurryup::metrics
