#include "hurryup/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace hurryup::metrics {

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw EmptySample("percentile of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  if (rank < 1) rank = 1;
  if (rank > sorted.size()) rank = sorted.size();
  return sorted[rank - 1];
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_ms) {
  if (values.empty()) throw EmptySample("histogram of an empty sample");
  if (!(bin_ms > 0)) throw Error("histogram bin width must be > 0");
  std::size_t nbins = 0;
  for (double v : values)
    nbins = std::max(nbins, static_cast<std::size_t>(std::floor(v / bin_ms)) + 1);
  std::vector<std::int64_t> counts(nbins, 0);
  for (double v : values)
    counts[static_cast<std::size_t>(std::floor(v / bin_ms))] += 1;
  std::vector<HistogramBin> bins(nbins);
  std::int64_t running = 0;
  auto n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < nbins; ++i) {
    running += counts[i];
    bins[i].lo_ms = i * bin_ms;
    bins[i].hi_ms = (i + 1) * bin_ms;
    bins[i].pdf = counts[i] / n;
    bins[i].cdf = running / n;  // ends at n/n = 1 exactly
  }
  return bins;
}

Report report_from_latencies(std::span<const double> latencies_ms) {
  Report r;
  r.requests = static_cast<std::int64_t>(latencies_ms.size());
  if (latencies_ms.empty()) return r;
  r.p50_ms = percentile(latencies_ms, 50);
  r.p90_ms = percentile(latencies_ms, 90);
  r.p95_ms = percentile(latencies_ms, 95);
  r.p99_ms = percentile(latencies_ms, 99);
  r.max_ms = *std::max_element(latencies_ms.begin(), latencies_ms.end());
  return r;
}

Report report_from_trace(const sim::Trace& trace, double duration_s) {
  std::vector<double> latencies;
  latencies.reserve(trace.requests.size());
  std::int64_t on_big = 0;
  for (const sim::RequestOutcome& req : trace.requests) {
    if (req.completion_ms < 0) continue;  // only completed requests count
    latencies.push_back(req.latency_ms());
    if (req.final_core_type == CoreType::Big) ++on_big;
  }
  Report r = report_from_latencies(latencies);
  r.big_energy_j = trace.big_energy_j;
  r.little_energy_j = trace.little_energy_j;
  r.rest_energy_j = trace.rest_energy_j;
  r.total_energy_j = trace.total_energy_j();
  r.migrations = trace.migrations;
  if (!latencies.empty()) {
    auto n = static_cast<double>(latencies.size());
    r.big_completion_share = on_big / n;
    r.little_completion_share = (n - on_big) / n;
  }
  if (duration_s > 0) r.qps_achieved = r.requests / duration_s;
  return r;
}

Comparison compare(const Report& hurryup, const Report& static_baseline) {
  Comparison c;
  if (static_baseline.p90_ms != 0)
    c.tail_reduction_pct =
        (static_baseline.p90_ms - hurryup.p90_ms) / static_baseline.p90_ms * 100.0;
  if (static_baseline.total_energy_j != 0)
    c.energy_overhead_pct = (hurryup.total_energy_j - static_baseline.total_energy_j) /
                            static_baseline.total_energy_j * 100.0;
  return c;
}

namespace {

nlohmann::json report_json(const Report& r) {
  return {
      {"p50_ms", r.p50_ms},
      {"p90_ms", r.p90_ms},
      {"p95_ms", r.p95_ms},
      {"p99_ms", r.p99_ms},
      {"max_ms", r.max_ms},
      {"big_energy_j", r.big_energy_j},
      {"little_energy_j", r.little_energy_j},
      {"rest_energy_j", r.rest_energy_j},
      {"total_energy_j", r.total_energy_j},
      {"requests", r.requests},
      {"migrations", r.migrations},
      {"big_completion_share", r.big_completion_share},
      {"little_completion_share", r.little_completion_share},
      {"qps_achieved", r.qps_achieved},
  };
}

}  // namespace

std::string report_to_json(const Report& r) { return report_json(r).dump(2) + "\n"; }

std::string comparison_to_json(const Comparison& c) {
  nlohmann::json j = {
      {"tail_reduction_pct", c.tail_reduction_pct},
      {"energy_overhead_pct", c.energy_overhead_pct},
  };
  return j.dump(2) + "\n";
}

std::string report_to_text(const Report& r) {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "requests            %10lld\n"
                "qps achieved        %10.2f\n"
                "latency p50         %10.1f ms\n"
                "latency p90         %10.1f ms\n"
                "latency p95         %10.1f ms\n"
                "latency p99         %10.1f ms\n"
                "latency max         %10.1f ms\n"
                "energy big          %10.2f J\n"
                "energy little       %10.2f J\n"
                "energy rest         %10.2f J\n"
                "energy total        %10.2f J\n"
                "migrations          %10lld\n"
                "completed on big    %9.1f%%\n"
                "completed on little %9.1f%%\n",
                static_cast<long long>(r.requests), r.qps_achieved, r.p50_ms, r.p90_ms,
                r.p95_ms, r.p99_ms, r.max_ms, r.big_energy_j, r.little_energy_j,
                r.rest_energy_j, r.total_energy_j,
                static_cast<long long>(r.migrations), r.big_completion_share * 100.0,
                r.little_completion_share * 100.0);
  return buf;
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "bin_lo_ms,bin_hi_ms,pdf,cdf\n";
  char buf[160];
  for (const HistogramBin& b : bins) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.9f,%.9f\n", b.lo_ms, b.hi_ms, b.pdf,
                  b.cdf);
    out << buf;
  }
}

}  // namespace hurryup::metrics
