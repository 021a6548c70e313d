#include "hurryup/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace hurryup::workload {

int draw_keywords(const KeywordDist& dist, Rng& rng, std::vector<double>& zipf_cdf) {
  switch (dist.kind) {
    case KeywordDist::Kind::Fixed:
      return dist.k;
    case KeywordDist::Kind::Uniform:
      return rng.uniform_int(dist.lo, dist.hi);
    case KeywordDist::Kind::Zipf: {
      if (zipf_cdf.size() != static_cast<std::size_t>(dist.max_k)) {
        zipf_cdf.assign(dist.max_k, 0.0);
        double total = 0;
        for (int k = 1; k <= dist.max_k; ++k) {
          total += std::pow(static_cast<double>(k), -dist.s);
          zipf_cdf[k - 1] = total;
        }
        for (double& c : zipf_cdf) c /= total;
      }
      double u = rng.uniform01();
      auto it = std::lower_bound(zipf_cdf.begin(), zipf_cdf.end(), u);
      return static_cast<int>(it - zipf_cdf.begin()) + 1;
    }
  }
  return 1;
}

std::vector<Arrival> generate(double qps, double duration_s, const KeywordDist& dist,
                              Rng& rng) {
  std::vector<Arrival> out;
  std::vector<double> zipf_cdf;
  double mean_gap_ms = 1000.0 / qps;
  double duration_ms = duration_s * 1000.0;
  double t = 0;
  std::int64_t id = 0;
  for (;;) {
    t += rng.exponential(mean_gap_ms);
    if (t >= duration_ms) break;
    out.push_back({id++, t, draw_keywords(dist, rng, zipf_cdf)});
  }
  return out;
}

void write_arrivals_csv(std::ostream& out, std::span<const Arrival> arrivals) {
  out << "request_id,arrival_ms,keywords\n";
  char buf[96];
  for (const Arrival& a : arrivals) {
    std::snprintf(buf, sizeof buf, "%lld,%.6f,%d\n",
                  static_cast<long long>(a.id), a.arrival_ms, a.keywords);
    out << buf;
  }
}

std::vector<Arrival> read_arrivals_csv(std::istream& in) {
  std::vector<Arrival> out;
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("request_id", 0) == 0) continue;
    }
    Arrival a;
    long long id;
    if (std::sscanf(line.c_str(), "%lld,%lf,%d", &id, &a.arrival_ms, &a.keywords) != 3)
      throw Error("bad arrivals csv row at line " + std::to_string(lineno) + ": " + line);
    a.id = id;
    out.push_back(a);
  }
  return out;
}

}  // namespace hurryup::workload
