#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hurryup/rng.hpp"
#include "hurryup/types.hpp"

namespace hurryup::workload {

struct Arrival {
  std::int64_t id = 0;
  double arrival_ms = 0;
  int keywords = 1;

  bool operator==(const Arrival&) const = default;
};

// Open-loop Poisson arrivals over [0, duration_s) with i.i.d. keyword counts.
// Pure function of (parameters, rng state); same seed, same bytes.
std::vector<Arrival> generate(double qps, double duration_s, const KeywordDist& dist,
                              Rng& rng);

// One keyword draw; `zipf_cdf` is scratch reused across draws.
int draw_keywords(const KeywordDist& dist, Rng& rng, std::vector<double>& zipf_cdf);

// request_id,arrival_ms,keywords
void write_arrivals_csv(std::ostream& out, std::span<const Arrival> arrivals);
std::vector<Arrival> read_arrivals_csv(std::istream& in);  // throws Error on bad rows

}  // namespace hurryup::workload
