#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hurryup/rng.hpp"
#include "hurryup/workload.hpp"

using namespace hurryup;
using namespace hurryup::workload;

TEST_CASE("arrival count stays within 3 sigma of qps * duration") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    Rng rng = Rng::stream(seed, kStreamArrivals);
    auto arrivals = generate(30, 60, KeywordDist::uniform(1, 10), rng);
    double expected = 1800, sigma = std::sqrt(1800.0);
    CHECK(std::abs(static_cast<double>(arrivals.size()) - expected) <= 3 * sigma);
    CHECK(std::is_sorted(arrivals.begin(), arrivals.end(),
                         [](const Arrival& a, const Arrival& b) {
                           return a.arrival_ms < b.arrival_ms;
                         }));
    for (std::size_t i = 0; i < arrivals.size(); ++i)
      CHECK(arrivals[i].id == static_cast<std::int64_t>(i));
  }
}

TEST_CASE("fixed distribution is constant") {
  Rng rng(9);
  auto arrivals = generate(50, 10, KeywordDist::fixed(5), rng);
  for (const Arrival& a : arrivals) CHECK(a.keywords == 5);
}

TEST_CASE("uniform keyword mean over 1e5 draws") {
  Rng rng(17);
  std::vector<double> dummy;
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    sum += draw_keywords(KeywordDist::uniform(1, 10), rng, dummy);
  CHECK(std::abs(sum / n - 5.5) < 0.05);
}

TEST_CASE("zipf draws respect the support and skew") {
  Rng rng(21);
  std::vector<double> scratch;
  KeywordDist dist = KeywordDist::zipf(1.2, 17);
  int count1 = 0, count17 = 0;
  for (int i = 0; i < 20000; ++i) {
    int k = draw_keywords(dist, rng, scratch);
    CHECK(k >= 1);
    CHECK(k <= 17);
    if (k == 1) ++count1;
    if (k == 17) ++count17;
  }
  CHECK(count1 > count17);  // mass decreasing in k
  CHECK(count1 > 20000 / 4);
}

TEST_CASE("interarrival gaps pass a KS test against the exponential") {
  Rng rng(31);
  const int n = 10000;
  const double qps = 20, mean_ms = 1000.0 / qps;
  auto arrivals = generate(qps, 700, KeywordDist::fixed(1), rng);
  REQUIRE(arrivals.size() >= n);
  std::vector<double> gaps;
  double prev = 0;
  for (int i = 0; i < n; ++i) {
    gaps.push_back(arrivals[i].arrival_ms - prev);
    prev = arrivals[i].arrival_ms;
  }
  std::sort(gaps.begin(), gaps.end());
  double d = 0;
  for (int i = 0; i < n; ++i) {
    double f = 1.0 - std::exp(-gaps[i] / mean_ms);
    d = std::max(d, std::abs(f - (i + 1.0) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  double critical = 1.6276 / std::sqrt(static_cast<double>(n));  // alpha = 0.01
  CHECK(d < critical);
}

TEST_CASE("same seed, same bytes") {
  Rng a = Rng::stream(77, kStreamArrivals);
  Rng b = Rng::stream(77, kStreamArrivals);
  auto wa = generate(25, 30, KeywordDist::uniform(1, 10), a);
  auto wb = generate(25, 30, KeywordDist::uniform(1, 10), b);
  CHECK(wa == wb);
  std::ostringstream csv_a, csv_b;
  write_arrivals_csv(csv_a, wa);
  write_arrivals_csv(csv_b, wb);
  CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("arrivals survive a csv round trip") {
  Rng rng(41);
  auto arrivals = generate(40, 20, KeywordDist::uniform(1, 10), rng);
  std::ostringstream out;
  write_arrivals_csv(out, arrivals);
  std::istringstream in(out.str());
  auto back = read_arrivals_csv(in);
  REQUIRE(back.size() == arrivals.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == arrivals[i].id);
    CHECK(back[i].keywords == arrivals[i].keywords);
    CHECK(std::abs(back[i].arrival_ms - arrivals[i].arrival_ms) <= 5e-7);
  }
}

TEST_CASE("bad csv rows are rejected") {
  std::istringstream in("request_id,arrival_ms,keywords\n1,notanumber,3\n");
  CHECK_THROWS_AS(read_arrivals_csv(in), Error);
}
