#include "hurryup/types.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace hurryup {

const char* to_string(CoreType t) {
  return t == CoreType::Big ? "big" : "little";
}

const char* to_string(Policy p) {
  return p == Policy::HurryUp ? "hurryup" : "static";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "hurryup") return Policy::HurryUp;
  if (text == "static") return Policy::StaticRandom;
  return std::nullopt;
}

KeywordDist KeywordDist::uniform(int lo, int hi) {
  KeywordDist d;
  d.kind = Kind::Uniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

KeywordDist KeywordDist::zipf(double s, int max_k) {
  KeywordDist d;
  d.kind = Kind::Zipf;
  d.s = s;
  d.max_k = max_k;
  return d;
}

KeywordDist KeywordDist::fixed(int k) {
  KeywordDist d;
  d.kind = Kind::Fixed;
  d.k = k;
  return d;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_int_arg(std::string_view s, int& out) {
  s = trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_double_arg(std::string_view s, double& out) {
  s = trim(s);
  std::string buf(s);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && !buf.empty();
}

}  // namespace

std::optional<KeywordDist> KeywordDist::parse(std::string_view text) {
  text = trim(text);
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') return std::nullopt;
  std::string_view name = trim(text.substr(0, open));
  std::string_view args = text.substr(open + 1, text.size() - open - 2);
  auto comma = args.find(',');

  if (name == "fixed") {
    if (comma != std::string_view::npos) return std::nullopt;
    int k;
    if (!parse_int_arg(args, k)) return std::nullopt;
    return fixed(k);
  }
  if (comma == std::string_view::npos) return std::nullopt;
  std::string_view a = args.substr(0, comma);
  std::string_view b = args.substr(comma + 1);
  if (name == "uniform") {
    int lo, hi;
    if (!parse_int_arg(a, lo) || !parse_int_arg(b, hi)) return std::nullopt;
    return uniform(lo, hi);
  }
  if (name == "zipf") {
    double s;
    int max_k;
    if (!parse_double_arg(a, s) || !parse_int_arg(b, max_k)) return std::nullopt;
    return zipf(s, max_k);
  }
  return std::nullopt;
}

std::string KeywordDist::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::Uniform:
      std::snprintf(buf, sizeof buf, "uniform(%d,%d)", lo, hi);
      break;
    case Kind::Zipf:
      std::snprintf(buf, sizeof buf, "zipf(%g,%d)", s, max_k);
      break;
    case Kind::Fixed:
      std::snprintf(buf, sizeof buf, "fixed(%d)", k);
      break;
  }
  return buf;
}

std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> v;
  auto bad = [&](const char* msg) { v.emplace_back(msg); };

  // Comparisons are written negated so NaN lands on the violation side.
  const Topology& t = cfg.topology;
  if (!(t.big_cores >= 0)) bad("big_cores must be >= 0");
  if (!(t.little_cores >= 0)) bad("little_cores must be >= 0");
  if (t.big_cores >= 0 && t.little_cores >= 0 && !(t.core_count() >= 1))
    bad("big_cores + little_cores must be >= 1");

  const ServiceModel& s = cfg.service_model;
  if (!(s.little_ms_per_keyword > 0)) bad("little_ms_per_keyword must be > 0");
  if (!(s.big_ms_per_keyword > 0)) bad("big_ms_per_keyword must be > 0");
  if (!(s.fixed_overhead_ms >= 0)) bad("fixed_overhead_ms must be >= 0");
  if (!(s.noise_cv >= 0)) bad("noise_cv must be >= 0");
  if (s.big_ms_per_keyword > 0 && s.little_ms_per_keyword > 0 &&
      !(s.big_ms_per_keyword < s.little_ms_per_keyword))
    bad("big_ms_per_keyword must be < little_ms_per_keyword");

  const PowerModel& p = cfg.power_model;
  if (!(p.big_active_w >= 0)) bad("big_active_w must be >= 0");
  if (!(p.big_idle_w >= 0)) bad("big_idle_w must be >= 0");
  if (!(p.little_active_w >= 0)) bad("little_active_w must be >= 0");
  if (!(p.little_idle_w >= 0)) bad("little_idle_w must be >= 0");
  if (!(p.rest_of_system_w >= 0)) bad("rest_of_system_w must be >= 0");
  if (!(p.big_active_w >= p.big_idle_w)) bad("big_active_w must be >= big_idle_w");
  if (!(p.little_active_w >= p.little_idle_w))
    bad("little_active_w must be >= little_idle_w");

  if (!(cfg.mapper.sampling_time_ms > 0)) bad("sampling_time_ms must be > 0");
  if (!(cfg.mapper.migration_threshold_ms > 0))
    bad("migration_threshold_ms must be > 0");

  if (!(cfg.thread_pool_size >= 1)) bad("thread_pool_size must be >= 1");
  if (cfg.thread_pool_size >= 1 && t.big_cores >= 0 && t.little_cores >= 0 &&
      !(cfg.thread_pool_size <= t.core_count()))
    bad("thread_pool_size must not exceed big_cores + little_cores");
  if (!(cfg.qps > 0)) bad("qps must be > 0");
  if (!(cfg.duration_s > 0)) bad("duration_s must be > 0");
  if (!(cfg.migration_overhead_ms >= 0)) bad("migration_overhead_ms must be >= 0");

  const KeywordDist& d = cfg.keyword_dist;
  switch (d.kind) {
    case KeywordDist::Kind::Uniform:
      if (!(d.lo >= 1)) bad("keyword_dist uniform lo must be >= 1");
      if (!(d.lo <= d.hi)) bad("keyword_dist uniform lo must be <= hi");
      break;
    case KeywordDist::Kind::Zipf:
      if (!(d.s > 0)) bad("keyword_dist zipf s must be > 0");
      if (!(d.max_k >= 1)) bad("keyword_dist zipf max_k must be >= 1");
      break;
    case KeywordDist::Kind::Fixed:
      if (!(d.k >= 1)) bad("keyword_dist fixed k must be >= 1");
      break;
  }
  return v;
}

}  // namespace hurryup
