#include "hurryup/config_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hurryup {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool to_double(std::string_view s, double& out) {
  std::string buf(s);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return !buf.empty() && end == buf.c_str() + buf.size();
}

bool to_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool to_u64(std::string_view s, std::uint64_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "big_cores",
      "little_cores",
      "little_ms_per_keyword",
      "big_ms_per_keyword",
      "fixed_overhead_ms",
      "noise_cv",
      "big_active_w",
      "big_idle_w",
      "little_active_w",
      "little_idle_w",
      "rest_of_system_w",
      "sampling_time_ms",
      "migration_threshold_ms",
      "thread_pool_size",
      "qps",
      "duration_s",
      "keyword_dist",
      "migration_overhead_ms",
      "rng_seed",
      "policy",
  };
  return keys;
}

LoadedConfig parse_config_text(std::string_view text, SimConfig base) {
  LoadedConfig out;
  out.config = base;
  SimConfig& c = out.config;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    std::string_view line = raw;
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      out.issues.push_back({lineno, "expected `key = value`"});
      continue;
    }
    std::string key(trim(line.substr(0, eq)));
    std::string_view val = trim(line.substr(eq + 1));

    auto fail = [&](const std::string& why) {
      out.issues.push_back({lineno, key + ": " + why});
    };
    auto set_d = [&](double& field) {
      double d;
      if (to_double(val, d)) field = d;
      else fail("not a number: '" + std::string(val) + "'");
    };
    auto set_i = [&](int& field) {
      int i;
      if (to_int(val, i)) field = i;
      else fail("not an integer: '" + std::string(val) + "'");
    };

    if (key == "big_cores") set_i(c.topology.big_cores);
    else if (key == "little_cores") set_i(c.topology.little_cores);
    else if (key == "little_ms_per_keyword") set_d(c.service_model.little_ms_per_keyword);
    else if (key == "big_ms_per_keyword") set_d(c.service_model.big_ms_per_keyword);
    else if (key == "fixed_overhead_ms") set_d(c.service_model.fixed_overhead_ms);
    else if (key == "noise_cv") set_d(c.service_model.noise_cv);
    else if (key == "big_active_w") set_d(c.power_model.big_active_w);
    else if (key == "big_idle_w") set_d(c.power_model.big_idle_w);
    else if (key == "little_active_w") set_d(c.power_model.little_active_w);
    else if (key == "little_idle_w") set_d(c.power_model.little_idle_w);
    else if (key == "rest_of_system_w") set_d(c.power_model.rest_of_system_w);
    else if (key == "sampling_time_ms") set_d(c.mapper.sampling_time_ms);
    else if (key == "migration_threshold_ms") set_d(c.mapper.migration_threshold_ms);
    else if (key == "thread_pool_size") set_i(c.thread_pool_size);
    else if (key == "qps") set_d(c.qps);
    else if (key == "duration_s") set_d(c.duration_s);
    else if (key == "migration_overhead_ms") set_d(c.migration_overhead_ms);
    else if (key == "rng_seed") {
      std::uint64_t u;
      if (to_u64(val, u)) c.rng_seed = u;
      else fail("not a non-negative integer: '" + std::string(val) + "'");
    } else if (key == "keyword_dist") {
      if (auto d = KeywordDist::parse(val)) c.keyword_dist = *d;
      else fail("expected uniform(lo,hi), zipf(s,max_k) or fixed(k); got '" + std::string(val) + "'");
    } else if (key == "policy") {
      if (auto p = parse_policy(val)) c.policy = *p;
      else fail("expected hurryup or static; got '" + std::string(val) + "'");
    } else {
      fail("unknown key");
    }
  }
  return out;
}

LoadedConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

std::string config_to_text(const SimConfig& c) {
  std::ostringstream o;
  char buf[128];
  auto kv = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", k, v);
    o << buf;
  };
  o << "big_cores = " << c.topology.big_cores << "\n";
  o << "little_cores = " << c.topology.little_cores << "\n";
  kv("little_ms_per_keyword", c.service_model.little_ms_per_keyword);
  kv("big_ms_per_keyword", c.service_model.big_ms_per_keyword);
  kv("fixed_overhead_ms", c.service_model.fixed_overhead_ms);
  kv("noise_cv", c.service_model.noise_cv);
  kv("big_active_w", c.power_model.big_active_w);
  kv("big_idle_w", c.power_model.big_idle_w);
  kv("little_active_w", c.power_model.little_active_w);
  kv("little_idle_w", c.power_model.little_idle_w);
  kv("rest_of_system_w", c.power_model.rest_of_system_w);
  kv("sampling_time_ms", c.mapper.sampling_time_ms);
  kv("migration_threshold_ms", c.mapper.migration_threshold_ms);
  o << "thread_pool_size = " << c.thread_pool_size << "\n";
  kv("qps", c.qps);
  kv("duration_s", c.duration_s);
  o << "keyword_dist = " << c.keyword_dist.to_string() << "\n";
  kv("migration_overhead_ms", c.migration_overhead_ms);
  o << "rng_seed = " << c.rng_seed << "\n";
  o << "policy = " << to_string(c.policy) << "\n";
  return o.str();
}

}  // namespace hurryup
