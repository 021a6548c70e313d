// hurryup: experiment runner for the big/little thread-mapping simulator,
// plus a live mode that drives the mapper from a real stats pipe.

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hurryup/config_file.hpp"
#include "hurryup/live_session.hpp"
#include "hurryup/metrics.hpp"
#include "hurryup/simengine.hpp"
#include "hurryup/workload.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace hurryup;

namespace {

constexpr int kExitConfigInvalid = 2;
constexpr int kExitIoFailure = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  double qps = -1;
  double duration_s = -1;
  std::string policy;
  std::int64_t seed = -1;
  double sampling_ms = -1;
  double threshold_ms = -1;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "config file (key = value lines)");
  cmd->add_option("--out", opts.out_dir,
                  "output directory (default $HURRYUP_OUT or ./out)");
  cmd->add_option("--qps", opts.qps, "offered load, queries per second");
  cmd->add_option("--duration-s", opts.duration_s, "arrival horizon in seconds");
  cmd->add_option("--policy", opts.policy, "hurryup | static")
      ->check(CLI::IsMember({"hurryup", "static"}));
  cmd->add_option("--seed", opts.seed, "rng seed");
  cmd->add_option("--sampling-ms", opts.sampling_ms, "mapper sampling interval");
  cmd->add_option("--threshold-ms", opts.threshold_ms, "migration threshold");
}

// config file < explicit flags
SimConfig resolve_config(const CommonOpts& opts) {
  SimConfig cfg;
  if (!opts.config_path.empty()) {
    LoadedConfig loaded = load_config_file(opts.config_path);
    if (!loaded.issues.empty()) {
      for (const auto& issue : loaded.issues)
        std::cerr << opts.config_path << ":" << issue.line << ": " << issue.message
                  << "\n";
      throw Error("config file has errors");
    }
    cfg = loaded.config;
  }
  if (opts.qps >= 0) cfg.qps = opts.qps;
  if (opts.duration_s >= 0) cfg.duration_s = opts.duration_s;
  if (!opts.policy.empty()) cfg.policy = *parse_policy(opts.policy);
  if (opts.seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.sampling_ms >= 0) cfg.mapper.sampling_time_ms = opts.sampling_ms;
  if (opts.threshold_ms >= 0) cfg.mapper.migration_threshold_ms = opts.threshold_ms;
  return cfg;
}

int check_valid(const SimConfig& cfg) {
  auto violations = validate_config(cfg);
  if (violations.empty()) return 0;
  std::cerr << "invalid config:\n";
  for (const auto& v : violations) std::cerr << "  " << v << "\n";
  return kExitConfigInvalid;
}

fs::path resolve_out_dir(const CommonOpts& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv("HURRYUP_OUT")) return env;
  return "out";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error("write failed for " + path.string());
}

void write_run_outputs(const fs::path& dir, const std::string& tag,
                       const sim::Trace& trace, const metrics::Report& report) {
  std::ostringstream tcsv, pcsv;
  sim::write_trace_csv(tcsv, trace);
  sim::write_power_csv(pcsv, trace);
  write_file(dir / ("trace_" + tag + ".csv"), tcsv.str());
  write_file(dir / ("power_" + tag + ".csv"), pcsv.str());
  write_file(dir / ("report_" + tag + ".json"), metrics::report_to_json(report));
}

int cmd_run(const CommonOpts& opts, bool both_policies) {
  SimConfig cfg = resolve_config(opts);
  if (int rc = check_valid(cfg)) return rc;
  fs::path dir = resolve_out_dir(opts);
  fs::create_directories(dir);

  Rng arrivals_rng = Rng::stream(cfg.rng_seed, kStreamArrivals);
  auto arrivals =
      workload::generate(cfg.qps, cfg.duration_s, cfg.keyword_dist, arrivals_rng);
  {
    std::ostringstream acsv;
    workload::write_arrivals_csv(acsv, arrivals);
    write_file(dir / "arrivals.csv", acsv.str());
  }

  auto one = [&](Policy policy) {
    SimConfig c = cfg;
    c.policy = policy;
    sim::Trace trace = sim::run_replay(c, arrivals);
    metrics::Report report = metrics::report_from_trace(trace, c.duration_s);
    write_run_outputs(dir, to_string(policy), trace, report);
    std::cout << "== " << to_string(policy) << " ==\n"
              << metrics::report_to_text(report);
    return report;
  };

  if (both_policies) {
    metrics::Report hurry = one(Policy::HurryUp);
    metrics::Report stat = one(Policy::StaticRandom);
    metrics::Comparison cmp = metrics::compare(hurry, stat);
    write_file(dir / "comparison.json", metrics::comparison_to_json(cmp));
    std::cout << "tail reduction: " << cmp.tail_reduction_pct
              << "%  energy overhead: " << cmp.energy_overhead_pct << "%\n";
  } else {
    one(cfg.policy);
  }
  return 0;
}

struct SweepAxes {
  std::vector<double> qps;
  std::vector<double> threshold_ms;
  std::vector<double> sampling_ms;
  std::vector<std::string> policies;
  std::vector<std::int64_t> seeds;
};

struct SweepCell {
  double qps;
  double sampling_ms;
  double threshold_ms;
  Policy policy;
  std::uint64_t seed;
  double p90_ms = 0;
  double energy_j = 0;
};

int cmd_sweep(const CommonOpts& opts, const SweepAxes& axes, int jobs) {
  SimConfig base = resolve_config(opts);
  if (int rc = check_valid(base)) return rc;
  fs::path dir = resolve_out_dir(opts);
  fs::create_directories(dir);

  auto qps_axis = axes.qps.empty() ? std::vector<double>{base.qps} : axes.qps;
  auto sampling_axis = axes.sampling_ms.empty()
                           ? std::vector<double>{base.mapper.sampling_time_ms}
                           : axes.sampling_ms;
  auto threshold_axis = axes.threshold_ms.empty()
                            ? std::vector<double>{base.mapper.migration_threshold_ms}
                            : axes.threshold_ms;
  std::vector<Policy> policy_axis;
  if (axes.policies.empty()) {
    policy_axis.push_back(base.policy);
  } else {
    for (const auto& p : axes.policies) policy_axis.push_back(*parse_policy(p));
  }
  std::vector<std::uint64_t> seed_axis;
  if (axes.seeds.empty()) {
    seed_axis.push_back(base.rng_seed);
  } else {
    for (auto s : axes.seeds) seed_axis.push_back(static_cast<std::uint64_t>(s));
  }

  // Cells sharing (seed, qps) replay one arrival stream, so policy and
  // threshold comparisons are paired.
  std::map<std::pair<std::uint64_t, double>, std::vector<workload::Arrival>> workloads;
  for (auto seed : seed_axis)
    for (double qps : qps_axis) {
      Rng rng = Rng::stream(seed, kStreamArrivals);
      workloads[{seed, qps}] =
          workload::generate(qps, base.duration_s, base.keyword_dist, rng);
    }

  std::vector<SweepCell> cells;
  for (double qps : qps_axis)
    for (double sampling : sampling_axis)
      for (double threshold : threshold_axis)
        for (Policy policy : policy_axis)
          for (auto seed : seed_axis)
            cells.push_back({qps, sampling, threshold, policy, seed});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& cell = cells[i];
      SimConfig cfg = base;
      cfg.qps = cell.qps;
      cfg.mapper.sampling_time_ms = cell.sampling_ms;
      cfg.mapper.migration_threshold_ms = cell.threshold_ms;
      cfg.policy = cell.policy;
      cfg.rng_seed = cell.seed;
      sim::Trace trace = sim::run_replay(cfg, workloads.at({cell.seed, cell.qps}));
      metrics::Report report = metrics::report_from_trace(trace, cfg.duration_s);
      cell.p90_ms = report.p90_ms;
      cell.energy_j = report.total_energy_j;
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "qps,sampling_ms,threshold_ms,policy,seed,p90_ms,total_energy_j\n";
  char buf[256];
  for (const SweepCell& cell : cells) {
    std::snprintf(buf, sizeof buf, "%g,%g,%g,%s,%llu,%.6f,%.6f\n", cell.qps,
                  cell.sampling_ms, cell.threshold_ms, to_string(cell.policy),
                  static_cast<unsigned long long>(cell.seed), cell.p90_ms,
                  cell.energy_j);
    csv << buf;
  }
  write_file(dir / "sweep.csv", csv.str());
  std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << cells.size()
            << " cells)\n";
  return 0;
}

double epoch_ms_now() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

int cmd_live(const CommonOpts& opts, const std::string& pipe_path,
             const std::string& backend_name) {
  SimConfig cfg = resolve_config(opts);
  if (int rc = check_valid(cfg)) return rc;
  fs::path dir = resolve_out_dir(opts);
  fs::create_directories(dir);

  int fd = ::open(pipe_path.c_str(), O_RDONLY);
  if (fd < 0) {
    std::cerr << "cannot open stats pipe: " << pipe_path << "\n";
    return kExitIoFailure;
  }

  std::unique_ptr<affinity::Backend> backend;
  if (backend_name == "sched") {
#ifdef __linux__
    backend = std::make_unique<affinity::SchedAffinityBackend>(std::cerr);
#else
    std::cerr << "sched backend unavailable on this platform\n";
    return kExitIoFailure;
#endif
  } else {
    backend = std::make_unique<affinity::LoggingBackend>(std::cout);
  }

  live::LiveSession session(cfg.topology, cfg.mapper, *backend, std::cout);
  session.anchor_clock(epoch_ms_now());

  // Reader thread blocks on the pipe; the main loop wakes at window edges.
  std::mutex mu;
  std::condition_variable cv;
  std::vector<proto::StatsEvent> queue;
  std::atomic<bool> closed{false};
  std::int64_t malformed = 0;

  std::thread reader([&] {
    proto::LineChannel channel = proto::LineChannel::from_fd(fd);
    try {
      for (;;) {
        auto events = proto::read_available(
            channel, [&](std::string_view line, std::string_view why) {
              std::lock_guard lock(mu);
              ++malformed;
              std::cerr << "malformed line (" << why << "): " << line;
              if (!line.ends_with('\n')) std::cerr << "\n";
            });
        {
          std::lock_guard lock(mu);
          queue.insert(queue.end(), events.begin(), events.end());
        }
        cv.notify_one();
      }
    } catch (const proto::ChannelClosed&) {
      closed = true;
      cv.notify_one();
    } catch (const Error& e) {
      std::cerr << "stats channel error: " << e.what() << "\n";
      closed = true;
      cv.notify_one();
    }
  });

  for (;;) {
    std::unique_lock lock(mu);
    double wait_ms = session.next_window_ms() - epoch_ms_now();
    if (wait_ms > 0)
      cv.wait_for(lock, std::chrono::duration<double, std::milli>(wait_ms));
    std::vector<proto::StatsEvent> batch;
    batch.swap(queue);
    bool done = closed && batch.empty();
    lock.unlock();
    for (const auto& e : batch) session.ingest(e);
    if (done) break;
    session.maybe_window(epoch_ms_now());
  }
  reader.join();
  ::close(fd);

  metrics::Report report = session.report();
  write_file(dir / "session_report.json", metrics::report_to_json(report));
  std::cout << "session complete: " << session.stats().completed << " completed, "
            << session.stats().in_flight << " in flight, "
            << session.stats().windows << " windows, " << session.stats().moves
            << " moves, " << malformed << " malformed lines\n"
            << metrics::report_to_text(report);
  return 0;
}

std::string key_help() {
  std::string s = "config file keys: ";
  bool first = true;
  for (const auto& k : config_keys()) {
    if (!first) s += ", ";
    s += k;
    first = false;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"big/little thread-mapping simulator and live mapper"};
  app.footer(key_help());
  app.require_subcommand(1);

  CommonOpts run_opts;
  bool run_both = false;
  CLI::App* run = app.add_subcommand("run", "one simulation; trace + report files");
  add_common_flags(run, run_opts);
  run->add_flag("--both", run_both,
                "run hurryup and static on the same workload and compare");

  CommonOpts sweep_opts;
  SweepAxes axes;
  int jobs = 1;
  CLI::App* sweep =
      app.add_subcommand("sweep", "cartesian experiment matrix; long-format csv");
  add_common_flags(sweep, sweep_opts);
  sweep->add_option("--qps-list", axes.qps, "qps axis")->delimiter(',');
  sweep->add_option("--threshold-list", axes.threshold_ms, "migration threshold axis")
      ->delimiter(',');
  sweep->add_option("--sampling-list", axes.sampling_ms, "sampling interval axis")
      ->delimiter(',');
  sweep->add_option("--policy-list", axes.policies, "policy axis")
      ->delimiter(',')
      ->check(CLI::IsMember({"hurryup", "static"}));
  sweep->add_option("--seed-list", axes.seeds, "seed axis")->delimiter(',');
  sweep->add_option("--jobs", jobs, "parallel cells");

  CommonOpts live_opts;
  std::string pipe_path;
  std::string backend_name = "log";
  CLI::App* live = app.add_subcommand("live", "drive the mapper from a stats pipe");
  add_common_flags(live, live_opts);
  live->add_option("--pipe", pipe_path, "path to the stats stream (fifo or file)")
      ->required();
  live->add_option("--backend", backend_name, "log | sched")
      ->check(CLI::IsMember({"log", "sched"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts, run_both);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, axes, jobs);
    if (live->parsed()) return cmd_live(live_opts, pipe_path, backend_name);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  }
  return 0;
}
