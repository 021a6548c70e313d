#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hurryup/config_file.hpp"
#include "hurryup/mapper.hpp"
#include "hurryup/metrics.hpp"
#include "hurryup/rng.hpp"
#include "hurryup/simengine.hpp"
#include "hurryup/statsproto.hpp"
#include "hurryup/types.hpp"
#include "hurryup/workload.hpp"

namespace py = pybind11;
using namespace hurryup;

PYBIND11_MODULE(_core, m) {
  m.doc() = "big/little thread-mapping policy, simulator and metrics";

  py::register_exception<Error>(m, "HurryupError");

  py::enum_<CoreType>(m, "CoreType")
      .value("Big", CoreType::Big)
      .value("Little", CoreType::Little);

  py::enum_<Policy>(m, "Policy")
      .value("HurryUp", Policy::HurryUp)
      .value("StaticRandom", Policy::StaticRandom);

  py::class_<Topology>(m, "Topology")
      .def(py::init<>())
      .def(py::init([](int big, int little) {
             return Topology{big, little};
           }),
           py::arg("big_cores"), py::arg("little_cores"))
      .def_readwrite("big_cores", &Topology::big_cores)
      .def_readwrite("little_cores", &Topology::little_cores)
      .def("core_count", &Topology::core_count)
      .def("core_type", &Topology::core_type)
      .def("is_big", &Topology::is_big);

  py::class_<ServiceModel>(m, "ServiceModel")
      .def(py::init<>())
      .def_readwrite("little_ms_per_keyword", &ServiceModel::little_ms_per_keyword)
      .def_readwrite("big_ms_per_keyword", &ServiceModel::big_ms_per_keyword)
      .def_readwrite("fixed_overhead_ms", &ServiceModel::fixed_overhead_ms)
      .def_readwrite("noise_cv", &ServiceModel::noise_cv);

  py::class_<PowerModel>(m, "PowerModel")
      .def(py::init<>())
      .def_readwrite("big_active_w", &PowerModel::big_active_w)
      .def_readwrite("big_idle_w", &PowerModel::big_idle_w)
      .def_readwrite("little_active_w", &PowerModel::little_active_w)
      .def_readwrite("little_idle_w", &PowerModel::little_idle_w)
      .def_readwrite("rest_of_system_w", &PowerModel::rest_of_system_w);

  py::class_<MapperConfig>(m, "MapperConfig")
      .def(py::init<>())
      .def(py::init([](double sampling, double threshold) {
             return MapperConfig{sampling, threshold};
           }),
           py::arg("sampling_time_ms"), py::arg("migration_threshold_ms"))
      .def_readwrite("sampling_time_ms", &MapperConfig::sampling_time_ms)
      .def_readwrite("migration_threshold_ms", &MapperConfig::migration_threshold_ms);

  py::class_<KeywordDist>(m, "KeywordDist")
      .def(py::init<>())
      .def_static("uniform", &KeywordDist::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("zipf", &KeywordDist::zipf, py::arg("s"), py::arg("max_k"))
      .def_static("fixed", &KeywordDist::fixed, py::arg("k"))
      .def_static("parse",
                  [](const std::string& text) {
                    auto d = KeywordDist::parse(text);
                    if (!d) throw Error("bad keyword_dist descriptor: " + text);
                    return *d;
                  })
      .def("__str__", &KeywordDist::to_string);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("topology", &SimConfig::topology)
      .def_readwrite("service_model", &SimConfig::service_model)
      .def_readwrite("power_model", &SimConfig::power_model)
      .def_readwrite("mapper", &SimConfig::mapper)
      .def_readwrite("thread_pool_size", &SimConfig::thread_pool_size)
      .def_readwrite("qps", &SimConfig::qps)
      .def_readwrite("duration_s", &SimConfig::duration_s)
      .def_readwrite("keyword_dist", &SimConfig::keyword_dist)
      .def_readwrite("migration_overhead_ms", &SimConfig::migration_overhead_ms)
      .def_readwrite("rng_seed", &SimConfig::rng_seed)
      .def_readwrite("policy", &SimConfig::policy);

  m.def("validate_config", &validate_config, py::arg("config"));
  m.def("load_config_file", [](const std::string& path) {
    LoadedConfig loaded = load_config_file(path);
    if (!loaded.issues.empty()) {
      std::ostringstream err;
      for (const auto& issue : loaded.issues)
        err << "line " << issue.line << ": " << issue.message << "\n";
      throw Error(err.str());
    }
    return loaded.config;
  });

  // stats wire protocol
  py::class_<proto::StatsEvent>(m, "StatsEvent")
      .def(py::init<>())
      .def(py::init([](std::int64_t tid, const std::string& rid, std::int64_t ts) {
             return proto::StatsEvent{tid, rid, ts};
           }),
           py::arg("thread_id"), py::arg("request_id"), py::arg("timestamp_ms"))
      .def_readwrite("thread_id", &proto::StatsEvent::thread_id)
      .def_readwrite("request_id", &proto::StatsEvent::request_id)
      .def_readwrite("timestamp_ms", &proto::StatsEvent::timestamp_ms)
      .def("__eq__", [](const proto::StatsEvent& a,
                        const proto::StatsEvent& b) { return a == b; });
  m.def("encode_event", &proto::encode_event);
  m.def("parse_line", [](const std::string& line) { return proto::parse_line(line); });

  // mapper
  py::class_<mapper::RequestRecord>(m, "RequestRecord")
      .def(py::init([](int tid, double ts) {
             return mapper::RequestRecord{tid, ts};
           }),
           py::arg("thread_id"), py::arg("start_timestamp_ms"))
      .def_readwrite("thread_id", &mapper::RequestRecord::thread_id)
      .def_readwrite("start_timestamp_ms", &mapper::RequestRecord::start_timestamp_ms);

  py::class_<mapper::CoreOccupancy>(m, "CoreOccupancy")
      .def(py::init<>())
      .def("place", &mapper::CoreOccupancy::place)
      .def("detach", &mapper::CoreOccupancy::detach)
      .def("relocate", &mapper::CoreOccupancy::relocate)
      .def("thread_on", &mapper::CoreOccupancy::thread_on)
      .def("core_of", &mapper::CoreOccupancy::core_of)
      .def("by_thread", &mapper::CoreOccupancy::by_thread);

  py::class_<mapper::Move>(m, "Move")
      .def_readonly("thread_id", &mapper::Move::thread_id)
      .def_readonly("to_core_id", &mapper::Move::to_core_id)
      .def_readonly("displaced_thread_id", &mapper::Move::displaced_thread_id)
      .def_readonly("displaced_to_core_id", &mapper::Move::displaced_to_core_id)
      .def("__repr__", [](const mapper::Move& mv) {
        std::ostringstream s;
        s << "Move(thread " << mv.thread_id << " -> core " << mv.to_core_id;
        if (mv.displaced_thread_id)
          s << ", displacing " << *mv.displaced_thread_id << " -> core "
            << *mv.displaced_to_core_id;
        s << ")";
        return s.str();
      });

  m.def(
      "select_migrations",
      [](const std::map<std::string, mapper::RequestRecord>& table,
         const mapper::CoreOccupancy& occ, const Topology& topo, double now_ms,
         const MapperConfig& cfg) {
        return mapper::select_migrations(table, occ, topo, now_ms, cfg);
      },
      py::arg("table"), py::arg("occupancy"), py::arg("topology"), py::arg("now_ms"),
      py::arg("mapper_config"));

  m.def(
      "initial_mapping",
      [](int pool_size, const Topology& topo, Policy policy, std::uint64_t seed) {
        Rng rng = Rng::stream(seed, kStreamPlacement);
        return mapper::initial_mapping(pool_size, topo, policy, rng);
      },
      py::arg("pool_size"), py::arg("topology"), py::arg("policy"), py::arg("seed"));

  // workload
  py::class_<workload::Arrival>(m, "Arrival")
      .def_readonly("id", &workload::Arrival::id)
      .def_readonly("arrival_ms", &workload::Arrival::arrival_ms)
      .def_readonly("keywords", &workload::Arrival::keywords);

  m.def(
      "generate_workload",
      [](double qps, double duration_s, const KeywordDist& dist, std::uint64_t seed) {
        Rng rng = Rng::stream(seed, kStreamArrivals);
        return workload::generate(qps, duration_s, dist, rng);
      },
      py::arg("qps"), py::arg("duration_s"), py::arg("dist"), py::arg("seed"));

  // simulation
  py::class_<sim::DwellSegment>(m, "DwellSegment")
      .def_readonly("core_id", &sim::DwellSegment::core_id)
      .def_readonly("start_ms", &sim::DwellSegment::start_ms)
      .def_readonly("end_ms", &sim::DwellSegment::end_ms)
      .def_readonly("work_kw", &sim::DwellSegment::work_kw);

  py::class_<sim::RequestOutcome>(m, "RequestOutcome")
      .def_readonly("id", &sim::RequestOutcome::id)
      .def_readonly("keywords", &sim::RequestOutcome::keywords)
      .def_readonly("work_units", &sim::RequestOutcome::work_units)
      .def_readonly("arrival_ms", &sim::RequestOutcome::arrival_ms)
      .def_readonly("start_ms", &sim::RequestOutcome::start_ms)
      .def_readonly("completion_ms", &sim::RequestOutcome::completion_ms)
      .def_readonly("migrations", &sim::RequestOutcome::migrations)
      .def_readonly("final_core_type", &sim::RequestOutcome::final_core_type)
      .def_readonly("dwells", &sim::RequestOutcome::dwells)
      .def("latency_ms", &sim::RequestOutcome::latency_ms);

  py::class_<sim::PowerSample>(m, "PowerSample")
      .def_readonly("t_ms", &sim::PowerSample::t_ms)
      .def_readonly("big_w", &sim::PowerSample::big_w)
      .def_readonly("little_w", &sim::PowerSample::little_w)
      .def_readonly("rest_w", &sim::PowerSample::rest_w);

  py::class_<sim::Trace>(m, "Trace")
      .def_readonly("requests", &sim::Trace::requests)
      .def_readonly("power", &sim::Trace::power)
      .def_readonly("big_energy_j", &sim::Trace::big_energy_j)
      .def_readonly("little_energy_j", &sim::Trace::little_energy_j)
      .def_readonly("rest_energy_j", &sim::Trace::rest_energy_j)
      .def_readonly("makespan_ms", &sim::Trace::makespan_ms)
      .def_readonly("arrived", &sim::Trace::arrived)
      .def_readonly("completed", &sim::Trace::completed)
      .def_readonly("migrations", &sim::Trace::migrations)
      .def("total_energy_j", &sim::Trace::total_energy_j)
      .def("hash", &sim::Trace::hash)
      .def("trace_csv",
           [](const sim::Trace& t) {
             std::ostringstream out;
             sim::write_trace_csv(out, t);
             return out.str();
           })
      .def("power_csv", [](const sim::Trace& t) {
        std::ostringstream out;
        sim::write_power_csv(out, t);
        return out.str();
      });

  m.def("run", &sim::run, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_replay", &sim::run_replay, py::arg("config"), py::arg("arrivals"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "service_time_ms",
      [](int keywords, CoreType core, const ServiceModel& model, std::uint64_t seed) {
        Rng rng(seed);
        return sim::service_time_ms(keywords, core, model, rng);
      },
      py::arg("keywords"), py::arg("core"), py::arg("model"), py::arg("seed") = 1);

  // metrics
  py::class_<metrics::Report>(m, "Report")
      .def_readonly("p50_ms", &metrics::Report::p50_ms)
      .def_readonly("p90_ms", &metrics::Report::p90_ms)
      .def_readonly("p95_ms", &metrics::Report::p95_ms)
      .def_readonly("p99_ms", &metrics::Report::p99_ms)
      .def_readonly("max_ms", &metrics::Report::max_ms)
      .def_readonly("big_energy_j", &metrics::Report::big_energy_j)
      .def_readonly("little_energy_j", &metrics::Report::little_energy_j)
      .def_readonly("rest_energy_j", &metrics::Report::rest_energy_j)
      .def_readonly("total_energy_j", &metrics::Report::total_energy_j)
      .def_readonly("requests", &metrics::Report::requests)
      .def_readonly("migrations", &metrics::Report::migrations)
      .def_readonly("big_completion_share", &metrics::Report::big_completion_share)
      .def_readonly("little_completion_share",
                    &metrics::Report::little_completion_share)
      .def_readonly("qps_achieved", &metrics::Report::qps_achieved)
      .def("json", &metrics::report_to_json)
      .def("text", &metrics::report_to_text);

  py::class_<metrics::HistogramBin>(m, "HistogramBin")
      .def_readonly("lo_ms", &metrics::HistogramBin::lo_ms)
      .def_readonly("hi_ms", &metrics::HistogramBin::hi_ms)
      .def_readonly("pdf", &metrics::HistogramBin::pdf)
      .def_readonly("cdf", &metrics::HistogramBin::cdf);

  py::class_<metrics::Comparison>(m, "Comparison")
      .def_readonly("tail_reduction_pct", &metrics::Comparison::tail_reduction_pct)
      .def_readonly("energy_overhead_pct", &metrics::Comparison::energy_overhead_pct);

  m.def("percentile", [](const std::vector<double>& values, double p) {
    return metrics::percentile(values, p);
  });
  m.def("histogram", [](const std::vector<double>& values, double bin_ms) {
    return metrics::histogram(values, bin_ms);
  });
  m.def("report_from_trace", &metrics::report_from_trace, py::arg("trace"),
        py::arg("duration_s"));
  m.def("compare", &metrics::compare, py::arg("hurryup"), py::arg("static_baseline"));

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
