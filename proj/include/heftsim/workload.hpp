#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "heftsim/core.hpp"
#include "heftsim/error.hpp"

namespace heftsim {

// Workload specification: PE roster, application DAG templates with per-PE
// execution tables, and an arrival schedule per template.

enum class ArrivalProcess { Periodic, Poisson };

struct ScheduleEntry {
  std::string template_name;
  int count = 1;
  double target_fps = 1.0;  // application instances per second
  ArrivalProcess process = ArrivalProcess::Periodic;
  std::uint64_t seed = 0;
};

struct WorkloadSpec {
  int schema_version = 1;
  std::vector<PeDescriptor> pes;
  std::vector<AppDag> templates;
  std::map<std::string, double> frame_size_kb;
  std::vector<ScheduleEntry> schedule;

  const AppDag* find_template(const std::string& name) const {
    for (const auto& t : templates) {
      if (t.template_name == name) return &t;
    }
    return nullptr;
  }

  int total_instances() const {
    int total = 0;
    for (const auto& e : schedule) total += e.count;
    return total;
  }
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Arrival times in ns, non-decreasing. Periodic arrivals are exactly affine
// in k; poisson arrivals draw exponential gaps from the seeded generator.
inline std::vector<SimTime> generate_arrivals(const ScheduleEntry& entry,
                                              std::uint64_t seed_mix = 0) {
  if (entry.count < 1 || entry.target_fps <= 0.0) {
    throw SimError(ErrorCode::ValidationError, "schedule entry needs count >= 1 and rate > 0");
  }
  std::vector<SimTime> arrivals;
  arrivals.reserve(static_cast<size_t>(entry.count));
  if (entry.process == ArrivalProcess::Periodic) {
    for (int k = 0; k < entry.count; ++k) {
      arrivals.push_back(static_cast<SimTime>(
          std::llround(static_cast<double>(k) * 1e9 / entry.target_fps)));
    }
  } else {
    std::mt19937_64 rng(entry.seed ^ (seed_mix * 0x9e3779b97f4a7c15ull));
    double t = 0.0;
    for (int k = 0; k < entry.count; ++k) {
      if (k > 0) {
        double u = detail::uniform01(rng);
        t += -std::log(1.0 - u) * 1e9 / entry.target_fps;
      }
      arrivals.push_back(static_cast<SimTime>(std::llround(t)));
    }
  }
  return arrivals;
}

// Cross-checks a spec: every template validates, every exec table covers the
// declared PEs, every schedule entry names a known template.
inline void validate_spec(const WorkloadSpec& spec) {
  if (spec.pes.empty()) {
    throw SimError(ErrorCode::ValidationError, "workload declares no PEs");
  }
  for (size_t i = 0; i < spec.pes.size(); ++i) {
    if (spec.pes[i].pe_id != static_cast<int>(i)) {
      throw SimError(ErrorCode::ValidationError, "PE ids must be dense from 0");
    }
  }
  for (const AppDag& dag : spec.templates) {
    validate_dag(dag);
    for (const DagNode& node : dag.nodes) {
      if (node.exec.size() != spec.pes.size()) {
        throw SimError(ErrorCode::ValidationError,
                       "template '" + dag.template_name + "' node " +
                           std::to_string(node.node_id) +
                           " exec table does not cover the declared PEs");
      }
      task_average(node.exec);  // throws if no PE supports the node
      for (std::uint64_t t : node.exec) {
        if (t != kUnsupported && t < 1) {
          throw SimError(ErrorCode::ValidationError,
                         "template '" + dag.template_name + "': exec times must be >= 1 ns");
        }
      }
    }
  }
  for (const ScheduleEntry& entry : spec.schedule) {
    if (!spec.find_template(entry.template_name)) {
      throw SimError(ErrorCode::ValidationError,
                     "schedule references unknown template '" + entry.template_name + "'");
    }
    if (entry.count < 1 || entry.target_fps <= 0.0) {
      throw SimError(ErrorCode::ValidationError, "schedule entry needs count >= 1 and rate > 0");
    }
  }
}

namespace detail {

inline nlohmann::json spec_to_json(const WorkloadSpec& spec) {
  nlohmann::json j;
  j["schema_version"] = spec.schema_version;
  j["pes"] = nlohmann::json::array();
  for (const auto& pe : spec.pes) {
    j["pes"].push_back({{"id", pe.pe_id}, {"name", pe.name}});
  }
  j["templates"] = nlohmann::json::array();
  for (const auto& dag : spec.templates) {
    nlohmann::json t;
    t["name"] = dag.template_name;
    auto it = spec.frame_size_kb.find(dag.template_name);
    if (it != spec.frame_size_kb.end()) t["frame_size_kb"] = it->second;
    t["nodes"] = nlohmann::json::array();
    for (const auto& node : dag.nodes) {
      nlohmann::json exec = nlohmann::json::array();
      for (std::uint64_t e : node.exec) {
        if (e == kUnsupported) {
          exec.push_back(nullptr);
        } else {
          exec.push_back(e);
        }
      }
      t["nodes"].push_back({{"id", node.node_id}, {"exec_ns", exec}});
    }
    t["edges"] = nlohmann::json::array();
    for (const auto& e : dag.edges) t["edges"].push_back({e.from, e.to});
    j["templates"].push_back(t);
  }
  j["schedule"] = nlohmann::json::array();
  for (const auto& entry : spec.schedule) {
    j["schedule"].push_back(
        {{"template", entry.template_name},
         {"count", entry.count},
         {"target_fps", entry.target_fps},
         {"process", entry.process == ArrivalProcess::Periodic ? "periodic" : "poisson"},
         {"seed", entry.seed}});
  }
  return j;
}

inline WorkloadSpec spec_from_json(const nlohmann::json& j) {
  WorkloadSpec spec;
  try {
    spec.schema_version = j.at("schema_version").get<int>();
    if (spec.schema_version != 1) {
      throw SimError(ErrorCode::ParseError,
                     "unsupported schema_version " + std::to_string(spec.schema_version));
    }
    for (const auto& pe : j.at("pes")) {
      spec.pes.push_back({pe.at("id").get<int>(), pe.at("name").get<std::string>()});
    }
    for (const auto& t : j.at("templates")) {
      AppDag dag;
      dag.template_name = t.at("name").get<std::string>();
      if (t.contains("frame_size_kb")) {
        spec.frame_size_kb[dag.template_name] = t.at("frame_size_kb").get<double>();
      }
      for (const auto& node : t.at("nodes")) {
        DagNode n;
        n.node_id = node.at("id").get<int>();
        for (const auto& e : node.at("exec_ns")) {
          n.exec.push_back(e.is_null() ? kUnsupported : e.get<std::uint64_t>());
        }
        dag.nodes.push_back(std::move(n));
      }
      for (const auto& e : t.at("edges")) {
        dag.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
      }
      spec.templates.push_back(std::move(dag));
    }
    for (const auto& s : j.at("schedule")) {
      ScheduleEntry entry;
      entry.template_name = s.at("template").get<std::string>();
      entry.count = s.at("count").get<int>();
      entry.target_fps = s.at("target_fps").get<double>();
      std::string process = s.at("process").get<std::string>();
      if (process == "periodic") {
        entry.process = ArrivalProcess::Periodic;
      } else if (process == "poisson") {
        entry.process = ArrivalProcess::Poisson;
      } else {
        throw SimError(ErrorCode::ParseError, "unknown arrival process '" + process + "'");
      }
      entry.seed = s.at("seed").get<std::uint64_t>();
      spec.schedule.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SimError(ErrorCode::ParseError, std::string("workload spec: ") + e.what());
  }
  return spec;
}

}  // namespace detail

inline WorkloadSpec parse_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SimError(ErrorCode::ParseError, std::string("workload spec: ") + e.what());
  }
  WorkloadSpec spec = detail::spec_from_json(j);
  validate_spec(spec);
  return spec;
}

inline WorkloadSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SimError(ErrorCode::ParseError, "cannot open workload spec '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_spec(text);
}

inline std::string spec_to_text(const WorkloadSpec& spec) {
  return detail::spec_to_json(spec).dump(2) + "\n";
}

inline void save_spec(const WorkloadSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw SimError(ErrorCode::ParseError, "cannot write workload spec '" + path + "'");
  }
  out << spec_to_text(spec);
}

// ---------------------------------------------------------------------------
// Built-in application templates. The DAG shapes and execution tables are
// repository fixtures: RC/TM are low-latency, PD/TX high-latency, and every
// FFT-type node runs 5-20x faster on the FFT accelerator than on a CPU core.
// PE layout: 4x "A53" CPU cores (0-3) followed by one "FFT" accelerator (4).

namespace detail {

constexpr std::uint64_t kUs = 1000;  // ns

// exec table helper: same time on all four CPU cores, explicit accel time.
inline std::vector<std::uint64_t> cpu_fft(std::uint64_t cpu_us, std::uint64_t fft_us) {
  std::uint64_t c = cpu_us * kUs;
  return {c, c, c, c, fft_us * kUs};
}

inline std::vector<std::uint64_t> cpu_only(std::uint64_t cpu_us) {
  std::uint64_t c = cpu_us * kUs;
  return {c, c, c, c, kUnsupported};
}

}  // namespace detail

inline std::vector<PeDescriptor> builtin_pes() {
  return {{0, "A53-0"}, {1, "A53-1"}, {2, "A53-2"}, {3, "A53-3"}, {4, "FFT"}};
}

// Radar Correlator: two parallel FFTs, pointwise multiply, inverse FFT.
inline AppDag builtin_rc() {
  using namespace detail;
  AppDag dag;
  dag.template_name = "RC";
  dag.nodes = {
      {0, cpu_fft(8, 64)},   // frame prep
      {1, cpu_fft(20, 2)},   // FFT (reference)
      {2, cpu_fft(20, 2)},   // FFT (received)
      {3, cpu_fft(6, 48)},   // complex multiply
      {4, cpu_fft(20, 2)},   // inverse FFT
      {5, cpu_fft(4, 32)},   // peak search / output
  };
  dag.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}};
  return dag;
}

// Temporal Interference Mitigation: filter branch joined with an FFT branch.
inline AppDag builtin_tm() {
  using namespace detail;
  AppDag dag;
  dag.template_name = "TM";
  dag.nodes = {
      {0, cpu_fft(10, 80)},  // frame prep
      {1, cpu_fft(24, 3)},   // FFT
      {2, cpu_fft(12, 96)},  // interference estimate
      {3, cpu_fft(24, 3)},   // FFT
      {4, cpu_fft(8, 64)},   // spectral subtraction
      {5, cpu_fft(24, 3)},   // inverse FFT
      {6, cpu_fft(6, 48)},   // output
  };
  dag.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
  return dag;
}

// Pulse Doppler: four range-FFT channels, join, doppler FFT, detection.
inline AppDag builtin_pd() {
  using namespace detail;
  AppDag dag;
  dag.template_name = "PD";
  dag.nodes = {
      {0, cpu_only(30)},    // frame ingest
      {1, cpu_fft(60, 5)},  // range FFT ch0
      {2, cpu_fft(60, 5)},  // range FFT ch1
      {3, cpu_fft(60, 5)},  // range FFT ch2
      {4, cpu_fft(60, 5)},  // range FFT ch3
      {5, cpu_only(40)},    // matched filter ch0
      {6, cpu_only(40)},    // matched filter ch1
      {7, cpu_only(40)},    // matched filter ch2
      {8, cpu_only(40)},    // matched filter ch3
      {9, cpu_only(50)},    // corner turn / join
      {10, cpu_fft(60, 5)}, // doppler FFT
      {11, cpu_fft(60, 5)}, // inverse FFT
      {12, cpu_only(35)},   // CFAR detection
      {13, cpu_only(20)},   // output
  };
  dag.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {2, 6}, {3, 7}, {4, 8},
               {5, 9}, {6, 9}, {7, 9}, {8, 9}, {9, 10}, {10, 11}, {11, 12}, {12, 13}};
  return dag;
}

// WiFi TX: scrambler/encoder chain, dual IFFT, cyclic prefix, upsample.
inline AppDag builtin_tx() {
  using namespace detail;
  AppDag dag;
  dag.template_name = "TX";
  dag.nodes = {
      {0, cpu_only(25)},    // scrambler
      {1, cpu_only(30)},    // convolutional encoder
      {2, cpu_only(20)},    // interleaver
      {3, cpu_only(25)},    // QAM mapper
      {4, cpu_fft(50, 4)},  // IFFT (even symbols)
      {5, cpu_fft(50, 4)},  // IFFT (odd symbols)
      {6, cpu_only(15)},    // cyclic prefix
      {7, cpu_only(15)},    // preamble
      {8, cpu_only(35)},    // upsample / mix
      {9, cpu_only(20)},    // output
  };
  dag.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 6}, {5, 6},
               {0, 7}, {7, 8}, {6, 8}, {8, 9}};
  return dag;
}

inline std::vector<AppDag> builtin_templates() {
  return {builtin_rc(), builtin_tm(), builtin_pd(), builtin_tx()};
}

// Low-latency workload: twenty RC and twenty TM frames.
inline WorkloadSpec builtin_low_workload() {
  WorkloadSpec spec;
  spec.pes = builtin_pes();
  spec.templates = {builtin_rc(), builtin_tm()};
  spec.frame_size_kb = {{"RC", 1280.0}, {"TM", 1280.0}};
  spec.schedule = {
      {"RC", 20, 1000.0, ArrivalProcess::Periodic, 11},
      {"TM", 20, 1000.0, ArrivalProcess::Periodic, 12},
  };
  validate_spec(spec);
  return spec;
}

// High-latency workload: ten PD and ten TX instances.
inline WorkloadSpec builtin_high_workload() {
  WorkloadSpec spec;
  spec.pes = builtin_pes();
  spec.templates = {builtin_pd(), builtin_tx()};
  spec.frame_size_kb = {{"PD", 1037.0}, {"TX", 1037.0}};
  spec.schedule = {
      {"PD", 10, 2000.0, ArrivalProcess::Poisson, 21},
      {"TX", 10, 2000.0, ArrivalProcess::Poisson, 22},
  };
  validate_spec(spec);
  return spec;
}

// The 29-point injection-rate fixture: log-spaced total frame rates spanning
// under- to over-subscription for the built-in high workload.
inline std::vector<double> paper29_rates() {
  std::vector<double> rates;
  rates.reserve(29);
  const double lo = 500.0;
  const double hi = 100000.0;
  for (int i = 0; i < 29; ++i) {
    double f = static_cast<double>(i) / 28.0;
    rates.push_back(lo * std::pow(hi / lo, f));
  }
  return rates;
}

}  // namespace heftsim
