#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "heftsim/analysis.hpp"
#include "heftsim/core.hpp"
#include "heftsim/hw_sched.hpp"
#include "heftsim/runtime_sim.hpp"
#include "heftsim/sw_sched.hpp"
#include "heftsim/workload.hpp"

namespace heftsim {

// CSV emission and the drivers behind the CLI subcommands. All output is
// deterministic for a fixed (spec, seed, config).

inline std::string instances_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "instance_id,template,arrival_ns,cumulative_exec_ns,app_exec_ns\n";
  for (const InstanceMetrics& im : report.instances) {
    out << im.instance_id << ',' << im.template_name << ',' << im.arrival_ns << ','
        << im.cumulative_exec_ns << ',' << im.app_exec_ns << '\n';
  }
  return out.str();
}

inline std::string events_csv(const MetricsReport& report, SchedulerKind kind) {
  std::ostringstream out;
  out << "event_time_ns,n,overhead_ns,scheduler\n";
  for (const EventMetrics& em : report.events) {
    out << em.event_time_ns << ',' << em.queue_size << ',' << em.overhead_ns << ','
        << scheduler_name(kind) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
  double target_fps = 0.0;
  int repeat = 0;  // -1 marks the per-rate mean row
  double achieved_fps = 0.0;
  double app_exec_ns_mean = 0.0;
  double overhead_ns_mean = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;      // per (rate, repetition), then summary rows
  std::vector<SweepRow> summary;   // one mean row per rate
};

inline WorkloadSpec spec_at_rate(WorkloadSpec spec, double total_fps) {
  int total = spec.total_instances();
  for (ScheduleEntry& entry : spec.schedule) {
    entry.target_fps = total_fps * static_cast<double>(entry.count) / static_cast<double>(total);
  }
  return spec;
}

inline SweepResult run_sweep(const WorkloadSpec& spec, SchedulerKind kind,
                             const std::vector<double>& rates, int repeats,
                             const HwConfig& hw_config, const OverheadModel& overhead,
                             std::uint64_t seed) {
  if (rates.empty() || repeats < 1) {
    throw SimError(ErrorCode::ValidationError, "sweep needs at least one rate and one repeat");
  }
  SweepResult result;
  std::vector<double> sorted_rates = rates;
  std::sort(sorted_rates.begin(), sorted_rates.end());
  for (size_t ri = 0; ri < sorted_rates.size(); ++ri) {
    double rate = sorted_rates[ri];
    WorkloadSpec rated = spec_at_rate(spec, rate);
    SweepRow mean{rate, -1, 0.0, 0.0, 0.0};
    for (int rep = 0; rep < repeats; ++rep) {
      // Common random numbers across rates: the same repetition draws the
      // same arrival randomness at every rate, so adjacent-rate comparisons
      // are paired and the sweep curve is smooth.
      std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(rep);
      MetricsReport report = simulate(rated, kind, hw_config, overhead, rep_seed);
      SweepRow row{rate, rep, report.achieved_fps, 0.0, 0.0};
      for (const InstanceMetrics& im : report.instances) {
        row.app_exec_ns_mean += static_cast<double>(im.app_exec_ns);
      }
      row.app_exec_ns_mean /= static_cast<double>(report.instances.size());
      for (const EventMetrics& em : report.events) {
        row.overhead_ns_mean += static_cast<double>(em.overhead_ns);
      }
      row.overhead_ns_mean /= static_cast<double>(report.events.size());
      mean.achieved_fps += row.achieved_fps;
      mean.app_exec_ns_mean += row.app_exec_ns_mean;
      mean.overhead_ns_mean += row.overhead_ns_mean;
      result.rows.push_back(row);
    }
    mean.achieved_fps /= repeats;
    mean.app_exec_ns_mean /= repeats;
    mean.overhead_ns_mean /= repeats;
    result.summary.push_back(mean);
  }
  return result;
}

inline std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "target_fps,repeat,achieved_fps,app_exec_ns_mean,overhead_ns_mean\n";
  auto emit = [&out](const SweepRow& row) {
    out << row.target_fps << ',';
    if (row.repeat < 0) {
      out << "mean";
    } else {
      out << row.repeat;
    }
    out << ',' << row.achieved_fps << ',' << row.app_exec_ns_mean << ','
        << row.overhead_ns_mean << '\n';
  };
  for (const SweepRow& row : result.rows) emit(row);
  for (const SweepRow& row : result.summary) emit(row);
  return out.str();
}

// ---------------------------------------------------------------------------
// verify: random mapping events through both engines

struct VerifyConfig {
  int trials = 1000;
  int n_min = 1;
  int n_max = 512;
  std::vector<int> pe_counts = {2, 4, 8, 16};
  std::uint64_t seed = 1;
  HwConfig hw;  // queue_depth bounds n_max; pe_count is overridden per trial
};

struct VerifyReport {
  int trials = 0;
  int decision_mismatches = 0;
  int avail_mismatches = 0;
  int cycle_bound_violations = 0;
  int turnaround_violations = 0;
  std::uint64_t max_total_cycles = 0;

  bool ok() const {
    return decision_mismatches == 0 && avail_mismatches == 0 &&
           cycle_bound_violations == 0 && turnaround_violations == 0;
  }
};

namespace detail {

inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

// Random mapping event: exec values span several orders of magnitude with a
// duplicate-heavy avg distribution; a PE is occasionally unsupported.
inline std::vector<TaskRecord> random_tasks(std::mt19937_64& rng, int n, int p,
                                            const HwConfig& config,
                                            bool allow_unsupported = true) {
  std::vector<TaskRecord> tasks;
  tasks.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> exec(static_cast<size_t>(p));
    int supported = 0;
    for (int pe = 0; pe < p; ++pe) {
      bool drop = allow_unsupported && rng_below(rng, 10) == 0;
      if (drop && !(pe == p - 1 && supported == 0)) {
        exec[static_cast<size_t>(pe)] = kUnsupported;
        continue;
      }
      // Coarse magnitudes make duplicate quantized values common.
      std::uint64_t units = 1 + rng_below(rng, 64);
      exec[static_cast<size_t>(pe)] = units * config.time_unit_ns;
      ++supported;
    }
    tasks.push_back(TaskRecord::make(static_cast<std::uint64_t>(i), std::move(exec)));
  }
  return tasks;
}

inline std::vector<std::uint64_t> random_avail(std::mt19937_64& rng, int p,
                                               const HwConfig& config) {
  std::vector<std::uint64_t> avail(static_cast<size_t>(p));
  for (auto& a : avail) a = rng_below(rng, 4 * config.avg_max());
  return avail;
}

}  // namespace detail

inline VerifyReport run_verify(const VerifyConfig& cfg) {
  if (cfg.n_max > cfg.hw.queue_depth || cfg.n_min < 1 || cfg.n_min > cfg.n_max) {
    throw SimError(ErrorCode::BadConfig, "verify size range must lie within [1, D]");
  }
  VerifyReport report;
  std::mt19937_64 rng(cfg.seed);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    int p = cfg.pe_counts[static_cast<size_t>(trial) % cfg.pe_counts.size()];
    int n = cfg.n_min + static_cast<int>(detail::rng_below(
                            rng, static_cast<std::uint64_t>(cfg.n_max - cfg.n_min + 1)));
    HwConfig hw = cfg.hw;
    hw.pe_count = p;
    std::vector<TaskRecord> tasks = detail::random_tasks(rng, n, p, hw);
    std::vector<std::uint64_t> avail = detail::random_avail(rng, p, hw);

    HwScheduler machine(hw);
    auto [hw_decisions, stats] = machine.run_event(avail, tasks);

    SchedulerInput input;
    input.finish_cap = hw.accum_max();
    input.avail.reserve(avail.size());
    for (std::uint64_t a : avail) input.avail.push_back(std::min(a, hw.accum_max()));
    input.ready.reserve(tasks.size());
    for (const TaskRecord& rec : tasks) input.ready.push_back(quantize_record(rec, hw));
    ScheduleResult sw = heft_rt_schedule(input);

    ++report.trials;
    if (hw_decisions != sw.decisions) ++report.decision_mismatches;
    if (machine.avail() != sw.final_avail) ++report.avail_mismatches;
    std::uint64_t un = static_cast<std::uint64_t>(n);
    if (stats.total_cycles > 3 * un + 3) ++report.cycle_bound_violations;
    if (stats.first_decision_cycle > 2 * un + 3) ++report.turnaround_violations;
    report.max_total_cycles = std::max(report.max_total_cycles, stats.total_cycles);
  }
  return report;
}

inline std::string verify_text(const VerifyReport& report) {
  std::ostringstream out;
  out << "trials: " << report.trials << '\n'
      << "decision_mismatches: " << report.decision_mismatches << '\n'
      << "avail_mismatches: " << report.avail_mismatches << '\n'
      << "cycle_bound_violations: " << report.cycle_bound_violations << '\n'
      << "turnaround_violations: " << report.turnaround_violations << '\n'
      << "max_total_cycles: " << report.max_total_cycles << '\n'
      << "result: " << (report.ok() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// cycles: per-queue-size cycle statistics and overhead table

// Tasks whose avgs ascend in insertion order: the sorter's worst case.
inline std::vector<TaskRecord> adversarial_tasks(int n, int p, const HwConfig& config) {
  std::vector<TaskRecord> tasks;
  tasks.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> exec(static_cast<size_t>(p),
                                    static_cast<std::uint64_t>(i + 1) * config.time_unit_ns);
    tasks.push_back(TaskRecord::make(static_cast<std::uint64_t>(i), std::move(exec)));
  }
  return tasks;
}

struct CycleRow {
  std::uint64_t n = 0;
  CycleStats stats;
  double hw_latency_ns = 0.0;       // compute only
  double hw_overhead_ns = 0.0;      // with transfer
  double sw_overhead_ns = 0.0;
};

inline std::vector<CycleRow> run_cycles(const std::vector<std::uint64_t>& sizes,
                                        const HwConfig& config,
                                        const OverheadModel& overhead) {
  std::vector<CycleRow> rows;
  rows.reserve(sizes.size());
  for (std::uint64_t n : sizes) {
    if (n < 1 || n > static_cast<std::uint64_t>(config.queue_depth)) {
      throw SimError(ErrorCode::BadConfig, "cycles table size must lie within [1, D]");
    }
    HwScheduler machine(config);
    std::vector<std::uint64_t> avail(static_cast<size_t>(config.pe_count), 0);
    auto tasks = adversarial_tasks(static_cast<int>(n), config.pe_count, config);
    auto [decisions, stats] = machine.run_event(avail, tasks);
    CycleRow row;
    row.n = n;
    row.stats = stats;
    row.hw_latency_ns = event_latency_ns(stats, config);
    row.hw_overhead_ns =
        static_cast<double>(overhead.transfer_fixed_ns + overhead.transfer_per_task_ns * n +
                            overhead.result_fixed_ns) +
        row.hw_latency_ns;
    row.sw_overhead_ns = static_cast<double>(sw_overhead_model(n, overhead.sw));
    rows.push_back(row);
  }
  return rows;
}

inline std::string cycles_csv(const std::vector<CycleRow>& rows) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed;
  out << "n,fill_cycles,sort_cycles,drain_cycles,total_cycles,first_decision_cycle,"
         "hw_latency_ns,hw_overhead_ns,sw_overhead_ns\n";
  for (const CycleRow& row : rows) {
    out << row.n << ',' << row.stats.fill_cycles << ',' << row.stats.sort_cycles << ','
        << row.stats.drain_cycles << ',' << row.stats.total_cycles << ','
        << row.stats.first_decision_cycle << ',' << row.hw_latency_ns << ','
        << row.hw_overhead_ns << ',' << row.sw_overhead_ns << '\n';
  }
  return out.str();
}

// Overhead series over a queue-size grid, ready for crossover detection.
inline std::pair<std::vector<OverheadPoint>, std::vector<OverheadPoint>> overhead_series(
    const std::vector<std::uint64_t>& sizes, const HwConfig& config,
    const OverheadModel& overhead) {
  std::vector<OverheadPoint> sw_series;
  std::vector<OverheadPoint> hw_series;
  for (std::uint64_t n : sizes) {
    sw_series.push_back({n, static_cast<double>(sw_overhead_model(n, overhead.sw))});
    hw_series.push_back(
        {n, static_cast<double>(hw_overhead_analytic(n, overhead, config, true))});
  }
  return {sw_series, hw_series};
}

}  // namespace heftsim
