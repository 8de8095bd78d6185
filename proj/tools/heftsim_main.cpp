// Command-line front end: single runs, injection-rate sweeps,
// hardware/software equivalence verification, and cycle-statistics tables.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heftsim/report.hpp"

namespace {

using namespace heftsim;

struct CommonOpts {
  std::uint64_t seed = 1;
  int queue_depth = 512;
  int avg_width = 16;
  std::uint64_t clock_period_ps = 3048;
  std::uint64_t time_unit_ns = 1000;
  double sw_a = 2000.0;
  double sw_b = 2600.0;
  double sw_c = 600.0;
  std::uint64_t transfer_fixed_ns = 20000;
  std::uint64_t transfer_per_task_ns = 200;
  std::uint64_t result_fixed_ns = 1000;
  std::string output;

  HwConfig hw_config() const {
    HwConfig config;
    config.queue_depth = queue_depth;
    config.avg_width = avg_width;
    config.clock_period_ps = clock_period_ps;
    config.time_unit_ns = time_unit_ns;
    return config;
  }

  OverheadModel overhead_model() const {
    OverheadModel model;
    model.sw = {sw_a, sw_b, sw_c};
    model.transfer_fixed_ns = transfer_fixed_ns;
    model.transfer_per_task_ns = transfer_per_task_ns;
    model.result_fixed_ns = result_fixed_ns;
    return model;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("-D,--queue-depth", opts.queue_depth, "priority queue depth D");
  cmd->add_option("-W,--avg-width", opts.avg_width, "bit width of quantized times");
  cmd->add_option("--clock-ps", opts.clock_period_ps, "scheduler clock period, ps");
  cmd->add_option("--time-unit-ns", opts.time_unit_ns, "ns per scheduler time unit");
  cmd->add_option("--sw-a", opts.sw_a, "software overhead fixed term, ns");
  cmd->add_option("--sw-b", opts.sw_b, "software overhead per-task term, ns");
  cmd->add_option("--sw-c", opts.sw_c, "software overhead n*log2(n) term, ns");
  cmd->add_option("--transfer-fixed-ns", opts.transfer_fixed_ns, "hw transfer fixed cost, ns");
  cmd->add_option("--transfer-per-task-ns", opts.transfer_per_task_ns,
                  "hw transfer per-task cost, ns");
  cmd->add_option("--result-fixed-ns", opts.result_fixed_ns, "hw result readback cost, ns");
  cmd->add_option("-o,--output", opts.output, "write CSV here instead of stdout");
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output);
  if (!out) throw SimError(ErrorCode::ParseError, "cannot open output '" + opts.output + "'");
  out << text;
}

WorkloadSpec resolve_spec(const std::string& path) {
  if (path == "builtin:low") return builtin_low_workload();
  if (path == "builtin:high") return builtin_high_workload();
  return load_spec(path);
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SchedulerKind resolve_scheduler(const std::string& name) {
  auto kind = scheduler_from_name(name);
  if (!kind) {
    throw UsageError("unknown scheduler '" + name + "' (expected sw, hw, or fifo)");
  }
  return *kind;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of a heterogeneous SoC runtime with a "
               "software HEFT_RT scheduler and a cycle-accurate model of its "
               "hardware overlay"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "simulate one workload, emit per-instance CSV");
  CommonOpts run_opts;
  std::string run_spec, run_sched = "sw", run_events, run_trace;
  run->add_option("spec", run_spec, "workload spec path, or builtin:low / builtin:high")
      ->required();
  run->add_option("-s,--scheduler", run_sched, "scheduler: sw, hw, or fifo");
  run->add_option("--events", run_events, "also write the per-event overhead CSV here");
  run->add_option("--trace", run_trace, "write the per-event decision trace here");
  add_common(run, run_opts);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "sweep injection rates, emit sweep CSV");
  CommonOpts sweep_opts;
  std::string sweep_spec, sweep_sched = "sw", rates_arg = "paper29";
  int repeats = 25;
  sweep->add_option("spec", sweep_spec, "workload spec path, or builtin:low / builtin:high")
      ->required();
  sweep->add_option("-s,--scheduler", sweep_sched, "scheduler: sw, hw, or fifo");
  sweep->add_option("-r,--rates", rates_arg,
                    "comma-separated frames/s list, or 'paper29' for the 29-rate fixture");
  sweep->add_option("-n,--repeats", repeats, "repetitions per rate");
  add_common(sweep, sweep_opts);

  // verify
  auto* verify = app.add_subcommand(
      "verify", "run random mapping events through both engines, report mismatches");
  CommonOpts verify_opts;
  int trials = 1000, n_min = 1, n_max = 512;
  std::vector<int> pe_counts = {2, 4, 8, 16};
  verify->add_option("-t,--trials", trials, "number of random events");
  verify->add_option("--n-min", n_min, "minimum ready-queue size");
  verify->add_option("--n-max", n_max, "maximum ready-queue size");
  verify->add_option("-P,--pe-counts", pe_counts, "PE counts cycled across trials");
  add_common(verify, verify_opts);

  // cycles
  auto* cycles = app.add_subcommand("cycles",
                                    "cycle statistics and overhead table over queue sizes");
  CommonOpts cycles_opts;
  std::vector<std::uint64_t> sizes;
  cycles->add_option("-n,--sizes", sizes, "queue sizes (default 1..64)");
  add_common(cycles, cycles_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      WorkloadSpec spec = resolve_spec(run_spec);
      SchedulerKind kind = resolve_scheduler(run_sched);
      SimOptions options;
      std::ofstream trace;
      if (!run_trace.empty()) {
        trace.open(run_trace);
        options.event_trace = &trace;
      }
      MetricsReport report =
          simulate(spec, kind, run_opts.hw_config(), run_opts.overhead_model(),
                   run_opts.seed, options);
      emit(run_opts, instances_csv(report));
      if (!run_events.empty()) {
        std::ofstream out(run_events);
        out << events_csv(report, kind);
      }
    } else if (sweep->parsed()) {
      WorkloadSpec spec = resolve_spec(sweep_spec);
      SchedulerKind kind = resolve_scheduler(sweep_sched);
      std::vector<double> rates;
      if (rates_arg == "paper29") {
        rates = paper29_rates();
      } else {
        std::stringstream ss(rates_arg);
        std::string item;
        while (std::getline(ss, item, ',')) rates.push_back(std::stod(item));
      }
      SweepResult result = run_sweep(spec, kind, rates, repeats, sweep_opts.hw_config(),
                                     sweep_opts.overhead_model(), sweep_opts.seed);
      emit(sweep_opts, sweep_csv(result));
    } else if (verify->parsed()) {
      VerifyConfig cfg;
      cfg.trials = trials;
      cfg.n_min = n_min;
      cfg.n_max = n_max;
      cfg.pe_counts = pe_counts;
      cfg.seed = verify_opts.seed;
      cfg.hw = verify_opts.hw_config();
      VerifyReport report = run_verify(cfg);
      emit(verify_opts, verify_text(report));
      if (!report.ok()) return 1;
    } else if (cycles->parsed()) {
      if (sizes.empty()) {
        for (std::uint64_t n = 1; n <= 64; ++n) sizes.push_back(n);
      }
      emit(cycles_opts,
           cycles_csv(run_cycles(sizes, cycles_opts.hw_config(), cycles_opts.overhead_model())));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
