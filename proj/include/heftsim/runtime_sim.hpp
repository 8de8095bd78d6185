#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "heftsim/core.hpp"
#include "heftsim/error.hpp"
#include "heftsim/hw_sched.hpp"
#include "heftsim/sw_sched.hpp"
#include "heftsim/workload.hpp"

namespace heftsim {

// Deterministic discrete-event engine: arrivals, dependency tracking,
// batched mapping events with an analytic overhead charge, PE execution.

enum class SchedulerKind { Software, Hardware, Fifo };

inline const char* scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Software: return "sw";
    case SchedulerKind::Hardware: return "hw";
    case SchedulerKind::Fifo: return "fifo";
  }
  return "?";
}

inline std::optional<SchedulerKind> scheduler_from_name(const std::string& name) {
  if (name == "sw") return SchedulerKind::Software;
  if (name == "hw") return SchedulerKind::Hardware;
  if (name == "fifo") return SchedulerKind::Fifo;
  return std::nullopt;
}

struct OverheadModel {
  SwCoeffs sw;  // software/fifo engines: a + b*n + c*n*log2(n) ns
  // Hardware engine: DMA transfer plus the modeled scheduler cycles.
  std::uint64_t transfer_fixed_ns = 20000;
  std::uint64_t transfer_per_task_ns = 200;
  std::uint64_t result_fixed_ns = 1000;
};

// Analytic worst-case hardware event cost for a queue of size n.
inline std::uint64_t hw_overhead_analytic(std::uint64_t n, const OverheadModel& model,
                                          const HwConfig& config, bool include_transfer) {
  std::uint64_t cycles = 3 * n + 3;
  std::uint64_t compute = (cycles * config.clock_period_ps + 500) / 1000;
  if (!include_transfer) return compute;
  return model.transfer_fixed_ns + model.transfer_per_task_ns * n +
         model.result_fixed_ns + compute;
}

struct InstanceMetrics {
  std::uint64_t instance_id = 0;
  std::string template_name;
  SimTime arrival_ns = 0;
  std::uint64_t cumulative_exec_ns = 0;
  std::uint64_t app_exec_ns = 0;
};

struct EventMetrics {
  SimTime event_time_ns = 0;
  std::uint64_t queue_size = 0;
  std::uint64_t overhead_ns = 0;
};

struct TaskLogEntry {
  std::uint64_t instance_id = 0;
  int node = 0;
  int pe = 0;
  SimTime start = 0;
  SimTime finish = 0;
  SimTime mapped_at = 0;  // end of the mapping event that assigned this task
  std::uint64_t exec_ns = 0;
};

struct MetricsReport {
  std::vector<InstanceMetrics> instances;
  std::vector<EventMetrics> events;
  std::vector<TaskLogEntry> task_log;
  std::uint64_t saturation_events = 0;
  SimTime first_arrival = 0;
  SimTime last_completion = 0;
  double achieved_fps = 0.0;
};

// Sum of a completed instance's task execution times, overlap and overhead
// excluded.
inline std::uint64_t cumulative_exec_time(const AppInstance& instance) {
  if (!instance.complete()) {
    throw SimError(ErrorCode::Incomplete, "instance has unfinished tasks");
  }
  std::uint64_t total = 0;
  for (const NodeProgress& p : instance.progress) {
    total = checked_add(total, p.finish - p.start);
  }
  return total;
}

// Last task finish minus instance arrival, scheduling overhead included.
inline std::uint64_t app_exec_time(const AppInstance& instance) {
  if (!instance.complete()) {
    throw SimError(ErrorCode::Incomplete, "instance has unfinished tasks");
  }
  SimTime last = 0;
  for (const NodeProgress& p : instance.progress) last = std::max(last, p.finish);
  return last - instance.arrival_time;
}

inline double achieved_frame_rate(const MetricsReport& report) {
  if (report.instances.empty()) {
    throw SimError(ErrorCode::NoCompletions, "no completed instances");
  }
  SimTime span = report.last_completion - report.first_arrival;
  if (span == 0) span = 1;
  return static_cast<double>(report.instances.size()) * 1e9 / static_cast<double>(span);
}

inline const std::vector<EventMetrics>& scheduling_overhead_series(const MetricsReport& report) {
  return report.events;
}

struct SimOptions {
  bool quantize_sw = false;      // run the software engine on quantized units
  std::ostream* event_trace = nullptr;
};

namespace detail {

struct SimEvent {
  SimTime time = 0;
  std::uint64_t seq = 0;
  enum class Kind { Arrival, TaskFinish, MappingDone } kind = Kind::Arrival;
  std::uint32_t instance = 0;
  int node = 0;

  bool operator>(const SimEvent& other) const {
    if (time != other.time) return time > other.time;
    return seq > other.seq;
  }
};

}  // namespace detail

class Simulator {
 public:
  Simulator(const WorkloadSpec& spec, SchedulerKind kind, HwConfig hw_config,
            OverheadModel overhead, std::uint64_t seed, SimOptions options = {})
      : spec_(spec),
        kind_(kind),
        hw_config_(hw_config),
        overhead_(overhead),
        options_(options) {
    validate_spec(spec_);
    hw_config_.pe_count = static_cast<int>(spec_.pes.size());
    hw_config_.validate();
    if (kind_ == SchedulerKind::Hardware) hw_.emplace(hw_config_);
    pe_busy_.assign(spec_.pes.size(), 0);
    std::uint64_t entry_index = 0;
    for (const ScheduleEntry& entry : spec_.schedule) {
      auto dag = std::make_shared<AppDag>(*spec_.find_template(entry.template_name));
      validate_dag(*dag);
      std::uint64_t mix = seed * 0x2545f4914f6cdd1dull + entry_index++;
      for (SimTime arrival : generate_arrivals(entry, mix)) {
        auto id = static_cast<std::uint64_t>(instances_.size());
        instances_.push_back(AppInstance::make(id, dag, arrival));
        push_event({arrival, next_seq_++, detail::SimEvent::Kind::Arrival,
                    static_cast<std::uint32_t>(id), 0});
      }
    }
  }

  MetricsReport run() {
    while (!events_.empty()) {
      detail::SimEvent ev = events_.top();
      events_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case detail::SimEvent::Kind::Arrival:
          handle_arrival(ev.instance);
          break;
        case detail::SimEvent::Kind::TaskFinish:
          handle_finish(ev.instance, ev.node);
          break;
        case detail::SimEvent::Kind::MappingDone:
          handle_mapping_done();
          break;
      }
      maybe_start_mapping();
    }
    return finalize();
  }

  const std::vector<AppInstance>& instances() const { return instances_; }

 private:
  struct ReadyTask {
    std::uint32_t instance = 0;
    int node = 0;
    std::uint64_t tid = 0;
  };

  void push_event(detail::SimEvent ev) { events_.push(ev); }

  void handle_arrival(std::uint32_t idx) {
    AppInstance& inst = instances_[idx];
    for (int node : ready_nodes(inst)) mark_ready(idx, node);
  }

  void mark_ready(std::uint32_t idx, int node) {
    AppInstance& inst = instances_[idx];
    inst.progress[static_cast<size_t>(node)].state = NodeState::Ready;
    ready_.push_back({idx, node, next_tid_++});
  }

  void handle_finish(std::uint32_t idx, int node) {
    AppInstance& inst = instances_[idx];
    inst.progress[static_cast<size_t>(node)].state = NodeState::Done;
    for (int succ : inst.dag->successors(node)) {
      if (inst.progress[static_cast<size_t>(succ)].state != NodeState::Waiting) continue;
      bool ready = true;
      for (int pred : inst.dag->predecessors(succ)) {
        if (inst.progress[static_cast<size_t>(pred)].state != NodeState::Done) {
          ready = false;
          break;
        }
      }
      if (ready) mark_ready(idx, succ);
    }
  }

  void maybe_start_mapping() {
    if (mapping_in_progress_ || ready_.empty()) return;
    batch_ = std::move(ready_);
    ready_.clear();
    std::uint64_t overhead = 0;
    pending_decisions_ = schedule_batch(batch_, &overhead);
    mapping_end_ = checked_add(now_, overhead);
    mapping_in_progress_ = true;
    report_.events.push_back({now_, batch_.size(), overhead});
    push_event({mapping_end_, next_seq_++, detail::SimEvent::Kind::MappingDone, 0, 0});
  }

  std::vector<MappingDecision> schedule_batch(const std::vector<ReadyTask>& batch,
                                              std::uint64_t* overhead_out) {
    std::vector<TaskRecord> records;
    records.reserve(batch.size());
    for (const ReadyTask& rt : batch) {
      const DagNode& node = instances_[rt.instance].dag->nodes[static_cast<size_t>(rt.node)];
      records.push_back(TaskRecord::make(rt.tid, node.exec));
    }
    const size_t p = spec_.pes.size();
    std::vector<std::uint64_t> rel_avail(p, 0);
    for (size_t i = 0; i < p; ++i) {
      rel_avail[i] = pe_busy_[i] > now_ ? pe_busy_[i] - now_ : 0;
    }

    if (kind_ == SchedulerKind::Hardware) {
      return schedule_batch_hw(records, rel_avail, overhead_out);
    }

    SchedulerInput input;
    if (options_.quantize_sw) {
      for (TaskRecord& rec : records) rec = quantize_record(rec, hw_config_);
      input.avail.reserve(p);
      for (std::uint64_t a : rel_avail) input.avail.push_back(quantize_avail(a, hw_config_));
      input.finish_cap = hw_config_.accum_max();
    } else {
      input.avail = rel_avail;
    }
    input.ready = std::move(records);
    *overhead_out = sw_overhead_model(input.ready.size(), overhead_.sw);
    ScheduleResult result =
        kind_ == SchedulerKind::Fifo ? fifo_schedule(input) : heft_rt_schedule(input);
    return std::move(result.decisions);
  }

  std::vector<MappingDecision> schedule_batch_hw(const std::vector<TaskRecord>& records,
                                                 const std::vector<std::uint64_t>& rel_avail,
                                                 std::uint64_t* overhead_out) {
    // Ready queues deeper than D are split into consecutive events of <= D
    // tasks, each charged its own transfer.
    std::vector<MappingDecision> decisions;
    decisions.reserve(records.size());
    std::vector<std::uint64_t> avail_units;
    avail_units.reserve(rel_avail.size());
    bool sat = false;
    for (std::uint64_t a : rel_avail) {
      avail_units.push_back(quantize_avail(a, hw_config_, &sat));
      if (sat) ++report_.saturation_events;
    }
    std::uint64_t overhead = 0;
    const size_t depth = static_cast<size_t>(hw_config_.queue_depth);
    for (size_t offset = 0; offset < records.size(); offset += depth) {
      const size_t count = std::min(depth, records.size() - offset);
      std::uint64_t before_sat = hw_->saturation_events();
      auto [batch_decisions, stats] = hw_->run_event(
          avail_units, std::span<const TaskRecord>(records.data() + offset, count));
      report_.saturation_events += hw_->saturation_events() - before_sat;
      avail_units = hw_->avail();
      for (MappingDecision& d : batch_decisions) decisions.push_back(d);
      std::uint64_t compute = (stats.total_cycles * hw_config_.clock_period_ps + 500) / 1000;
      overhead += overhead_.transfer_fixed_ns + overhead_.transfer_per_task_ns * count +
                  overhead_.result_fixed_ns + compute;
    }
    *overhead_out = overhead;
    return decisions;
  }

  void handle_mapping_done() {
    // Assignments take effect now: append each task to its PE in decision
    // order; the PE runs them back to back.
    std::map<std::uint64_t, const ReadyTask*> by_tid;
    for (const ReadyTask& rt : batch_) by_tid[rt.tid] = &rt;
    for (const MappingDecision& d : pending_decisions_) {
      const ReadyTask& rt = *by_tid.at(d.tid);
      AppInstance& inst = instances_[rt.instance];
      NodeProgress& prog = inst.progress[static_cast<size_t>(rt.node)];
      std::uint64_t exec =
          inst.dag->nodes[static_cast<size_t>(rt.node)].exec[static_cast<size_t>(d.pe_id)];
      SimTime start = std::max(pe_busy_[static_cast<size_t>(d.pe_id)], now_);
      SimTime finish = checked_add(start, exec);
      pe_busy_[static_cast<size_t>(d.pe_id)] = finish;
      prog.state = NodeState::Running;
      prog.pe_id = d.pe_id;
      prog.start = start;
      prog.finish = finish;
      report_.task_log.push_back({inst.instance_id, rt.node, d.pe_id, start, finish, now_, exec});
      push_event({finish, next_seq_++, detail::SimEvent::Kind::TaskFinish, rt.instance, rt.node});
    }
    if (options_.event_trace) {
      const EventMetrics& em = report_.events.back();
      *options_.event_trace << em.event_time_ns << ',' << em.queue_size << ','
                            << em.overhead_ns;
      for (const MappingDecision& d : pending_decisions_) {
        *options_.event_trace << ',' << d.tid << ':' << d.pe_id;
      }
      *options_.event_trace << '\n';
    }
    batch_.clear();
    pending_decisions_.clear();
    mapping_in_progress_ = false;
  }

  MetricsReport finalize() {
    report_.first_arrival = instances_.empty() ? 0 : instances_.front().arrival_time;
    report_.last_completion = 0;
    for (const AppInstance& inst : instances_) {
      if (!inst.complete()) {
        throw SimError(ErrorCode::Incomplete, "simulation ended with unfinished instances");
      }
      report_.first_arrival = std::min(report_.first_arrival, inst.arrival_time);
      InstanceMetrics im;
      im.instance_id = inst.instance_id;
      im.template_name = inst.dag->template_name;
      im.arrival_ns = inst.arrival_time;
      im.cumulative_exec_ns = cumulative_exec_time(inst);
      im.app_exec_ns = app_exec_time(inst);
      report_.last_completion =
          std::max(report_.last_completion, inst.arrival_time + im.app_exec_ns);
      report_.instances.push_back(std::move(im));
    }
    report_.achieved_fps = achieved_frame_rate(report_);
    return std::move(report_);
  }

  WorkloadSpec spec_;
  SchedulerKind kind_;
  HwConfig hw_config_;
  OverheadModel overhead_;
  SimOptions options_;

  std::vector<AppInstance> instances_;
  std::priority_queue<detail::SimEvent, std::vector<detail::SimEvent>,
                      std::greater<detail::SimEvent>>
      events_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_tid_ = 0;
  SimTime now_ = 0;
  std::vector<SimTime> pe_busy_;

  std::vector<ReadyTask> ready_;
  std::vector<ReadyTask> batch_;
  std::vector<MappingDecision> pending_decisions_;
  bool mapping_in_progress_ = false;
  SimTime mapping_end_ = 0;

  std::optional<HwScheduler> hw_;
  MetricsReport report_;
};

inline MetricsReport simulate(const WorkloadSpec& spec, SchedulerKind kind,
                              const HwConfig& hw_config, const OverheadModel& overhead,
                              std::uint64_t seed, const SimOptions& options = {}) {
  Simulator sim(spec, kind, hw_config, overhead, seed, options);
  return sim.run();
}

}  // namespace heftsim
