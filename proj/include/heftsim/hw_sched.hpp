#pragma once

#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "heftsim/core.hpp"
#include "heftsim/error.hpp"

namespace heftsim {

// Cycle-accurate behavioral model of the hardware HEFT_RT overlay:
// streaming fill of a shift-register priority queue, odd-even transposition
// sort, and drain with per-cycle earliest-finish-time selection.

struct HwConfig {
  int pe_count = 4;                    // P
  int queue_depth = 512;               // D
  int avg_width = 16;                  // W(Avg_TID), bits
  std::uint64_t clock_period_ps = 3048;
  std::uint64_t time_unit_ns = 1000;   // ns per scheduler time unit

  int qid_width() const {
    return queue_depth <= 1 ? 1 : std::bit_width(static_cast<unsigned>(queue_depth - 1));
  }
  int accum_width() const { return avg_width + 16; }

  std::uint64_t avg_max() const {
    return avg_width >= 64 ? ~0ull : (1ull << avg_width) - 1;
  }
  std::uint64_t accum_max() const {
    return accum_width() >= 64 ? ~0ull : (1ull << accum_width()) - 1;
  }

  void validate() const {
    if (pe_count < 1) throw SimError(ErrorCode::BadConfig, "pe_count must be >= 1");
    if (queue_depth < 1) throw SimError(ErrorCode::BadConfig, "queue_depth must be >= 1");
    if (avg_width < 4 || avg_width > 64) {
      throw SimError(ErrorCode::BadConfig, "avg_width must be in [4, 64]");
    }
    if (clock_period_ps == 0) throw SimError(ErrorCode::BadConfig, "clock_period_ps must be > 0");
    if (time_unit_ns == 0) throw SimError(ErrorCode::BadConfig, "time_unit_ns must be > 0");
  }
};

// Quantize a nanosecond value into W(Avg_TID)-bit scheduler time units.
// Rounds half up, saturates at 2^W - 1; the unsupported sentinel maps to
// exactly 2^W - 1. Returns the value; *saturated reports silent saturation.
inline std::uint64_t quantize(std::uint64_t t_ns, const HwConfig& config,
                              bool* saturated = nullptr) {
  if (saturated) *saturated = false;
  if (t_ns == kUnsupported) return config.avg_max();
  std::uint64_t units = (t_ns + config.time_unit_ns / 2) / config.time_unit_ns;
  if (units > config.avg_max()) {
    if (saturated) *saturated = true;
    return config.avg_max();
  }
  return units;
}

// Quantize an availability time into the wider accumulator range.
inline std::uint64_t quantize_avail(std::uint64_t t_ns, const HwConfig& config,
                                    bool* saturated = nullptr) {
  if (saturated) *saturated = false;
  std::uint64_t units = (t_ns + config.time_unit_ns / 2) / config.time_unit_ns;
  if (units > config.accum_max()) {
    if (saturated) *saturated = true;
    return config.accum_max();
  }
  return units;
}

// A TaskRecord expressed in scheduler time units; the avg is quantized from
// the record's ns average, not recomputed from the quantized exec entries.
inline TaskRecord quantize_record(const TaskRecord& rec, const HwConfig& config) {
  TaskRecord out;
  out.tid = rec.tid;
  out.avg = quantize(rec.avg, config);
  out.exec.reserve(rec.exec.size());
  for (std::uint64_t t : rec.exec) {
    out.exec.push_back(t == kUnsupported ? kUnsupported : quantize(t, config));
  }
  return out;
}

struct QueueCell {
  std::uint32_t qid = 0;
  std::uint64_t avg = 0;  // quantized
};

struct CycleStats {
  std::uint64_t fill_cycles = 0;
  std::uint64_t sort_cycles = 0;
  std::uint64_t drain_cycles = 0;
  std::uint64_t total_cycles = 0;
  std::uint64_t first_decision_cycle = 0;  // 1-based, 0 if no decision yet
};

// Event latency in ns: total cycles at the configured clock period.
inline double event_latency_ns(const CycleStats& stats, const HwConfig& config) {
  return static_cast<double>(stats.total_cycles * config.clock_period_ps) / 1000.0;
}

inline double per_task_latency_ns(const CycleStats& stats, const HwConfig& config,
                                  std::uint64_t n) {
  return event_latency_ns(stats, config) / static_cast<double>(n);
}

enum class HwPhase { Idle, Fill, SortOdd, SortEven, Drain };

inline const char* phase_name(HwPhase p) {
  switch (p) {
    case HwPhase::Idle: return "idle";
    case HwPhase::Fill: return "fill";
    case HwPhase::SortOdd: return "sort_odd";
    case HwPhase::SortEven: return "sort_even";
    case HwPhase::Drain: return "drain";
  }
  return "?";
}

class HwScheduler {
 public:
  explicit HwScheduler(HwConfig config) : config_(config) {
    config_.validate();
    avail_.assign(static_cast<size_t>(config_.pe_count), 0);
    exec_rows_.resize(static_cast<size_t>(config_.queue_depth));
    tid_table_.assign(static_cast<size_t>(config_.queue_depth), 0);
  }

  const HwConfig& config() const { return config_; }
  HwPhase phase() const { return phase_; }
  const std::vector<std::uint64_t>& avail() const { return avail_; }
  const std::deque<QueueCell>& cells() const { return cells_; }
  const CycleStats& stats() const { return stats_; }
  std::uint64_t saturation_events() const { return saturation_events_; }

  // Per-cycle trace sink; one CSV line per cycle when set.
  void set_trace(std::ostream* os) { trace_ = os; }

  // Load availability registers, in scheduler time units. Costs no scheduler
  // cycles; the transfer is charged by the overhead model.
  void sync_avail(std::span<const std::uint64_t> times) {
    if (phase_ != HwPhase::Idle) {
      throw SimError(ErrorCode::WrongPhase, "sync_avail outside Idle phase");
    }
    if (times.size() != avail_.size()) {
      throw SimError(ErrorCode::BadConfig, "sync_avail size does not match PE count");
    }
    for (size_t i = 0; i < times.size(); ++i) {
      avail_[i] = std::min(times[i], config_.accum_max());
    }
  }

  // Insert one task: counter-based QID, quantized avg at the queue front,
  // quantized exec row and TID stored at address QID. One cycle.
  std::uint32_t enqueue_task(const TaskRecord& rec) {
    if (phase_ != HwPhase::Idle && phase_ != HwPhase::Fill) {
      throw SimError(ErrorCode::WrongPhase, "enqueue_task outside Idle/Fill phase");
    }
    if (next_qid_ >= static_cast<std::uint32_t>(config_.queue_depth)) {
      throw SimError(ErrorCode::QueueFull, "priority queue depth exceeded");
    }
    if (static_cast<int>(rec.exec.size()) != config_.pe_count) {
      throw SimError(ErrorCode::BadConfig, "task exec table does not match PE count");
    }
    const std::uint32_t qid = next_qid_++;
    bool sat = false;
    bool any_sat = false;
    QueueCell cell{qid, quantize(rec.avg, config_, &sat)};
    any_sat |= sat;
    ExecRow& row = exec_rows_[qid];
    row.exec.clear();
    row.supported.clear();
    for (std::uint64_t t : rec.exec) {
      row.supported.push_back(t != kUnsupported);
      row.exec.push_back(quantize(t, config_, &sat));
      any_sat |= (sat && t != kUnsupported);
    }
    tid_table_[qid] = rec.tid;
    if (any_sat) ++saturation_events_;
    cells_.push_back(cell);
    phase_ = HwPhase::Fill;
    ++stats_.fill_cycles;
    ++stats_.total_cycles;
    ++cycle_;
    trace_cycle(HwPhase::Fill, 0, nullptr);
    return qid;
  }

  // Advance the machine by exactly one cycle.
  std::optional<MappingDecision> tick() {
    switch (phase_) {
      case HwPhase::Idle:
        throw SimError(ErrorCode::WrongPhase, "tick in Idle phase");
      case HwPhase::Fill:
        phase_ = HwPhase::SortOdd;
        [[fallthrough]];
      case HwPhase::SortOdd:
      case HwPhase::SortEven:
        return sort_tick();
      case HwPhase::Drain:
        return drain_tick();
    }
    return std::nullopt;
  }

  // Whole mapping event: sync, stream in all tasks, tick until Idle.
  std::pair<std::vector<MappingDecision>, CycleStats> run_event(
      std::span<const std::uint64_t> avail_times, std::span<const TaskRecord> tasks) {
    if (tasks.empty() || static_cast<int>(tasks.size()) > config_.queue_depth) {
      throw SimError(ErrorCode::EventTooLarge,
                     "event must hold between 1 and D tasks");
    }
    reset_event();
    sync_avail(avail_times);
    std::vector<MappingDecision> decisions;
    decisions.reserve(tasks.size());
    for (const TaskRecord& rec : tasks) enqueue_task(rec);
    while (phase_ != HwPhase::Idle) {
      if (auto d = tick()) decisions.push_back(*d);
    }
    return {std::move(decisions), stats_};
  }

  // Drop any queued tasks and restart the per-event counters. Availability
  // registers are preserved.
  void reset_event() {
    cells_.clear();
    next_qid_ = 0;
    phase_ = HwPhase::Idle;
    quiet_count_ = 0;
    cycle_ = 0;
    stats_ = CycleStats{};
  }

 private:
  struct ExecRow {
    std::vector<std::uint64_t> exec;  // quantized
    std::vector<bool> supported;
  };

  std::optional<MappingDecision> sort_tick() {
    // Compare adjacent pairs; index 0 is the output end and must end up
    // holding the largest avg. Strict inequality keeps equal avgs in
    // insertion order.
    const size_t start = phase_ == HwPhase::SortOdd ? 1 : 0;
    int swaps = 0;
    for (size_t i = start; i + 1 < cells_.size(); i += 2) {
      if (cells_[i].avg < cells_[i + 1].avg) {
        std::swap(cells_[i], cells_[i + 1]);
        ++swaps;
      }
    }
    quiet_count_ = swaps == 0 ? quiet_count_ + 1 : 0;
    const HwPhase traced = phase_;
    phase_ = phase_ == HwPhase::SortOdd ? HwPhase::SortEven : HwPhase::SortOdd;
    if (quiet_count_ >= 2) phase_ = HwPhase::Drain;
    ++stats_.sort_cycles;
    ++stats_.total_cycles;
    ++cycle_;
    trace_cycle(traced, swaps, nullptr);
    return std::nullopt;
  }

  std::optional<MappingDecision> drain_tick() {
    ++stats_.drain_cycles;
    ++stats_.total_cycles;
    ++cycle_;
    if (cells_.empty()) {
      // Trailing cycle: the last decision propagates through the
      // handler/selector pipeline before the event retires.
      phase_ = HwPhase::Idle;
      trace_cycle(HwPhase::Drain, 0, nullptr);
      return std::nullopt;
    }
    const QueueCell cell = cells_.front();
    cells_.pop_front();
    const ExecRow& row = exec_rows_[cell.qid];
    int best_pe = -1;
    std::uint64_t best_finish = 0;
    for (int pe = 0; pe < config_.pe_count; ++pe) {
      if (!row.supported[static_cast<size_t>(pe)]) continue;
      std::uint64_t finish = avail_[static_cast<size_t>(pe)] + row.exec[static_cast<size_t>(pe)];
      if (finish > config_.accum_max()) finish = config_.accum_max();
      if (best_pe < 0 || finish < best_finish) {
        best_pe = pe;
        best_finish = finish;
      }
    }
    if (best_pe < 0) {
      throw SimError(ErrorCode::NoSupportedPe, "queued task supports no PE");
    }
    avail_[static_cast<size_t>(best_pe)] = best_finish;
    MappingDecision decision{tid_table_[cell.qid], best_pe, best_finish};
    if (stats_.first_decision_cycle == 0) stats_.first_decision_cycle = cycle_;
    trace_cycle(HwPhase::Drain, 0, &decision);
    return decision;
  }

  void trace_cycle(HwPhase phase, int swaps, const MappingDecision* decision) {
    if (!trace_) return;
    *trace_ << cycle_ << ',' << phase_name(phase) << ',' << swaps << ',';
    if (decision) {
      *trace_ << decision->tid << ',' << decision->pe_id << ',' << decision->predicted_finish;
    } else {
      *trace_ << ",,";
    }
    *trace_ << '\n';
  }

  HwConfig config_;
  std::deque<QueueCell> cells_;  // index 0 = output end
  std::vector<ExecRow> exec_rows_;
  std::vector<std::uint64_t> tid_table_;
  std::vector<std::uint64_t> avail_;
  HwPhase phase_ = HwPhase::Idle;
  int quiet_count_ = 0;
  std::uint32_t next_qid_ = 0;
  std::uint64_t cycle_ = 0;
  CycleStats stats_;
  std::uint64_t saturation_events_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace heftsim
