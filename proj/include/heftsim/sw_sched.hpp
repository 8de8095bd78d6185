#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "heftsim/core.hpp"
#include "heftsim/error.hpp"

namespace heftsim {

// Software HEFT_RT reference, a FIFO baseline, and a tiny-instance
// brute-force makespan oracle. All pure functions.

struct SchedulerInput {
  std::vector<TaskRecord> ready;        // insertion order = arrival order
  std::vector<std::uint64_t> avail;     // per-PE availability
  // Saturation cap for finish-time arithmetic. Set to the hardware
  // accumulator maximum when checking equivalence against the cycle model.
  std::uint64_t finish_cap = std::numeric_limits<std::uint64_t>::max();
};

struct ScheduleResult {
  std::vector<MappingDecision> decisions;  // in dequeue order
  std::vector<std::uint64_t> final_avail;
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  return (a > cap - b || a + b > cap) ? cap : a + b;
}

// Argmin of avail + exec over supported PEs, lowest index on ties.
inline int eft_pe(const TaskRecord& rec, const std::vector<std::uint64_t>& avail,
                  std::uint64_t cap) {
  int best_pe = -1;
  std::uint64_t best_finish = 0;
  for (int pe = 0; pe < static_cast<int>(avail.size()); ++pe) {
    if (!rec.supports(pe)) continue;
    std::uint64_t finish =
        saturating_add(avail[static_cast<size_t>(pe)], rec.exec[static_cast<size_t>(pe)], cap);
    if (best_pe < 0 || finish < best_finish) {
      best_pe = pe;
      best_finish = finish;
    }
  }
  if (best_pe < 0) throw SimError(ErrorCode::NoSupportedPe, "task supports no PE");
  return best_pe;
}

inline ScheduleResult schedule_in_order(const std::vector<const TaskRecord*>& order,
                                        const SchedulerInput& input) {
  ScheduleResult result;
  result.final_avail = input.avail;
  result.decisions.reserve(order.size());
  for (const TaskRecord* rec : order) {
    int pe = eft_pe(*rec, result.final_avail, input.finish_cap);
    std::uint64_t finish = saturating_add(result.final_avail[static_cast<size_t>(pe)],
                                          rec->exec[static_cast<size_t>(pe)], input.finish_cap);
    result.final_avail[static_cast<size_t>(pe)] = finish;
    result.decisions.push_back({rec->tid, pe, finish});
  }
  return result;
}

}  // namespace detail

// Stable sort by descending avg (ties keep insertion order), then assign
// each task to the PE with the earliest finish time.
inline ScheduleResult heft_rt_schedule(const SchedulerInput& input) {
  std::vector<const TaskRecord*> order;
  order.reserve(input.ready.size());
  for (const TaskRecord& rec : input.ready) order.push_back(&rec);
  std::stable_sort(order.begin(), order.end(),
                   [](const TaskRecord* a, const TaskRecord* b) { return a->avg > b->avg; });
  return detail::schedule_in_order(order, input);
}

// Baseline: no priority sort, insertion order straight to the EFT PE.
inline ScheduleResult fifo_schedule(const SchedulerInput& input) {
  std::vector<const TaskRecord*> order;
  order.reserve(input.ready.size());
  for (const TaskRecord& rec : input.ready) order.push_back(&rec);
  return detail::schedule_in_order(order, input);
}

struct BruteForceResult {
  std::vector<int> assignment;  // task index -> pe
  std::uint64_t makespan = 0;
};

// Exhaustive makespan oracle over all P^n assignments. For independent
// ready-queue tasks the makespan of an assignment does not depend on the
// order tasks are listed, so enumerating assignments covers every list
// schedule.
inline BruteForceResult brute_force_best_assignment(const SchedulerInput& input) {
  const size_t n = input.ready.size();
  const size_t p = input.avail.size();
  if (n > 8 || p > 4) {
    throw SimError(ErrorCode::TooLarge, "brute force limited to n <= 8, P <= 4");
  }
  BruteForceResult best;
  best.makespan = std::numeric_limits<std::uint64_t>::max();
  std::vector<int> assignment(n, 0);
  std::vector<std::uint64_t> load(p);
  std::uint64_t combos = 1;
  for (size_t i = 0; i < n; ++i) combos *= p;
  for (std::uint64_t code = 0; code < combos; ++code) {
    std::uint64_t rest = code;
    bool feasible = true;
    load = input.avail;
    for (size_t i = 0; i < n; ++i) {
      int pe = static_cast<int>(rest % p);
      rest /= p;
      assignment[i] = pe;
      if (!input.ready[i].supports(pe)) {
        feasible = false;
        break;
      }
      load[static_cast<size_t>(pe)] = detail::saturating_add(
          load[static_cast<size_t>(pe)], input.ready[i].exec[static_cast<size_t>(pe)],
          input.finish_cap);
    }
    if (!feasible) continue;
    std::uint64_t makespan = *std::max_element(load.begin(), load.end());
    if (makespan < best.makespan) {
      best.makespan = makespan;
      best.assignment = assignment;
    }
  }
  return best;
}

struct SwCoeffs {
  double a = 2000.0;  // fixed cost, ns
  double b = 2600.0;  // per-task cost, ns
  double c = 600.0;   // sort cost multiplier, ns
};

// Analytic software scheduler cost: a + b*n + c*n*log2(n) ns, rounded.
inline std::uint64_t sw_overhead_model(std::uint64_t n, const SwCoeffs& coeffs) {
  if (n < 1) throw SimError(ErrorCode::BadConfig, "queue size must be >= 1");
  double cost = coeffs.a + coeffs.b * static_cast<double>(n) +
                coeffs.c * static_cast<double>(n) * std::log2(static_cast<double>(n));
  return static_cast<std::uint64_t>(std::llround(cost));
}

}  // namespace heftsim
