#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "heftsim/sw_sched.hpp"

using namespace heftsim;

namespace {

SchedulerInput two_task_example() {
  SchedulerInput input;
  input.ready = {
      TaskRecord::make(0, {10, 12}),  // A, avg 11
      TaskRecord::make(1, {25, 15}),  // B, avg 20
  };
  input.avail = {0, 0};
  return input;
}

}  // namespace

TEST_CASE("heft_rt orders by descending avg and picks the EFT PE") {
  ScheduleResult result = heft_rt_schedule(two_task_example());
  REQUIRE(result.decisions.size() == 2);
  CHECK(result.decisions[0].tid == 1);  // B first
  CHECK(result.decisions[0].pe_id == 1);
  CHECK(result.decisions[0].predicted_finish == 15);
  CHECK(result.decisions[1].tid == 0);
  CHECK(result.decisions[1].pe_id == 0);
  CHECK(result.decisions[1].predicted_finish == 10);
  CHECK(result.final_avail == std::vector<std::uint64_t>{10, 15});
}

TEST_CASE("single task on a single PE adds exec to avail") {
  SchedulerInput input;
  input.ready = {TaskRecord::make(3, {7})};
  input.avail = {3};
  ScheduleResult result = heft_rt_schedule(input);
  REQUIRE(result.decisions.size() == 1);
  CHECK(result.decisions[0] == MappingDecision{3, 0, 10});
}

TEST_CASE("equal avgs keep insertion order") {
  SchedulerInput input;
  input.ready = {
      TaskRecord::make(0, {8, 12}),  // avg 10
      TaskRecord::make(1, {12, 8}),  // avg 10
  };
  input.avail = {0, 0};
  ScheduleResult result = heft_rt_schedule(input);
  CHECK(result.decisions[0].tid == 0);
  CHECK(result.decisions[1].tid == 1);
}

TEST_CASE("fifo keeps insertion order") {
  ScheduleResult result = fifo_schedule(two_task_example());
  REQUIRE(result.decisions.size() == 2);
  CHECK(result.decisions[0].tid == 0);
  CHECK(result.decisions[0].pe_id == 0);
  CHECK(result.decisions[1].tid == 1);
  CHECK(result.decisions[1].pe_id == 1);
}

TEST_CASE("fifo equals heft for a single task") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    SchedulerInput input;
    input.ready = {TaskRecord::make(0, {1 + rng() % 100, 1 + rng() % 100})};
    input.avail = {rng() % 50, rng() % 50};
    CHECK(heft_rt_schedule(input).decisions == fifo_schedule(input).decisions);
  }
}

TEST_CASE("fifo spreads equal tasks by availability") {
  SchedulerInput input;
  input.ready = {
      TaskRecord::make(0, {5, 5}),
      TaskRecord::make(1, {5, 5}),
      TaskRecord::make(2, {5, 5}),
      TaskRecord::make(3, {5, 5}),
  };
  input.avail = {0, 0};
  ScheduleResult result = fifo_schedule(input);
  CHECK(result.decisions[0].pe_id == 0);
  CHECK(result.decisions[1].pe_id == 1);
  CHECK(result.decisions[2].pe_id == 0);
  CHECK(result.decisions[3].pe_id == 1);
}

TEST_CASE("brute force examples") {
  SchedulerInput single;
  single.ready = {TaskRecord::make(0, {5, 9})};
  single.avail = {0, 0};
  CHECK(brute_force_best_assignment(single).makespan == 5);

  SchedulerInput pair;
  pair.ready = {TaskRecord::make(0, {5, 5}), TaskRecord::make(1, {5, 5})};
  pair.avail = {0, 0};
  CHECK(brute_force_best_assignment(pair).makespan == 5);

  CHECK(brute_force_best_assignment(two_task_example()).makespan == 15);

  SchedulerInput too_big;
  too_big.ready.resize(9, TaskRecord::make(0, {1}));
  too_big.avail = {0};
  CHECK_THROWS_MATCHES(brute_force_best_assignment(too_big), SimError,
                       Catch::Matchers::Predicate<SimError>([](const SimError& e) {
                         return e.code() == ErrorCode::TooLarge;
                       }));
}

TEST_CASE("heft makespan never beats the brute-force optimum") {
  std::mt19937_64 rng(31);
  double worst_ratio = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    int p = 1 + static_cast<int>(rng() % 3);
    SchedulerInput input;
    input.avail.assign(static_cast<size_t>(p), 0);
    for (int i = 0; i < n; ++i) {
      std::vector<std::uint64_t> exec(static_cast<size_t>(p));
      for (auto& e : exec) e = 1 + rng() % 50;
      input.ready.push_back(TaskRecord::make(static_cast<std::uint64_t>(i), std::move(exec)));
    }
    ScheduleResult heft = heft_rt_schedule(input);
    std::uint64_t heft_makespan =
        *std::max_element(heft.final_avail.begin(), heft.final_avail.end());
    BruteForceResult best = brute_force_best_assignment(input);
    CHECK(heft_makespan >= best.makespan);
    worst_ratio = std::max(worst_ratio, static_cast<double>(heft_makespan) /
                                            static_cast<double>(best.makespan));
  }
  // Quality is reported, never asserted.
  INFO("worst heft/optimal makespan ratio: " << worst_ratio);
}

TEST_CASE("heft is pure and scale invariant") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng() % 10);
    SchedulerInput input;
    input.avail = {rng() % 20, rng() % 20, rng() % 20};
    for (int i = 0; i < n; ++i) {
      // Exec tables with an exact integer mean, so the rounded average (and
      // with it the priority order) scales exactly.
      std::uint64_t v = 10 + rng() % 40;
      std::uint64_t d = rng() % 6;
      std::vector<std::uint64_t> exec = {v - d, v, v + d};
      input.ready.push_back(TaskRecord::make(static_cast<std::uint64_t>(i), std::move(exec)));
    }
    ScheduleResult once = heft_rt_schedule(input);
    CHECK(heft_rt_schedule(input).decisions == once.decisions);

    const std::uint64_t scale = 7;
    SchedulerInput scaled;
    scaled.avail = input.avail;
    for (auto& a : scaled.avail) a *= scale;
    for (const TaskRecord& rec : input.ready) {
      std::vector<std::uint64_t> exec = rec.exec;
      for (auto& e : exec) e *= scale;
      scaled.ready.push_back(TaskRecord::make(rec.tid, std::move(exec)));
    }
    ScheduleResult scaled_result = heft_rt_schedule(scaled);
    REQUIRE(scaled_result.decisions.size() == once.decisions.size());
    for (size_t i = 0; i < once.decisions.size(); ++i) {
      CHECK(scaled_result.decisions[i].tid == once.decisions[i].tid);
      CHECK(scaled_result.decisions[i].pe_id == once.decisions[i].pe_id);
    }
  }
}

TEST_CASE("software overhead model") {
  CHECK(sw_overhead_model(1, {1000, 100, 50}) == 1100);
  CHECK(sw_overhead_model(4, {0, 0, 1}) == 8);
  CHECK_THROWS_AS(sw_overhead_model(0, {1, 1, 1}), SimError);
}
