#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "heftsim/report.hpp"

using namespace heftsim;

// Grid-search utility behind the default hardware transfer constants: scan
// the fixed transfer cost and keep values whose crossover lands on the
// target queue size.
namespace {

std::vector<std::uint64_t> calibrate_transfer_fixed(
    std::uint64_t target_crossover, const HwConfig& config, const OverheadModel& base,
    std::uint64_t lo, std::uint64_t hi, std::uint64_t step) {
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t n = 1; n <= 64; ++n) sizes.push_back(n);
  std::vector<std::uint64_t> matches;
  for (std::uint64_t fixed = lo; fixed <= hi; fixed += step) {
    OverheadModel model = base;
    model.transfer_fixed_ns = fixed;
    auto [sw_series, hw_series] = overhead_series(sizes, config, model);
    if (detect_crossover(sw_series, hw_series) == std::optional<std::uint64_t>(target_crossover)) {
      matches.push_back(fixed);
    }
  }
  return matches;
}

}  // namespace

TEST_CASE("grid search recovers the shipped transfer constant") {
  OverheadModel defaults;
  std::vector<std::uint64_t> matches =
      calibrate_transfer_fixed(6, HwConfig{}, defaults, 1000, 40000, 1000);
  REQUIRE_FALSE(matches.empty());
  CHECK(std::find(matches.begin(), matches.end(), defaults.transfer_fixed_ns) != matches.end());
}

TEST_CASE("software wins below the crossover and loses above it") {
  HwConfig config;
  OverheadModel model;
  for (std::uint64_t n = 1; n <= 5; ++n) {
    CHECK(sw_overhead_model(n, model.sw) < hw_overhead_analytic(n, model, config, true));
  }
  for (std::uint64_t n = 6; n <= 2000; n += 7) {
    CHECK(sw_overhead_model(n, model.sw) > hw_overhead_analytic(n, model, config, true));
  }
}

TEST_CASE("speedup grows monotonically past the crossover") {
  HwConfig config;
  OverheadModel model;
  double prev = 0.0;
  for (std::uint64_t n = 6; n <= 512; ++n) {
    double ratio = static_cast<double>(sw_overhead_model(n, model.sw)) /
                   static_cast<double>(hw_overhead_analytic(n, model, config, true));
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("compute-only speedup exceeds 50x at n = 1330") {
  HwConfig config;
  OverheadModel model;
  double ratio = static_cast<double>(sw_overhead_model(1330, model.sw)) /
                 static_cast<double>(hw_overhead_analytic(1330, model, config, false));
  INFO("compute-only speedup at n=1330: " << ratio);
  CHECK(ratio > 50.0);
}
