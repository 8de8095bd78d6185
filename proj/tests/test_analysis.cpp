#include <catch2/catch_amalgamated.hpp>

#include "heftsim/analysis.hpp"

using namespace heftsim;

TEST_CASE("saturation detector finds a plateau") {
  std::vector<RatePoint> series = {{10, 50},  {20, 100}, {30, 150},
                                   {40, 160}, {50, 161}, {60, 161}};
  auto plateau = detect_saturation(series, 0.05, 3);
  REQUIRE(plateau.has_value());
  CHECK(*plateau == Catch::Approx((160.0 + 161.0 + 161.0) / 3.0));
}

TEST_CASE("saturation detector rejects a linear series") {
  std::vector<RatePoint> series = {{1, 10}, {2, 20}, {3, 30}, {4, 40}};
  CHECK_FALSE(detect_saturation(series, 0.05, 3).has_value());
}

TEST_CASE("saturation detector needs k+1 points") {
  std::vector<RatePoint> series = {{1, 10}, {2, 20}};
  CHECK_THROWS_MATCHES(detect_saturation(series, 0.05, 3), SimError,
                       Catch::Matchers::Predicate<SimError>([](const SimError& e) {
                         return e.code() == ErrorCode::TooFewPoints;
                       }));
}

TEST_CASE("crossover detector finds the first persistent win") {
  std::vector<OverheadPoint> sw = {{1, 10}, {2, 20}, {3, 30}, {4, 40}};
  std::vector<OverheadPoint> hw = {{1, 25}, {2, 25}, {3, 25}, {4, 25}};
  auto cross = detect_crossover(sw, hw);
  REQUIRE(cross.has_value());
  CHECK(*cross == 3);

  std::vector<OverheadPoint> hw_low = {{1, 5}, {2, 5}, {3, 5}, {4, 5}};
  CHECK(detect_crossover(sw, hw_low) == 1);

  std::vector<OverheadPoint> hw_high = {{1, 99}, {2, 99}, {3, 99}, {4, 99}};
  CHECK_FALSE(detect_crossover(sw, hw_high).has_value());

  // A transient win does not count; the crossover restarts after the loss.
  std::vector<OverheadPoint> flicker = {{1, 5}, {2, 25}, {3, 25}, {4, 35}};
  CHECK(detect_crossover(sw, flicker) == 3);
}

TEST_CASE("crossover detector demands a shared grid") {
  std::vector<OverheadPoint> sw = {{1, 10}, {2, 20}};
  std::vector<OverheadPoint> hw = {{1, 10}, {3, 20}};
  CHECK_THROWS_MATCHES(detect_crossover(sw, hw), SimError,
                       Catch::Matchers::Predicate<SimError>([](const SimError& e) {
                         return e.code() == ErrorCode::DomainMismatch;
                       }));
}

TEST_CASE("linear fit recovers an exact line") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y = {5, 8, 11, 14, 17};
  LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == Catch::Approx(3.0));
  CHECK(fit.intercept == Catch::Approx(2.0));
  CHECK(fit.r_squared == Catch::Approx(1.0));

  std::vector<double> noisy = {5, 9, 10, 15, 16};
  CHECK(linear_fit(x, noisy).r_squared < 1.0);
}
