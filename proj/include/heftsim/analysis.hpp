#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "heftsim/error.hpp"

namespace heftsim {

// Summary analytics over sweep and overhead series.

struct RatePoint {
  double target = 0.0;
  double achieved = 0.0;
};

// A plateau exists when the relative change across the last k points is
// below epsilon; the plateau value is the mean achieved rate over them.
inline std::optional<double> detect_saturation(const std::vector<RatePoint>& series,
                                               double epsilon, int k) {
  if (k < 1 || static_cast<int>(series.size()) < k + 1) {
    throw SimError(ErrorCode::TooFewPoints,
                   "saturation detection needs at least k + 1 points");
  }
  const size_t n = series.size();
  const double first = series[n - static_cast<size_t>(k)].achieved;
  const double last = series[n - 1].achieved;
  if (first <= 0.0) return std::nullopt;
  if (std::abs(last - first) / first >= epsilon) return std::nullopt;
  double sum = 0.0;
  for (size_t i = n - static_cast<size_t>(k); i < n; ++i) sum += series[i].achieved;
  return sum / static_cast<double>(k);
}

struct OverheadPoint {
  std::uint64_t n = 0;
  double overhead_ns = 0.0;
};

// Smallest n where the hardware overhead drops below the software overhead
// and stays below for every larger sampled n. Both series must sample the
// same queue sizes.
inline std::optional<std::uint64_t> detect_crossover(
    const std::vector<OverheadPoint>& sw_series,
    const std::vector<OverheadPoint>& hw_series) {
  if (sw_series.size() != hw_series.size() || sw_series.empty()) {
    throw SimError(ErrorCode::DomainMismatch, "overhead series do not share a queue-size grid");
  }
  for (size_t i = 0; i < sw_series.size(); ++i) {
    if (sw_series[i].n != hw_series[i].n) {
      throw SimError(ErrorCode::DomainMismatch, "overhead series do not share a queue-size grid");
    }
  }
  std::optional<std::uint64_t> crossover;
  for (size_t i = 0; i < sw_series.size(); ++i) {
    if (hw_series[i].overhead_ns < sw_series[i].overhead_ns) {
      if (!crossover) crossover = sw_series[i].n;
    } else {
      crossover.reset();
    }
  }
  return crossover;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace heftsim
