#pragma once

#include <cstdint>

namespace moss::core {

// Single-pass Welford accumulator with standardization. normalize() is the
// identity until two observations have arrived.
struct RunningNormalizer {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void update(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  double variance() const {
    return count >= 2 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  double stddev() const;

  // (x - mean) / std, clipped to [-10, 10]; x unchanged while count < 2.
  double normalize(double x) const;
};

}  // namespace moss::core
