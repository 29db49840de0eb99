#include "moss/core/normalizer.hpp"

#include <algorithm>
#include <cmath>

namespace moss::core {

double RunningNormalizer::stddev() const { return std::sqrt(variance()); }

double RunningNormalizer::normalize(double x) const {
  if (count < 2) return x;
  const double s = std::max(stddev(), 1e-8);
  return std::clamp((x - mean) / s, -10.0, 10.0);
}

}  // namespace moss::core
