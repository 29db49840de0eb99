#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace moss::core {

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream addressed by (seed, label). Distinct labels
// give independent streams, so adding draws to one subsystem never perturbs
// another. All distributions are hand-rolled on top of the raw engine to be
// reproducible across standard library implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();
  double uniform();                    // [0, 1)
  double uniform(double a, double b);  // [a, b)
  double normal();                     // N(0, 1), Box-Muller
  double normal(double mu, double sigma);
  int uniform_int(int n);              // {0, ..., n-1}, unbiased
  bool bernoulli(double p);

  const std::string& label() const { return label_; }

 private:
  std::mt19937_64 eng_;
  std::string label_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace moss::core
