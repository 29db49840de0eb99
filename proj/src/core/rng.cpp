#include "moss/core/rng.hpp"

#include <cmath>

namespace moss::core {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view label)
    : eng_(splitmix64(splitmix64(seed) ^ fnv1a64(label))), label_(label) {}

std::uint64_t RandomStream::next_u64() { return eng_(); }

double RandomStream::uniform() {
  // 53 mantissa bits -> [0, 1)
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double a, double b) { return a + (b - a) * uniform(); }

double RandomStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double RandomStream::normal(double mu, double sigma) { return mu + sigma * normal(); }

int RandomStream::uniform_int(int n) {
  if (n <= 0) return 0;
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = ~0ULL - (~0ULL % un);
  std::uint64_t x = eng_();
  while (x >= limit) x = eng_();
  return static_cast<int>(x % un);
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

}  // namespace moss::core
