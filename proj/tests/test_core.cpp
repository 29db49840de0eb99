#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "moss/core/config.hpp"
#include "moss/core/normalizer.hpp"
#include "moss/core/rng.hpp"

using namespace moss::core;

TEST_CASE("seeded streams are deterministic and independent") {
  RandomStream a(0, "env"), b(0, "env");
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream c(0, "env"), d(0, "vae");
  int diff = 0;
  for (int i = 0; i < 100; ++i)
    if (c.next_u64() != d.next_u64()) ++diff;
  CHECK(diff > 90);

  RandomStream e(1, "env"), f(2, "env");
  diff = 0;
  for (int i = 0; i < 100; ++i)
    if (e.next_u64() != f.next_u64()) ++diff;
  CHECK(diff > 90);
}

TEST_CASE("uniform_int is unbiased over small ranges") {
  RandomStream rng(5, "uniform-int");
  int counts[7] = {0};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(7)];
  for (int c : counts) CHECK(std::abs(c - n / 7) < 500);
}

TEST_CASE("normal draws have the right moments") {
  RandomStream rng(6, "normal");
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("welford normalizer closed forms") {
  RunningNormalizer n;
  n.update(5.0);
  CHECK(n.count == 1);
  CHECK(n.mean == doctest::Approx(5.0));
  CHECK(n.normalize(123.0) == 123.0);  // count < 2: identity

  RunningNormalizer m;
  for (double x : {1.0, 2.0, 3.0}) m.update(x);
  CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.variance() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("welford matches a two-pass oracle on normal draws") {
  RandomStream rng(7, "welford");
  RunningNormalizer n;
  std::vector<double> xs;
  const int count = 10000;
  xs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double x = rng.normal() * 1000.0;  // magnitudes up to ~1e3
    xs.push_back(x);
    n.update(x);
  }
  // two-pass oracle
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= count;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (count - 1);

  CHECK(std::abs(n.mean - mean) / std::max(1.0, std::abs(mean)) < 1e-9);
  CHECK(std::abs(n.variance() - var) / var < 1e-9);
  // and unscaled standard-normal moments land near (0, 1)
  RunningNormalizer m;
  RandomStream rng2(8, "welford2");
  for (int i = 0; i < 10000; ++i) m.update(rng2.normal());
  CHECK(std::abs(m.mean) < 0.05);
  CHECK(std::abs(m.variance() - 1.0) < 0.05);
}

TEST_CASE("normalize standardizes and clips") {
  RunningNormalizer n;
  for (double x : {0.0, 2.0}) n.update(x);  // mean 1, std sqrt(2)
  CHECK(n.normalize(1.0) == doctest::Approx(0.0));
  CHECK(n.normalize(1e9) == 10.0);
  CHECK(n.normalize(-1e9) == -10.0);
}

TEST_CASE("config: partial file keeps table defaults") {
  RunConfig c = parse_config("num_classes: 4\n", "test");
  CHECK(c.num_classes == 4);
  CHECK(c.lr_encoder == doctest::Approx(3e-4));
  CHECK(c.lr_decoder == doctest::Approx(3e-4));
  CHECK(c.policy_net_lr == doctest::Approx(3e-4));
  CHECK(c.sac_alpha == doctest::Approx(0.2));
  CHECK(c.time_steps == 64);
  CHECK(c.max_path_length == 200);
  CHECK(c.latent_size == 5);
  CHECK(c.automatic_entropy_tuning == false);
}

TEST_CASE("config: empty file gives all defaults") {
  RunConfig c = parse_config("", "test");
  CHECK(c == RunConfig{});
  CHECK(c.seed == 0);
}

TEST_CASE("config: invariant violations name the field") {
  CHECK_THROWS_WITH_AS(parse_config("gamma: 1.5\n", "test"),
                       doctest::Contains("gamma"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config("num_classes: 0\n", "test"),
                       doctest::Contains("num_classes"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config("use_contrastive: True\nn_keys: 1\n", "test"),
                       doctest::Contains("n_keys"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config("automatic_entropy_tuning: True\n", "test"),
                       doctest::Contains("automatic_entropy_tuning"), ValidationError);
}

TEST_CASE("config: parse errors name the line") {
  CHECK_THROWS_WITH_AS(parse_config("num_classes: 4\nbogus_key: 1\n", "cfg"),
                       doctest::Contains("cfg:2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("just some words\n", "cfg"),
                       doctest::Contains("cfg:1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("gamma: not_a_number\n", "cfg"),
                       doctest::Contains("gamma"), ConfigError);
}

TEST_CASE("config: comments and blank lines are ignored") {
  RunConfig c = parse_config("# full line comment\n\nseed: 9  # trailing\n", "test");
  CHECK(c.seed == 9);
}

TEST_CASE("config: serialize/parse round-trip is exact") {
  RunConfig c;
  c.num_classes = 4;
  c.latent_size = 8;
  c.alpha = 0.37;
  c.beta = 1e-3;
  c.desk_scale = 12.5;
  c.env_suite = EnvSuite::point_multi;
  c.seed = 1234567;
  c.policy_net_lr = 2.5e-4;
  RunConfig back = parse_config(serialize_config(c), "round-trip");
  CHECK(back == c);
}

TEST_CASE("config: MOSS_SEED env var overrides seed") {
  const char* path = "moss_test_config.cfg";
  {
    std::ofstream out(path);
    out << "seed: 3\n";
  }
  setenv("MOSS_SEED", "77", 1);
  RunConfig c = load_config(path);
  unsetenv("MOSS_SEED");
  CHECK(c.seed == 77);
  RunConfig c2 = load_config(path);
  CHECK(c2.seed == 3);
  std::remove(path);
}

TEST_CASE("config: missing file is a config error") {
  CHECK_THROWS_AS(load_config("/nonexistent/moss.cfg"), ConfigError);
}
