#pragma once

#include <stdexcept>
#include <vector>

#include "moss/core/config.hpp"
#include "moss/core/rng.hpp"
#include "moss/core/task.hpp"

namespace moss::envs {

enum class Regime { parametric, ood, nonstationary, nonparametric };
enum class Split { train, test };

struct GoalRange {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct BaseTaskRanges {
  core::BaseTask base = core::BaseTask::velocity;
  std::vector<GoalRange> train;  // goal magnitude intervals
  std::vector<GoalRange> test;   // empty: split not defined
  bool signed_direction = false; // sample direction in {-1, +1}
};

struct TaskDistributionSpec {
  Regime regime = Regime::parametric;
  std::vector<BaseTaskRanges> base_tasks;
  int change_period = 100;
  double change_prob = 0.5;
  int horizon = 200;
};

// Builds the suite named by the config. Non-stationary episodes run a fixed
// 500-step horizon; the other suites use cfg.max_path_length.
TaskDistributionSpec make_suite(const core::RunConfig& cfg);

std::vector<core::TaskSpec> sample_tasks(const TaskDistributionSpec& dist, int n,
                                         Split split, core::RandomStream& rng);

// Resamples only the goal of `task` (same base task) from the train ranges.
core::TaskSpec resample_goal(const TaskDistributionSpec& dist, const core::TaskSpec& task,
                             core::RandomStream& rng);

// Largest possible |reward| under the suite's ranges (velocity bound etc).
double reward_bound(const TaskDistributionSpec& dist);

struct TaskDistributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace moss::envs
