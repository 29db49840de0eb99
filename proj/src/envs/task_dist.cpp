#include "moss/envs/task_dist.hpp"

#include <cmath>

namespace moss::envs {

using core::BaseTask;
using core::TaskSpec;

namespace {

constexpr double kPi = 3.14159265358979323846;

double sample_from_ranges(const std::vector<GoalRange>& ranges, core::RandomStream& rng) {
  if (ranges.empty()) throw TaskDistributionError("no goal ranges for this split");
  double total = 0.0;
  for (const auto& r : ranges) total += r.width();
  double u = rng.uniform() * total;
  for (const auto& r : ranges) {
    if (u <= r.width() || &r == &ranges.back()) return r.lo + std::min(u, r.width());
    u -= r.width();
  }
  return ranges.back().hi;
}

TaskSpec sample_one(const TaskDistributionSpec& dist, const BaseTaskRanges& br,
                    Split split, core::RandomStream& rng) {
  const auto& ranges = split == Split::train ? br.train : br.test;
  if (ranges.empty())
    throw TaskDistributionError("task distribution has no test range for base task '" +
                                std::string(core::to_string(br.base)) + "'");
  TaskSpec task;
  task.base_task = br.base;
  task.direction = br.signed_direction ? (rng.bernoulli(0.5) ? +1 : -1) : +1;
  const double magnitude = sample_from_ranges(ranges, rng);
  if (br.base == BaseTask::goal) {
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    task.goal = {magnitude * std::cos(theta), magnitude * std::sin(theta)};
  } else {
    task.goal = {task.direction * magnitude, 0.0};
  }
  if (dist.regime == Regime::nonstationary) {
    task.nonstationary = true;
    task.change_period = dist.change_period;
    task.change_prob = dist.change_prob;
  }
  return task;
}

void check_disjoint(const BaseTaskRanges& br) {
  for (const auto& tr : br.train)
    for (const auto& te : br.test)
      if (tr.lo < te.hi && te.lo < tr.hi)
        throw TaskDistributionError("ood suite requires disjoint train/test goal ranges");
}

}  // namespace

TaskDistributionSpec make_suite(const core::RunConfig& cfg) {
  TaskDistributionSpec dist;
  dist.horizon = cfg.max_path_length;
  switch (cfg.env_suite) {
    case core::EnvSuite::point_vel:
      dist.regime = Regime::parametric;
      dist.base_tasks = {{BaseTask::velocity, {{0.0, 3.0}}, {{0.0, 3.0}}, false}};
      break;
    case core::EnvSuite::point_vel_ood:
      dist.regime = Regime::ood;
      dist.base_tasks = {
          {BaseTask::velocity, {{2.0, 4.0}}, {{1.0, 2.0}, {4.0, 5.0}}, false}};
      break;
    case core::EnvSuite::point_vel_nonstat:
      dist.regime = Regime::nonstationary;
      dist.base_tasks = {{BaseTask::velocity, {{0.0, 3.0}}, {{0.0, 3.0}}, false}};
      dist.change_period = 100;
      dist.change_prob = 0.5;
      dist.horizon = 500;
      break;
    case core::EnvSuite::point_multi:
      dist.regime = Regime::nonparametric;
      dist.base_tasks = {
          {BaseTask::velocity, {{1.0, 5.0}}, {{1.0, 5.0}}, true},
          {BaseTask::goal, {{2.0, 6.0}}, {{2.0, 6.0}}, false},
          {BaseTask::angle, {{kPi / 6.0, kPi / 2.0}}, {{kPi / 6.0, kPi / 2.0}}, true},
          {BaseTask::burst, {{1.5, 3.0}}, {{1.5, 3.0}}, false},
      };
      break;
  }
  if (dist.regime == Regime::ood)
    for (const auto& br : dist.base_tasks) check_disjoint(br);
  if (dist.regime == Regime::nonparametric && dist.base_tasks.size() < 2)
    throw TaskDistributionError("nonparametric suite needs >= 2 base tasks");
  return dist;
}

std::vector<TaskSpec> sample_tasks(const TaskDistributionSpec& dist, int n, Split split,
                                   core::RandomStream& rng) {
  if (n < 1) throw TaskDistributionError("sample_tasks: n must be >= 1");
  std::vector<TaskSpec> tasks;
  tasks.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int b = dist.base_tasks.size() > 1
                      ? rng.uniform_int(static_cast<int>(dist.base_tasks.size()))
                      : 0;
    tasks.push_back(sample_one(dist, dist.base_tasks[b], split, rng));
  }
  return tasks;
}

TaskSpec resample_goal(const TaskDistributionSpec& dist, const TaskSpec& task,
                       core::RandomStream& rng) {
  for (const auto& br : dist.base_tasks) {
    if (br.base != task.base_task) continue;
    TaskSpec fresh = sample_one(dist, br, Split::train, rng);
    fresh.nonstationary = task.nonstationary;
    fresh.change_period = task.change_period;
    fresh.change_prob = task.change_prob;
    return fresh;
  }
  throw TaskDistributionError("resample_goal: base task not in distribution");
}

double reward_bound(const TaskDistributionSpec& dist) {
  constexpr double v_max = 10.0;
  double bound = 0.0;
  for (const auto& br : dist.base_tasks) {
    double goal_max = 0.0;
    for (const auto& r : br.train) goal_max = std::max(goal_max, std::abs(r.hi));
    for (const auto& r : br.test) goal_max = std::max(goal_max, std::abs(r.hi));
    double b = 0.0;
    switch (br.base) {
      case BaseTask::velocity: b = goal_max + v_max; break;
      case BaseTask::goal:
        // |p| grows at most v_max per unit time over the horizon
        b = goal_max + v_max * 0.1 * dist.horizon;
        break;
      case BaseTask::angle: b = goal_max + kPi; break;
      case BaseTask::burst: b = goal_max + v_max; break;
    }
    bound = std::max(bound, b);
  }
  return bound;
}

}  // namespace moss::envs
