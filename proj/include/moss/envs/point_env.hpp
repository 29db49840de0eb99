#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "moss/core/rng.hpp"
#include "moss/core/task.hpp"
#include "moss/envs/task_dist.hpp"

namespace moss::envs {

// Double-integrator point robot:
//   p' = p + dt * v,  v' = clip(v + dt * a_scale * a, -v_max, v_max)
// with a in [-1, 1]^2. Observation is [p, v]. Episodes end only at the
// horizon.
struct PointEnvState {
  std::array<double, 2> position{0.0, 0.0};
  std::array<double, 2> velocity{0.0, 0.0};
  int t = 0;
  core::TaskSpec active_task;
};

struct Transition {
  std::array<double, 4> s{};
  std::array<double, 2> a{};
  double r = 0.0;
  std::array<double, 4> s_next{};
  bool done = false;
  bool task_changed = false;
  std::array<double, 2> task_goal{};  // goal active when the reward was paid
};

struct TrajectorySegment {
  int task_id = -1;
  core::TaskSpec task;  // task at episode start
  std::vector<Transition> steps;
  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
};

class PointEnv {
 public:
  static constexpr double kDt = 0.1;
  static constexpr double kActionScale = 5.0;
  static constexpr double kVMax = 10.0;

  explicit PointEnv(TaskDistributionSpec dist) : dist_(std::move(dist)) {}

  const TaskDistributionSpec& dist() const { return dist_; }
  int horizon() const { return dist_.horizon; }

  PointEnvState reset(const core::TaskSpec& task) const;

  struct StepResult {
    PointEnvState next;
    double reward = 0.0;
    bool done = false;
    bool action_clipped = false;
  };
  StepResult step(const PointEnvState& state, std::array<double, 2> action) const;

  // Applies the non-stationary schedule at the state's current step counter.
  // No-op on stationary tasks or off-boundary steps. Returns true if the
  // goal changed.
  bool maybe_switch_task(PointEnvState& state, core::RandomStream& rng) const;

  static std::array<double, 4> observe(const PointEnvState& s) {
    return {s.position[0], s.position[1], s.velocity[0], s.velocity[1]};
  }

  static double reward_for(const core::TaskSpec& task, const PointEnvState& after);

 private:
  TaskDistributionSpec dist_;
};

// One JSON object per line: {t, s, a, r, s_next, done, task_goal, task_changed}.
void write_trace_jsonl(const TrajectorySegment& segment, std::ostream& out);

}  // namespace moss::envs
