#include "moss/envs/point_env.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace moss::envs {

using core::BaseTask;

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

const char* task_name(BaseTask t);

PointEnvState PointEnv::reset(const core::TaskSpec& task) const {
  PointEnvState s;
  s.position = {0.0, 0.0};
  s.velocity = {0.0, 0.0};
  s.t = 0;
  s.active_task = task;
  return s;
}

double PointEnv::reward_for(const core::TaskSpec& task, const PointEnvState& after) {
  switch (task.base_task) {
    case BaseTask::velocity:
      return -std::abs(task.goal[0] - after.velocity[0]);
    case BaseTask::goal: {
      const double dx = task.goal[0] - after.position[0];
      const double dy = task.goal[1] - after.position[1];
      return -std::sqrt(dx * dx + dy * dy);
    }
    case BaseTask::angle: {
      const double theta = std::atan2(after.velocity[1], after.velocity[0]);
      return -std::abs(wrap_angle(task.goal[0] - theta));
    }
    case BaseTask::burst:
      return -std::abs(task.goal[0] - std::abs(after.velocity[1]));
  }
  return 0.0;
}

PointEnv::StepResult PointEnv::step(const PointEnvState& state,
                                    std::array<double, 2> action) const {
  StepResult out;
  for (double& a : action) {
    if (a < -1.0 || a > 1.0) {
      out.action_clipped = true;
      a = std::clamp(a, -1.0, 1.0);
    }
  }
  PointEnvState next = state;
  for (int d = 0; d < 2; ++d) {
    next.position[d] = state.position[d] + kDt * state.velocity[d];
    next.velocity[d] =
        std::clamp(state.velocity[d] + kDt * kActionScale * action[d], -kVMax, kVMax);
  }
  next.t = state.t + 1;
  out.reward = reward_for(state.active_task, next);
  out.done = next.t >= dist_.horizon;
  out.next = next;
  return out;
}

bool PointEnv::maybe_switch_task(PointEnvState& state, core::RandomStream& rng) const {
  const core::TaskSpec& task = state.active_task;
  if (!task.nonstationary) return false;
  if (state.t <= 0 || task.change_period <= 0 || state.t % task.change_period != 0)
    return false;
  if (!rng.bernoulli(task.change_prob)) return false;
  state.active_task = resample_goal(dist_, task, rng);
  return true;
}

void write_trace_jsonl(const TrajectorySegment& segment, std::ostream& out) {
  for (std::size_t i = 0; i < segment.steps.size(); ++i) {
    const Transition& tr = segment.steps[i];
    nlohmann::json j;
    j["t"] = i;
    j["s"] = tr.s;
    j["a"] = tr.a;
    j["r"] = tr.r;
    j["s_next"] = tr.s_next;
    j["done"] = tr.done;
    j["task_goal"] = tr.task_goal;
    j["task_changed"] = tr.task_changed;
    out << j.dump() << "\n";
  }
}

}  // namespace moss::envs
