#pragma once

#include <array>
#include <string>

namespace moss::core {

// Qualitatively distinct reward families. Non-parametric variation = change
// of base task; parametric variation = goal change within one base task.
enum class BaseTask { velocity, goal, angle, burst };

const char* to_string(BaseTask t);

// One MDP instance. `goal` holds the signed target: velocity tasks use
// goal[0] as target x-velocity, angle tasks as target heading (radians),
// burst tasks as target |v_y|, goal tasks use both components as a target
// position. `direction` records the sampled sign for signed families.
struct TaskSpec {
  BaseTask base_task = BaseTask::velocity;
  std::array<double, 2> goal{0.0, 0.0};
  int direction = +1;
  bool nonstationary = false;
  int change_period = 100;
  double change_prob = 0.0;

  bool operator==(const TaskSpec&) const = default;
};

}  // namespace moss::core
