#pragma once

#include <memory>
#include <string>

#include "hidio/envs/env.hpp"
#include "hidio/envs/goal_task.hpp"
#include "hidio/envs/push_ball.hpp"
#include "hidio/envs/reacher.hpp"

namespace hidio::envs {

// Per-environment defaults (horizons, distractor counts, radii).
inline EnvConfig default_config(const std::string& name) {
  EnvConfig c;
  if (name == "goal_task") {
    c.horizon = 100;
    c.distractor_count = 5;
  } else if (name == "push_ball") {
    c.horizon = 200;
    c.distractor_count = 3;
    c.goal_radius = 0.5;
  } else if (name == "reacher") {
    c.horizon = 100;
    c.distractor_count = 0;
    c.goal_radius = 0.2;
    c.terminate_on_success = false;
    c.action_penalty_coef = 1e-4;
  } else {
    throw ConfigError("unknown environment: " + name);
  }
  return c;
}

inline std::unique_ptr<Env> make_env(const std::string& name, const EnvConfig& cfg) {
  if (name == "goal_task") return std::make_unique<GoalTask2D>(cfg);
  if (name == "push_ball") return std::make_unique<PushBall2D>(cfg);
  if (name == "reacher") return std::make_unique<Reacher2Link>(cfg);
  throw ConfigError("unknown environment: " + name);
}

}  // namespace hidio::envs
