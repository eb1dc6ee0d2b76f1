#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hidio/errors.hpp"

namespace hidio::envs {

using Real = double;
using Vec = std::vector<Real>;

struct EnvConfig {
  Real arena_half_width = 4.0;
  Real goal_radius = 0.5;
  std::size_t distractor_count = 5;
  Real distractor_penalty_radius = 0.3;
  Real too_far_radius = 6.0;
  Real action_penalty_coef = 0.01;
  std::size_t horizon = 100;
  bool terminate_on_success = true;
  std::uint64_t seed = 0;

  // Point-mass kinematics: displacement per step = max_speed * dt * action.
  Real dt = 0.1;
  Real max_speed = 1.0;

  // PushBall2D.
  Real agent_radius = 0.2;
  Real ball_radius = 0.2;
  Real ball_spawn_radius = 1.0;

  // Reacher2Link.
  Real link_length = 1.0;
  Real max_joint_speed = 10.0;  // rad per unit time at |action| = 1

  void validate() const {
    if (arena_half_width <= 0 || goal_radius <= 0 || distractor_penalty_radius <= 0 || too_far_radius <= 0)
      throw ConfigError("environment radii and arena size must be > 0");
    if (horizon < 1) throw ConfigError("environment horizon must be >= 1");
    if (dt <= 0 || max_speed <= 0) throw ConfigError("dt and max_speed must be > 0");
    if (agent_radius <= 0 || ball_radius <= 0 || ball_spawn_radius <= 0 || link_length <= 0 || max_joint_speed <= 0)
      throw ConfigError("environment body sizes must be > 0");
  }
};

struct StepResult {
  Vec next_state;
  Real reward = 0.0;
  Real task_reward = 0.0;  // reward before the action penalty
  bool done = false;
  bool success = false;
  // Episode ended only because the horizon was reached (no true termination).
  bool truncated = false;
};

/// Single-threaded environment with a fixed horizon and continuous actions in [-1, 1]^A.
class Env {
 public:
  explicit Env(EnvConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }
  virtual ~Env() = default;

  virtual std::string name() const = 0;
  virtual std::size_t obs_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual Vec observe() const = 0;
  // Absolute positions of every object, for trajectory dumps.
  virtual Vec raw_state() const = 0;

  Vec reset() {
    steps_ = 0;
    done_ = false;
    initialised_ = true;
    place_objects();
    return observe();
  }

  StepResult step(std::span<const Real> action) {
    if (!initialised_) throw UsageError(name() + ": step before reset");
    if (done_) throw UsageError(name() + ": step after episode end");
    if (action.size() != action_dim()) throw ConfigError(name() + ": wrong action dimension");
    Vec a(action.begin(), action.end());
    Real sq = 0.0;
    for (auto& v : a) {
      v = v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
      sq += v * v;
    }
    ++steps_;
    StepResult r = transition(a);
    r.task_reward = r.reward;
    r.reward -= cfg_.action_penalty_coef * sq;
    if (!r.done && steps_ >= cfg_.horizon) {
      r.done = true;
      r.truncated = true;
    }
    done_ = r.done;
    r.next_state = observe();
    return r;
  }

  std::size_t horizon() const { return cfg_.horizon; }
  std::size_t steps() const { return steps_; }
  bool done() const { return done_; }
  const EnvConfig& config() const { return cfg_; }

 protected:
  virtual void place_objects() = 0;
  // Applies a clamped action; returns task reward, done and success (no penalty, no horizon).
  virtual StepResult transition(const Vec& action) = 0;

  Real uniform(Real lo, Real hi) { return std::uniform_real_distribution<Real>(lo, hi)(rng_); }

  EnvConfig cfg_;
  std::mt19937_64 rng_;
  std::size_t steps_ = 0;
  bool done_ = false;
  bool initialised_ = false;
};

}  // namespace hidio::envs
