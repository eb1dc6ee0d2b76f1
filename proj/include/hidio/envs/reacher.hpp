#pragma once

#include <cmath>
#include <numbers>

#include "hidio/envs/goal_task.hpp"

namespace hidio::envs {

/// Planar two-link arm with joint-velocity control. Episodes always run the
/// full horizon; an episode succeeds only if the end effector is inside the
/// goal disc on the final step. Task reward is 1 on every step spent inside.
class Reacher2Link : public Env {
 public:
  explicit Reacher2Link(EnvConfig cfg) : Env(cfg) {}

  std::string name() const override { return "reacher"; }
  std::size_t obs_dim() const override { return 8; }
  std::size_t action_dim() const override { return 2; }

  Vec observe() const override {
    return {std::sin(q_[0]), std::cos(q_[0]), std::sin(q_[1]), std::cos(q_[1]), qd_[0], qd_[1], goal_.x, goal_.y};
  }

  Vec raw_state() const override {
    const Point e = end_effector();
    return {q_[0], q_[1], qd_[0], qd_[1], e.x, e.y, goal_.x, goal_.y};
  }

  Point end_effector() const {
    const Real l = cfg_.link_length;
    return {l * std::cos(q_[0]) + l * std::cos(q_[0] + q_[1]), l * std::sin(q_[0]) + l * std::sin(q_[0] + q_[1])};
  }

  void set_state(Real q0, Real q1, Point goal) {
    q_[0] = q0;
    q_[1] = q1;
    qd_[0] = qd_[1] = 0.0;
    goal_ = goal;
    steps_ = 0;
    done_ = false;
    initialised_ = true;
  }

  Point goal() const { return goal_; }

 protected:
  void place_objects() override {
    q_[0] = uniform(-std::numbers::pi, std::numbers::pi);
    q_[1] = uniform(-std::numbers::pi, std::numbers::pi);
    qd_[0] = qd_[1] = 0.0;
    const Real l = cfg_.link_length;
    do {
      const Real ang = uniform(-std::numbers::pi, std::numbers::pi);
      const Real rad = uniform(0.25 * l, 1.9 * l);
      goal_ = {rad * std::cos(ang), rad * std::sin(ang)};
    } while (distance(end_effector(), goal_) < 2.0 * cfg_.goal_radius);
  }

  StepResult transition(const Vec& a) override {
    for (int j = 0; j < 2; ++j) {
      qd_[j] = cfg_.max_joint_speed * a[static_cast<std::size_t>(j)];
      q_[j] = std::remainder(q_[j] + cfg_.dt * qd_[j], 2.0 * std::numbers::pi);
    }
    StepResult r;
    const bool inside = distance(end_effector(), goal_) < cfg_.goal_radius;
    r.reward = inside ? 1.0 : 0.0;
    r.success = inside && steps_ == cfg_.horizon;
    return r;
  }

 private:
  Real q_[2] = {0.0, 0.0};
  Real qd_[2] = {0.0, 0.0};
  Point goal_;
};

}  // namespace hidio::envs
