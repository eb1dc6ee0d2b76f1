#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hidio/envs/goal_task.hpp"

namespace hidio::envs {

/// Push a ball into a goal disc. Observations are absolute positions of the
/// agent, ball, goal and distractors; actions are world-frame velocities.
///
/// Contact is quasi-static: whenever the agent disc overlaps the ball disc
/// the ball is moved along the centre line by the overlap depth.
class PushBall2D : public Env {
 public:
  explicit PushBall2D(EnvConfig cfg) : Env(cfg) {}

  std::string name() const override { return "push_ball"; }
  std::size_t obs_dim() const override { return 6 + 2 * cfg_.distractor_count; }
  std::size_t action_dim() const override { return 2; }

  Vec observe() const override {
    Vec obs{agent_.x, agent_.y, ball_.x, ball_.y, goal_.x, goal_.y};
    for (const auto& d : distractors_) {
      obs.push_back(d.x);
      obs.push_back(d.y);
    }
    return obs;
  }

  Vec raw_state() const override { return observe(); }

  void set_state(Point agent, Point ball, Point goal, std::vector<Point> distractors) {
    agent_ = agent;
    ball_ = ball;
    goal_ = goal;
    distractors_ = std::move(distractors);
    distractors_.resize(cfg_.distractor_count, Point{1e3, 1e3});
    steps_ = 0;
    done_ = false;
    initialised_ = true;
  }

  Point agent() const { return agent_; }
  Point ball() const { return ball_; }
  Point goal() const { return goal_; }

 protected:
  void place_objects() override {
    const Real w = cfg_.arena_half_width;
    const Real margin = cfg_.ball_radius;
    agent_ = {uniform(-w, w), uniform(-w, w)};
    const Real contact = cfg_.agent_radius + cfg_.ball_radius;
    do {
      const Real ang = uniform(-std::numbers::pi, std::numbers::pi);
      const Real rad = uniform(contact, std::max(cfg_.ball_spawn_radius, contact + 1e-3));
      ball_ = {agent_.x + rad * std::cos(ang), agent_.y + rad * std::sin(ang)};
    } while (std::abs(ball_.x) > w - margin || std::abs(ball_.y) > w - margin);
    do {
      goal_ = {uniform(-w, w), uniform(-w, w)};
    } while (distance(goal_, ball_) <= cfg_.goal_radius + cfg_.ball_radius);
    distractors_.clear();
    for (std::size_t i = 0; i < cfg_.distractor_count; ++i) {
      Point d;
      do {
        d = {uniform(-w, w), uniform(-w, w)};
      } while (distance(d, agent_) <= cfg_.distractor_penalty_radius);
      distractors_.push_back(d);
    }
  }

  StepResult transition(const Vec& a) override {
    const Real step = cfg_.max_speed * cfg_.dt;
    const Real w = cfg_.arena_half_width;
    agent_.x = std::clamp(agent_.x + step * a[0], -w, w);
    agent_.y = std::clamp(agent_.y + step * a[1], -w, w);

    const Real contact = cfg_.agent_radius + cfg_.ball_radius;
    const Real d = distance(agent_, ball_);
    if (d < contact) {
      Real ux = 1.0, uy = 0.0;
      if (d > 1e-12) {
        ux = (ball_.x - agent_.x) / d;
        uy = (ball_.y - agent_.y) / d;
      }
      const Real depth = contact - d;
      const Real lim = w - cfg_.ball_radius;
      ball_.x = std::clamp(ball_.x + depth * ux, -lim, lim);
      ball_.y = std::clamp(ball_.y + depth * uy, -lim, lim);
    }

    StepResult r;
    if (distance(ball_, goal_) < cfg_.goal_radius) {
      r.reward = 1.0;
      r.success = true;
      r.done = cfg_.terminate_on_success;
    } else if (std::any_of(distractors_.begin(), distractors_.end(), [&](const Point& p) {
                 return distance(p, agent_) < cfg_.distractor_penalty_radius;
               })) {
      r.reward = -0.5;
    }
    return r;
  }

 private:
  Point agent_;
  Point ball_;
  Point goal_;
  std::vector<Point> distractors_;
};

}  // namespace hidio::envs
