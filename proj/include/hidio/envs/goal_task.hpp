#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hidio/envs/env.hpp"

namespace hidio::envs {

struct Point {
  Real x = 0.0;
  Real y = 0.0;
};

inline Real distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Navigate a point robot to a goal among distractors.
///
/// The robot is holonomic with a fixed per-episode heading; actions are body
/// frame velocities and the observation is egocentric: for the goal its
/// offset and distance, for each distractor its offset.
///
/// Task reward: +1 on reaching the goal, -1 when the goal gets farther than
/// too_far_radius (episode ends), -0.5 on any step spent within
/// distractor_penalty_radius of a distractor, 0 otherwise.
class GoalTask2D : public Env {
 public:
  explicit GoalTask2D(EnvConfig cfg) : Env(cfg) {}

  std::string name() const override { return "goal_task"; }
  std::size_t obs_dim() const override { return 3 + 2 * cfg_.distractor_count; }
  std::size_t action_dim() const override { return 2; }

  Vec observe() const override {
    Vec obs;
    obs.reserve(obs_dim());
    const Point g = to_body(goal_);
    obs.push_back(g.x);
    obs.push_back(g.y);
    obs.push_back(distance(agent_, goal_));
    for (const auto& d : distractors_) {
      const Point o = to_body(d);
      obs.push_back(o.x);
      obs.push_back(o.y);
    }
    return obs;
  }

  Vec raw_state() const override {
    Vec s{agent_.x, agent_.y, heading_, goal_.x, goal_.y};
    for (const auto& d : distractors_) {
      s.push_back(d.x);
      s.push_back(d.y);
    }
    return s;
  }

  // Direct placement for tests and scripted scenarios.
  void set_state(Point agent, Real heading, Point goal, std::vector<Point> distractors) {
    agent_ = agent;
    heading_ = heading;
    goal_ = goal;
    distractors_ = std::move(distractors);
    distractors_.resize(cfg_.distractor_count, Point{1e3, 1e3});
    steps_ = 0;
    done_ = false;
    initialised_ = true;
  }

  Point agent() const { return agent_; }
  Point goal() const { return goal_; }
  Real heading() const { return heading_; }
  const std::vector<Point>& distractors() const { return distractors_; }

 protected:
  void place_objects() override {
    const Real w = cfg_.arena_half_width;
    agent_ = {uniform(-w, w), uniform(-w, w)};
    heading_ = uniform(-std::numbers::pi, std::numbers::pi);
    // Rejection keeps the episode from starting already solved or already lost.
    do {
      goal_ = {uniform(-w, w), uniform(-w, w)};
    } while (distance(goal_, agent_) <= cfg_.goal_radius || distance(goal_, agent_) >= cfg_.too_far_radius);
    distractors_.clear();
    for (std::size_t i = 0; i < cfg_.distractor_count; ++i) {
      Point d;
      do {
        d = {uniform(-w, w), uniform(-w, w)};
      } while (distance(d, agent_) <= cfg_.distractor_penalty_radius ||
               distance(d, goal_) <= cfg_.goal_radius + cfg_.distractor_penalty_radius);
      distractors_.push_back(d);
    }
  }

  StepResult transition(const Vec& a) override {
    const Real step = cfg_.max_speed * cfg_.dt;
    const Real c = std::cos(heading_), s = std::sin(heading_);
    const Real w = cfg_.arena_half_width;
    agent_.x = std::clamp(agent_.x + step * (c * a[0] - s * a[1]), -w, w);
    agent_.y = std::clamp(agent_.y + step * (s * a[0] + c * a[1]), -w, w);

    StepResult r;
    const Real dg = distance(agent_, goal_);
    if (dg < cfg_.goal_radius) {
      r.reward = 1.0;
      r.success = true;
      r.done = cfg_.terminate_on_success;
    } else if (dg > cfg_.too_far_radius) {
      r.reward = -1.0;
      r.done = true;
    } else if (near_distractor()) {
      r.reward = -0.5;
    }
    return r;
  }

 private:
  bool near_distractor() const {
    return std::any_of(distractors_.begin(), distractors_.end(),
                       [&](const Point& d) { return distance(d, agent_) < cfg_.distractor_penalty_radius; });
  }

  Point to_body(Point p) const {
    const Real dx = p.x - agent_.x, dy = p.y - agent_.y;
    const Real c = std::cos(heading_), s = std::sin(heading_);
    return {c * dx + s * dy, -s * dx + c * dy};
  }

  Point agent_;
  Real heading_ = 0.0;
  Point goal_;
  std::vector<Point> distractors_;
};

}  // namespace hidio::envs
