#include <gtest/gtest.h>

#include <random>

#include "hidio/envs/factory.hpp"
#include "hidio/hierarchy/option_window.hpp"

using namespace hidio;
using namespace hidio::hierarchy;

namespace {

StepRecord rec(std::size_t k, Vec s, Vec a, Vec ns, bool done = false) {
  StepRecord r;
  r.k = k;
  r.state = std::move(s);
  r.action = std::move(a);
  r.next_state = std::move(ns);
  r.done = done;
  return r;
}

OptionWindow chain(std::size_t K, std::size_t n, bool done_last = false) {
  OptionWindow w(0, OptionVector{{0.5, -0.5}}, {0.0, 0.0}, K);
  for (std::size_t k = 0; k < n; ++k) {
    const Real x = static_cast<Real>(k);
    w.append_step(rec(k, {x, x}, {x + 0.5, -x}, {x + 1, x + 1}, done_last && k + 1 == n));
  }
  return w;
}

}  // namespace

TEST(WindowCount, CeilingDivision) {
  EXPECT_EQ(window_count(100, 3), 34u);
  EXPECT_EQ(window_count(100, 100), 1u);
  EXPECT_EQ(window_count(200, 5), 40u);
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<std::size_t> T(1, 1000), K(1, 50);
  for (int i = 0; i < 100; ++i) {
    const std::size_t t = T(rng), k = K(rng);
    std::size_t h = 0, covered = 0;
    while (covered < t) covered += k, ++h;  // counting oracle
    EXPECT_EQ(window_count(t, k), h);
  }
}

TEST(OptionWindow, FullAfterKSteps) {
  auto w = chain(3, 3);
  EXPECT_TRUE(w.closed());
  EXPECT_TRUE(w.full());
  EXPECT_EQ(w.valid_len(), 3u);
  EXPECT_EQ(w.boundary_state(), w.steps()[2].next_state);
  EXPECT_THROW(w.append_step(rec(3, {3, 3}, {0, 0}, {4, 4})), UsageError);
}

TEST(OptionWindow, DoneClosesEarly) {
  auto w = chain(3, 2, true);
  EXPECT_TRUE(w.closed());
  EXPECT_FALSE(w.full());
  EXPECT_EQ(w.valid_len(), 2u);
  EXPECT_EQ(w.boundary_state(), w.steps()[1].next_state);
}

TEST(OptionWindow, ChainViolationRejected) {
  auto w = chain(3, 1);
  EXPECT_THROW(w.append_step(rec(1, {9, 9}, {0, 0}, {1, 1})), InternalError);
  EXPECT_THROW(w.append_step(rec(2, {1, 1}, {0, 0}, {1, 1})), InternalError);
  OptionWindow fresh(0, OptionVector{{0.0}}, {1.0}, 2);
  EXPECT_THROW(fresh.append_step(rec(0, {2.0}, {0.0}, {1.0})), InternalError);
}

TEST(OptionWindow, OpenWindowHasNoBoundary) {
  auto w = chain(3, 2);
  EXPECT_THROW(w.boundary_state(), UsageError);
  EXPECT_THROW(OptionWindow(0, OptionVector{{0.0}}, {0.0}, 0), ConfigError);
}

TEST(SubTrajectoryView, FirstStepHasOneSlot) {
  auto w = chain(3, 3);
  auto v = w.view_at(0);
  EXPECT_EQ(v.prefix_len, 1u);
  EXPECT_EQ(v.states[0], w.steps()[0].next_state);
  EXPECT_EQ(v.actions[0], w.steps()[0].action);
  for (std::size_t j = 1; j < 3; ++j) {
    EXPECT_EQ(v.states[j], Vec(2, 0.0));
    EXPECT_EQ(v.actions[j], Vec(2, 0.0));
  }
  EXPECT_EQ(v.s0, w.initial_state());
}

TEST(SubTrajectoryView, PaddingAfterPrefix) {
  auto w = chain(3, 3);
  auto v = w.view_at(1);
  EXPECT_EQ(v.states[1], w.steps()[1].next_state);
  EXPECT_EQ(v.states[2], Vec(2, 0.0));
  EXPECT_EQ(v.actions[2], Vec(2, 0.0));
}

TEST(SubTrajectoryView, FullWindowHasNoPadding) {
  auto w = chain(3, 3);
  auto v = w.view_at(2);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(v.states[j], w.steps()[j].next_state);
    EXPECT_EQ(v.actions[j], w.steps()[j].action);
  }
}

TEST(SubTrajectoryView, OutOfRangeAndPurity) {
  auto w = chain(3, 2, true);
  EXPECT_THROW(w.view_at(2), UsageError);
  EXPECT_EQ(w.view_at(1), w.view_at(1));
}

TEST(WorkerInput, DefaultAndHistoryLayouts) {
  auto w = chain(3, 3);
  auto plain = worker_input(w, 1, 2, false);
  EXPECT_EQ(plain, (Vec{1, 1, 0.5, -0.5}));
  auto hist = worker_input(w, 1, 2, true);
  ASSERT_EQ(hist.size(), worker_input_dim(2, 2, 2, 3, true));
  // States s0, s1 then a pad slot, action a0 then a pad slot, then u.
  EXPECT_EQ(hist, (Vec{0, 0, 1, 1, 0, 0, 0.5, 0, 0, 0, 0.5, -0.5}));
  auto boot = next_worker_input(w, 2, 2, true);
  EXPECT_EQ(boot, fresh_worker_input(w.steps()[2].next_state, w.option(), 3, 2, true));
  EXPECT_EQ(next_worker_input(w, 0, 2, false), worker_input(w, 1, 2, false));
}

// Collects real episodes with windows of random lengths and checks partition
// and boundary identities on every adjacent pair.
TEST(OptionWindow, EpisodesPartitionIntoChainedWindows) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<Real> ua(-1.0, 1.0);
  envs::EnvConfig cfg = envs::default_config("goal_task");
  cfg.seed = 1;
  envs::GoalTask2D env(cfg);
  std::size_t violations = 0;
  for (int ep = 0; ep < 1000; ++ep) {
    const std::size_t K = 1 + ep % 5;
    Vec obs = env.reset();
    std::vector<OptionWindow> ws;
    std::size_t len = 0;
    while (!env.done()) {
      if (ws.empty() || ws.back().closed()) ws.emplace_back(ws.size(), OptionVector{{ua(rng)}}, obs, K);
      Vec a{ua(rng), ua(rng)};
      auto r = env.step(a);
      ws.back().append_step(rec(ws.back().valid_len(), obs, a, r.next_state, r.done));
      obs = r.next_state;
      ++len;
    }
    std::size_t total = 0;
    for (std::size_t h = 0; h < ws.size(); ++h) {
      total += ws[h].valid_len();
      if (h + 1 < ws.size() && ws[h].boundary_state() != ws[h + 1].initial_state()) ++violations;
      if (h + 1 < ws.size() && !ws[h].full()) ++violations;
    }
    if (total != len || ws.size() != window_count(len, K)) ++violations;
  }
  EXPECT_EQ(violations, 0u);
}
