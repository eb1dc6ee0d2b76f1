#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fd_oracle.hpp"
#include "hidio/sac/discount.hpp"
#include "hidio/sac/sac_learner.hpp"
#include "sac_oracles.hpp"

using namespace hidio;
using namespace hidio::sac;
using nn::Matrix;

namespace {

SacConfig tiny(std::size_t O, std::size_t A, bool automatic = false) {
  SacConfig c;
  c.obs_dim = O;
  c.action_dim = A;
  c.hidden = {5};
  c.entropy.automatic = automatic;
  return c;
}

Matrix randn(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) { return standard_normal(r, c, rng); }

TransitionBatch random_batch(std::size_t O, std::size_t A, Eigen::Index B, std::mt19937_64& rng) {
  TransitionBatch b;
  b.obs = randn(B, O, rng);
  b.action = randn(B, A, rng).array().tanh().matrix();
  b.reward = randn(B, 1, rng);
  b.next_obs = randn(B, O, rng);
  b.discount = Matrix::Constant(B, 1, 0.9);
  return b;
}

}  // namespace

TEST(TargetEntropy, MinProbabilityFormula) {
  EXPECT_NEAR(target_entropy(2, -1.0, 1.0, 0.2), 2 * (std::log(2.0) + std::log(0.2)), 1e-15);
  EXPECT_NEAR(target_entropy(2, -1.0, 1.0, 0.2), -1.83258, 1e-5);
  EXPECT_NEAR(target_entropy(1, 0.0, 2.0, 0.5), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(target_entropy(4, -1.0, 1.0, 0.2), 2 * target_entropy(2, -1.0, 1.0, 0.2));
  EXPECT_THROW(target_entropy(1, -1.0, 1.0, 1.0), ConfigError);
}

TEST(StepDiscount, HardSoftGeometricAndDone) {
  DiscountSpec hard{DiscountMode::HardWindow, 0.99, 3};
  EXPECT_EQ(step_discount(hard, 0, false), 1.0);
  EXPECT_EQ(step_discount(hard, 1, false), 1.0);
  EXPECT_EQ(step_discount(hard, 2, false), 0.0);
  DiscountSpec soft{DiscountMode::SoftWindow, 0.99, 3};
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(step_discount(soft, k, false), 2.0 / 3.0, 1e-15);
  DiscountSpec geo{DiscountMode::Geometric, 0.97, 1};
  EXPECT_EQ(step_discount(geo, 5, false), 0.97);
  EXPECT_EQ(step_discount(hard, 0, true), 0.0);
  EXPECT_EQ(step_discount(soft, 1, true), 0.0);
  EXPECT_EQ(step_discount(geo, 0, true), 0.0);
  EXPECT_THROW(step_discount(hard, 3, false), UsageError);
}

TEST(StepDiscount, HardMaskForRandomK) {
  for (std::size_t K = 1; K <= 10; ++K) {
    DiscountSpec hard{DiscountMode::HardWindow, 0.99, K};
    for (std::size_t k = 0; k < K; ++k) EXPECT_EQ(step_discount(hard, k, false), k + 1 == K ? 0.0 : 1.0);
  }
}

TEST(Critic, ZeroDiscountTargetIsReward) {
  std::mt19937_64 rng(0);
  nn::ParamStore store;
  SacLearner s(store, "s", tiny(3, 2));
  s.init(store, rng);
  auto b = random_batch(3, 2, 16, rng);
  b.discount.setZero();
  nn::Tape t;
  auto l = s.critic_loss(t, store, b, randn(16, 2, rng));
  EXPECT_EQ(l.target, b.reward);
}

TEST(Critic, TauOneCopiesOnlineParams) {
  std::mt19937_64 rng(1);
  nn::ParamStore store;
  SacConfig c = tiny(3, 2);
  c.tau = 1.0;
  SacLearner s(store, "s", c);
  s.init(store, rng);
  auto b = random_batch(3, 2, 16, rng);
  s.critic_update(store, b, rng);
  auto on = store.values(s.critic_range()), tg = store.values(s.target_range());
  EXPECT_TRUE(std::equal(on.begin(), on.end(), tg.begin()));
}

TEST(Critic, TwinSwapLeavesTargetUnchanged) {
  std::mt19937_64 rng(2);
  nn::ParamStore store;
  SacLearner s(store, "s", tiny(3, 2));
  s.init(store, rng);
  // Make the two target critics differ.
  for (auto& v : store.values(s.q2_target().range(store))) v += 0.3;
  auto b = random_batch(3, 2, 32, rng);
  Matrix noise = randn(32, 2, rng);
  nn::Tape t1;
  Matrix y1 = s.critic_loss(t1, store, b, noise).target;
  auto a = store.values(s.q1_target().range(store));
  auto c = store.values(s.q2_target().range(store));
  std::swap_ranges(a.begin(), a.end(), c.begin());
  nn::Tape t2;
  Matrix y2 = s.critic_loss(t2, store, b, noise).target;
  EXPECT_EQ(y1, y2);
}

TEST(Critic, HardWindowFinalStepsRegressImmediateReward) {
  std::mt19937_64 rng(3);
  nn::ParamStore store;
  SacConfig c = tiny(2, 1);
  c.hidden = {16};
  c.lr = 1e-2;
  SacLearner s(store, "s", c);
  s.init(store, rng);
  DiscountSpec hard{DiscountMode::HardWindow, 0.99, 3};
  TransitionBatch b;
  b.obs = Matrix::Zero(4, 2);
  b.obs(0, 0) = b.obs(1, 1) = 1.0;
  b.obs(2, 0) = b.obs(3, 1) = -1.0;
  b.action = Matrix::Zero(4, 1);
  b.reward = (Matrix(4, 1) << 0.5, -0.25, 1.0, 0.0).finished();
  b.next_obs = b.obs;
  b.discount = Matrix::Constant(4, 1, step_discount(hard, 2, false));
  for (int i = 0; i < 3000; ++i) s.critic_update(store, b, rng);
  auto [q1, q2] = s.q_values(store, b.obs, b.action);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(q1(i, 0), b.reward(i, 0), 1e-2);
    EXPECT_NEAR(q2(i, 0), b.reward(i, 0), 1e-2);
  }
}

TEST(Gradients, CriticActorTemperatureMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    nn::ParamStore store;
    SacLearner s(store, "s", tiny(3, 2, true));
    s.init(store, rng);
    // Move away from the near-zero policy init so every path carries gradient.
    for (auto& v : store.values(s.policy_range(store))) v += 0.2 * randn(1, 1, rng)(0, 0);
    store.values(s.log_alpha_slice())[0] = 0.3;
    auto b = random_batch(3, 2, 8, rng);
    Matrix nn_ = randn(8, 2, rng), an = randn(8, 2, rng);

    auto crit = hidio::testing::check_gradient(store, s.critic_range(), [&](nn::Tape& t, nn::ParamStore& st) {
      return s.critic_loss(t, st, b, nn_).total;
    });
    EXPECT_LE(crit.rel_error, 1e-4) << "critic seed " << seed;

    auto act = hidio::testing::check_gradient(store, s.policy_range(store), [&](nn::Tape& t, nn::ParamStore& st) {
      return s.actor_loss(t, st, b.obs, an).loss;
    });
    EXPECT_LE(act.rel_error, 1e-4) << "actor seed " << seed;

    Matrix lp = s.log_prob(store, b.obs, b.action);
    auto tmp = hidio::testing::check_gradient(store, {s.log_alpha_slice().offset, 1},
                                              [&](nn::Tape& t, nn::ParamStore& st) {
                                                return s.temperature_loss(t, st, lp);
                                              });
    EXPECT_LE(tmp.rel_error, 1e-4) << "temperature seed " << seed;
  }
}

TEST(Actor, BanditPolicyMeanConvergesToOptimum) {
  std::mt19937_64 rng(4);
  nn::ParamStore store;
  SacConfig c = tiny(1, 1);
  c.hidden = {32, 32};
  c.lr = 1e-3;
  c.entropy.alpha = 0.01;
  SacLearner s(store, "s", c);
  s.init(store, rng);
  store.values(store.slice("s.policy.l2.bias"))[0] = 0.8;  // start off-centre
  std::uniform_real_distribution<Real> ua(-1.0, 1.0);
  auto bandit_batch = [&] {
    TransitionBatch b;
    b.obs = Matrix::Ones(128, 1);
    b.next_obs = b.obs;
    b.action.resize(128, 1);
    for (Eigen::Index j = 0; j < 128; ++j) b.action(j, 0) = ua(rng);
    b.reward = -b.action.array().square().matrix();
    b.discount = Matrix::Zero(128, 1);
    return b;
  };
  // Fit the critic to Q(s, a) = -a^2 first, then train the actor against it.
  for (int i = 0; i < 3000; ++i) s.critic_update(store, bandit_batch(), rng);
  for (int i = 0; i < 2000; ++i) {
    auto b = bandit_batch();
    s.critic_update(store, b, rng);
    s.actor_update(store, b.obs, rng);
  }
  Matrix head = s.policy_head(store, Matrix::Ones(1, 1));
  EXPECT_NEAR(head(0, 0), 0.0, 1e-2);
}

TEST(Actor, FixedAlphaNeverChanges) {
  std::mt19937_64 rng(5);
  nn::ParamStore store;
  SacLearner s(store, "s", tiny(3, 2));
  s.init(store, rng);
  EXPECT_DOUBLE_EQ(s.alpha(store), 0.01);
  for (int i = 0; i < 50; ++i) {
    auto b = random_batch(3, 2, 16, rng);
    s.critic_update(store, b, rng);
    auto st = s.actor_update(store, b.obs, rng);
    EXPECT_DOUBLE_EQ(st.alpha, 0.01);
  }
}

TEST(Actor, AutoAlphaStaysPositive) {
  std::mt19937_64 rng(6);
  nn::ParamStore store;
  SacConfig c = tiny(3, 2, true);
  c.lr = 0.5;  // aggressive, to push log alpha far
  SacLearner s(store, "s", c);
  s.init(store, rng);
  for (int i = 0; i < 200; ++i) {
    auto b = random_batch(3, 2, 16, rng);
    auto st = s.actor_update(store, b.obs, rng);
    ASSERT_GT(st.alpha, 0.0);
    ASSERT_TRUE(std::isfinite(st.alpha));
  }
}

TEST(Act, BoundsShapeAndSymmetricInit) {
  std::mt19937_64 rng(7);
  nn::ParamStore store;
  SacLearner sched(store, "sched", tiny(5, 4));
  sched.init(store, rng);
  Vec obs{0.1, -0.2, 0.3, 0.0, 1.0};
  auto det = sched.act(store, std::span<const Real>(obs), true, rng);
  ASSERT_EQ(det.size(), 4u);
  for (Real v : det) EXPECT_LT(std::abs(v), 0.05);
  for (int i = 0; i < 1000; ++i) {
    auto a = sched.act(store, std::span<const Real>(obs), false, rng);
    ASSERT_EQ(a.size(), 4u);
    for (Real v : a) ASSERT_TRUE(v > -1.0 && v < 1.0);
  }
}

TEST(Config, InvalidValuesRejected) {
  SacConfig c = tiny(2, 2);
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = tiny(2, 2, true);
  c.entropy.delta = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  nn::ParamStore store;
  SacLearner s(store, "s", tiny(3, 2));
  std::mt19937_64 rng(0);
  auto b = random_batch(3, 1, 4, rng);
  EXPECT_THROW(s.critic_update(store, b, rng), ConfigError);
}

TEST(Critic, TwoStateMdpMatchesValueIteration) {
  auto r = hidio::testing::run_two_state_sac(0, 5000);
  EXPECT_LE(r.max_error, 0.05);
}
