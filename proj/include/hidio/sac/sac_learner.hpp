#pragma once

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/nn/adam.hpp"
#include "hidio/nn/mlp.hpp"
#include "hidio/nn/param_store.hpp"
#include "hidio/nn/squashed_gaussian.hpp"
#include "hidio/nn/tape.hpp"
#include "hidio/sac/discount.hpp"

namespace hidio::sac {

using nn::Matrix;
using nn::ParamStore;
using nn::Tape;
using nn::Var;
using Vec = std::vector<Real>;

struct EntropyConfig {
  bool automatic = false;
  Real alpha = 0.01;          // fixed-mode coefficient
  Real delta = 0.2;           // auto mode: target entropy min prob
  Real initial_alpha = 1.0;   // auto mode starting value
};

struct SacConfig {
  std::size_t obs_dim = 1;
  std::size_t action_dim = 1;
  std::vector<std::size_t> hidden{64, 64};
  Real lr = 5e-4;
  Real tau = 0.05;  // online weight in target <- (1 - tau) target + tau online
  std::size_t target_update_interval = 1;
  EntropyConfig entropy;
  Real action_low = -1.0;
  Real action_high = 1.0;
  Real policy_last_layer_scale = 0.01;

  void validate() const {
    if (obs_dim < 1 || action_dim < 1) throw ConfigError("SAC obs/action dims must be >= 1");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("polyak tau must lie in (0, 1]");
    if (target_update_interval < 1) throw ConfigError("target update interval must be >= 1");
    if (entropy.automatic) {
      if (!(entropy.delta > 0.0 && entropy.delta < 1.0)) throw ConfigError("entropy delta must lie in (0, 1)");
      if (!(entropy.initial_alpha > 0.0)) throw ConfigError("initial alpha must be > 0");
    } else if (!(entropy.alpha > 0.0)) {
      throw ConfigError("entropy alpha must be > 0");
    }
    if (!(lr > 0.0)) throw ConfigError("learning rate must be > 0");
  }
};

// Rows are transitions; reward and discount are (B x 1).
struct TransitionBatch {
  Matrix obs;
  Matrix action;
  Matrix reward;
  Matrix next_obs;
  Matrix discount;

  Eigen::Index size() const { return obs.rows(); }
};

struct CriticStats {
  Real q1_loss = 0.0;
  Real q2_loss = 0.0;
  Real q_mean = 0.0;
  Real target_mean = 0.0;
};

struct ActorStats {
  Real actor_loss = 0.0;
  Real alpha_loss = 0.0;
  Real alpha = 0.0;
  Real log_prob_mean = 0.0;
};

struct CriticLoss {
  Var total;
  Var q1_loss;
  Var q2_loss;
  Matrix target;
  Matrix q1;
};

struct ActorLoss {
  Var loss;
  Matrix log_prob;  // (B x 1), detached
};

template <typename Rng>
Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<Real> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

/// Soft actor-critic over a squashed-Gaussian policy with twin Q networks,
/// polyak-averaged targets and a fixed or automatically tuned temperature.
/// Parameters live in a caller-owned ParamStore under `prefix`.
class SacLearner {
 public:
  SacLearner() = default;

  SacLearner(ParamStore& store, const std::string& prefix, SacConfig cfg) : cfg_(std::move(cfg)), prefix_(prefix) {
    cfg_.validate();
    const std::size_t O = cfg_.obs_dim, A = cfg_.action_dim;
    policy_ = nn::Mlp(store, prefix + ".policy", {O, cfg_.hidden, 2 * A});
    q1_ = nn::Mlp(store, prefix + ".q1", {O + A, cfg_.hidden, 1});
    q2_ = nn::Mlp(store, prefix + ".q2", {O + A, cfg_.hidden, 1});
    q1_target_ = nn::Mlp(store, prefix + ".q1_target", {O + A, cfg_.hidden, 1});
    q2_target_ = nn::Mlp(store, prefix + ".q2_target", {O + A, cfg_.hidden, 1});
    log_alpha_ = store.add(prefix + ".log_alpha", {1, 1});

    const auto r1 = q1_.range(store), r2 = q2_.range(store);
    if (r1.end() != r2.offset) throw InternalError("twin critics not contiguous");
    critic_range_ = {r1.offset, r1.size + r2.size};
    const auto t1 = q1_target_.range(store), t2 = q2_target_.range(store);
    target_range_ = {t1.offset, t1.size + t2.size};

    policy_opt_ = nn::Adam(policy_.range(store), {cfg_.lr});
    critic_opt_ = nn::Adam(critic_range_, {cfg_.lr});
    alpha_opt_ = nn::Adam({log_alpha_.offset, 1}, {cfg_.lr});
    target_entropy_ = target_entropy(cfg_.action_dim, cfg_.action_low, cfg_.action_high, cfg_.entropy.delta);
  }

  template <typename Rng>
  void init(ParamStore& store, Rng& rng) const {
    policy_.init(store, rng, cfg_.policy_last_layer_scale);
    q1_.init(store, rng);
    q2_.init(store, rng);
    store.polyak(critic_range_, target_range_, 1.0);
    const Real a0 = cfg_.entropy.automatic ? cfg_.entropy.initial_alpha : cfg_.entropy.alpha;
    store.values(log_alpha_)[0] = std::log(a0);
  }

  const SacConfig& config() const { return cfg_; }
  const std::string& prefix() const { return prefix_; }
  const nn::Mlp& policy() const { return policy_; }
  const nn::Mlp& q1() const { return q1_; }
  const nn::Mlp& q2() const { return q2_; }
  const nn::Mlp& q1_target() const { return q1_target_; }
  const nn::Mlp& q2_target() const { return q2_target_; }
  const nn::SliceInfo& log_alpha_slice() const { return log_alpha_; }
  nn::ParamRange policy_range(const ParamStore& store) const { return policy_.range(store); }
  nn::ParamRange critic_range() const { return critic_range_; }
  nn::ParamRange target_range() const { return target_range_; }
  Real target_entropy_value() const { return target_entropy_; }
  std::size_t critic_updates() const { return critic_updates_; }

  Real alpha(const ParamStore& store) const { return std::exp(store.values(log_alpha_)[0]); }

  Matrix policy_head(const ParamStore& store, const Matrix& obs) const { return policy_.forward(store, obs); }

  template <typename Rng>
  Matrix act(const ParamStore& store, const Matrix& obs, bool deterministic, Rng& rng) const {
    Matrix head = policy_head(store, obs);
    if (deterministic) return nn::deterministic_action(head);
    Matrix noise = standard_normal(obs.rows(), static_cast<Eigen::Index>(cfg_.action_dim), rng);
    Tape tape;
    auto s = nn::squashed_gaussian(tape.constant(std::move(head)), noise);
    return s.action.value();
  }

  template <typename Rng>
  Vec act(const ParamStore& store, std::span<const Real> obs, bool deterministic, Rng& rng) const {
    Matrix x = Eigen::Map<const Matrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
    Matrix a = act(store, x, deterministic, rng);
    return {a.data(), a.data() + a.size()};
  }

  // Stochastic action together with its log-probability.
  template <typename Rng>
  std::pair<Vec, Real> sample(const ParamStore& store, std::span<const Real> obs, Rng& rng) const {
    Matrix x = Eigen::Map<const Matrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
    Matrix noise = standard_normal(1, static_cast<Eigen::Index>(cfg_.action_dim), rng);
    Tape tape;
    auto s = nn::squashed_gaussian(tape.constant(policy_head(store, x)), noise);
    const Matrix& a = s.action.value();
    return {Vec(a.data(), a.data() + a.size()), s.log_prob.value()(0, 0)};
  }

  // log pi(action | obs) for stored actions, (B x 1).
  Matrix log_prob(const ParamStore& store, const Matrix& obs, const Matrix& actions) const {
    Tape tape;
    Var head = tape.constant(policy_head(store, obs));
    return nn::squashed_log_prob(head, actions).value();
  }

  std::pair<Matrix, Matrix> q_values(const ParamStore& store, const Matrix& obs, const Matrix& actions) const {
    Matrix x(obs.rows(), obs.cols() + actions.cols());
    x << obs, actions;
    return {q1_.forward(store, x), q2_.forward(store, x)};
  }

  // Sum of both critics' mean-squared TD errors against
  // y = r + eta * (min(Q1', Q2')(s', a') - alpha * log pi(a' | s')), a' drawn with `next_noise`.
  CriticLoss critic_loss(Tape& tape, ParamStore& store, const TransitionBatch& b, const Matrix& next_noise) const {
    check_batch(b);
    const Real alpha_v = alpha(store);
    Matrix y;
    {
      Tape inner;
      Var next_head = policy_.forward(inner, store, inner.constant(b.next_obs), false);
      auto s = nn::squashed_gaussian(next_head, next_noise);
      Var xn = nn::ops::concat_cols({inner.constant(b.next_obs), s.action});
      Var t1 = q1_target_.forward(inner, store, xn, false);
      Var t2 = q2_target_.forward(inner, store, xn, false);
      Matrix soft = t1.value().cwiseMin(t2.value()) - alpha_v * s.log_prob.value();
      y = b.reward + b.discount.cwiseProduct(soft);
    }
    Var x = nn::ops::concat_cols({tape.constant(b.obs), tape.constant(b.action)});
    Var q1 = q1_.forward(tape, store, x);
    Var q2 = q2_.forward(tape, store, x);
    Var yv = tape.constant(y);
    CriticLoss out;
    out.q1_loss = nn::ops::mean(nn::ops::square(nn::ops::sub(q1, yv)));
    out.q2_loss = nn::ops::mean(nn::ops::square(nn::ops::sub(q2, yv)));
    out.total = nn::ops::add(out.q1_loss, out.q2_loss);
    out.target = std::move(y);
    out.q1 = q1.value();
    return out;
  }

  // mean[alpha * log pi(a|s) - min(Q1, Q2)(s, a)] with a reparameterised by `noise`.
  // Critic parameters are read but receive no gradient.
  ActorLoss actor_loss(Tape& tape, ParamStore& store, const Matrix& obs, const Matrix& noise) const {
    Var xo = tape.constant(obs);
    Var head = policy_.forward(tape, store, xo);
    auto s = nn::squashed_gaussian(head, noise);
    Var x = nn::ops::concat_cols({xo, s.action});
    Var q = nn::ops::minimum(q1_.forward(tape, store, x, false), q2_.forward(tape, store, x, false));
    Var alpha_v = tape.constant(Matrix::Constant(1, 1, alpha(store)));
    ActorLoss out;
    out.loss = nn::ops::mean(nn::ops::sub(nn::ops::mul(s.log_prob, alpha_v), q));
    out.log_prob = s.log_prob.value();
    return out;
  }

  // -mean(log_alpha * (log pi + target_entropy)) with log pi treated as data.
  Var temperature_loss(Tape& tape, ParamStore& store, const Matrix& log_prob) const {
    Var la = tape.param(store, log_alpha_);
    Matrix c = Matrix::Constant(1, 1, (log_prob.array() + target_entropy_).mean());
    return nn::ops::neg(nn::ops::mul(la, tape.constant(c)));
  }

  template <typename Rng>
  CriticStats critic_update(ParamStore& store, const TransitionBatch& b, Rng& rng) {
    Matrix noise = standard_normal(b.size(), static_cast<Eigen::Index>(cfg_.action_dim), rng);
    Tape tape;
    CriticLoss l = critic_loss(tape, store, b, noise);
    store.zero_grads(critic_range_);
    tape.backward(l.total);
    critic_opt_.step(store);
    ++critic_updates_;
    if (critic_updates_ % cfg_.target_update_interval == 0) update_targets(store);
    return {l.q1_loss.scalar(), l.q2_loss.scalar(), l.q1.mean(), l.target.mean()};
  }

  template <typename Rng>
  ActorStats actor_update(ParamStore& store, const Matrix& obs, Rng& rng) {
    Matrix noise = standard_normal(obs.rows(), static_cast<Eigen::Index>(cfg_.action_dim), rng);
    ActorStats st;
    Matrix log_prob;
    {
      Tape tape;
      ActorLoss l = actor_loss(tape, store, obs, noise);
      store.zero_grads(policy_opt_.range());
      tape.backward(l.loss);
      policy_opt_.step(store);
      st.actor_loss = l.loss.scalar();
      log_prob = std::move(l.log_prob);
    }
    st.log_prob_mean = log_prob.mean();
    if (cfg_.entropy.automatic) {
      Tape tape;
      Var tl = temperature_loss(tape, store, log_prob);
      store.zero_grads(alpha_opt_.range());
      tape.backward(tl);
      alpha_opt_.step(store);
      st.alpha_loss = tl.scalar();
    }
    st.alpha = alpha(store);
    return st;
  }

  void update_targets(ParamStore& store) const { store.polyak(critic_range_, target_range_, cfg_.tau); }

 private:
  void check_batch(const TransitionBatch& b) const {
    const auto B = b.obs.rows();
    if (b.obs.cols() != static_cast<Eigen::Index>(cfg_.obs_dim) ||
        b.next_obs.cols() != static_cast<Eigen::Index>(cfg_.obs_dim) ||
        b.action.cols() != static_cast<Eigen::Index>(cfg_.action_dim))
      throw ConfigError(prefix_ + ": transition batch width mismatch");
    if (b.action.rows() != B || b.reward.rows() != B || b.next_obs.rows() != B || b.discount.rows() != B ||
        b.reward.cols() != 1 || b.discount.cols() != 1)
      throw ConfigError(prefix_ + ": transition batch row mismatch");
  }

  SacConfig cfg_;
  std::string prefix_;
  nn::Mlp policy_, q1_, q2_, q1_target_, q2_target_;
  nn::SliceInfo log_alpha_;
  nn::ParamRange critic_range_, target_range_;
  nn::Adam policy_opt_, critic_opt_, alpha_opt_;
  Real target_entropy_ = 0.0;
  std::size_t critic_updates_ = 0;
};

}  // namespace hidio::sac
