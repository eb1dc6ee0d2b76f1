#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <random>

#include "fd_oracle.hpp"
#include "hidio/discriminator/discriminator.hpp"
#include "hidio/sac/sac_learner.hpp"

namespace hidio::testing {

// Smallest |pre-activation| over the hidden (ReLU) units of an MLP stored under
// `prefix` with `layers` linear layers, for every row of `x`.
inline Real relu_margin(nn::ParamStore& store, const std::string& prefix, std::size_t layers, const nn::Matrix& x) {
  Real margin = std::numeric_limits<Real>::infinity();
  nn::Matrix h = x;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const std::string base = prefix + ".l" + std::to_string(l);
    const auto ws = store.slice(base + ".weight"), bs = store.slice(base + ".bias");
    Eigen::Map<const nn::Matrix> W(store.values(ws).data(), ws.rows(), ws.cols());
    Eigen::Map<const nn::Matrix> b(store.values(bs).data(), 1, bs.cols());
    nn::Matrix pre = (h * W.transpose()).rowwise() + b.row(0);
    margin = std::min(margin, pre.cwiseAbs().minCoeff());
    h = pre.cwiseMax(0.0);
  }
  return margin;
}

struct LossGradErrors {
  Real actor = 0.0;
  Real critic = 0.0;
  Real temperature = 0.0;
  Real discriminator = 0.0;
  Real worst() const { return std::max({actor, critic, temperature, discriminator}); }
};

// Finite-difference relative errors of every learner loss for one seed, on
// random batches and parameters moved away from the near-zero policy init.
inline LossGradErrors loss_gradient_errors(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LossGradErrors out;
  const std::size_t O = 3, A = 2;
  const Eigen::Index B = 8;
  {
    nn::ParamStore store;
    sac::SacConfig c;
    c.obs_dim = O;
    c.action_dim = A;
    c.hidden = {5};
    c.entropy.automatic = true;
    sac::SacLearner s(store, "s", c);
    s.init(store, rng);
    std::normal_distribution<Real> n(0.0, 1.0);
    for (auto& v : store.values(s.policy_range(store))) v += 0.2 * n(rng);
    store.values(s.log_alpha_slice())[0] = 0.3;
    sac::TransitionBatch b;
    b.obs = sac::standard_normal(B, O, rng);
    b.action = sac::standard_normal(B, A, rng).array().tanh().matrix();
    b.reward = sac::standard_normal(B, 1, rng);
    b.next_obs = sac::standard_normal(B, O, rng);
    b.discount = nn::Matrix::Constant(B, 1, 0.9);
    nn::Matrix next_noise = sac::standard_normal(B, A, rng), act_noise = sac::standard_normal(B, A, rng);
    out.critic = check_gradient(store, s.critic_range(), [&](nn::Tape& t, nn::ParamStore& st) {
                   return s.critic_loss(t, st, b, next_noise).total;
                 }).rel_error;
    out.actor = check_gradient(store, s.policy_range(store), [&](nn::Tape& t, nn::ParamStore& st) {
                  return s.actor_loss(t, st, b.obs, act_noise).loss;
                }).rel_error;
    nn::Matrix lp = s.log_prob(store, b.obs, b.action);
    out.temperature = check_gradient(store, {s.log_alpha_slice().offset, 1}, [&](nn::Tape& t, nn::ParamStore& st) {
                        return s.temperature_loss(t, st, lp);
                      }).rel_error;
  }
  {
    nn::ParamStore store;
    discriminator::DiscriminatorConfig c;
    c.kind = discriminator::all_feature_kinds()[seed % 6];
    c.state_dim = O;
    c.action_dim = A;
    c.K = 3;
    c.option_dim = 4;
    discriminator::Discriminator d(store, "disc", c);
    d.init(store, rng);
    const std::size_t in = discriminator::feature_input_dim(c.kind, O, A, c.K);
    // Central differences straddling a ReLU kink measure a one-sided slope, so
    // inputs are redrawn until every hidden unit is clear of its kink.
    nn::Matrix x;
    do {
      x = sac::standard_normal(B, static_cast<Eigen::Index>(in), rng);
    } while (relu_margin(store, "disc", c.hidden.size() + 1, x) < 1e-3);
    nn::Matrix u = sac::standard_normal(B, 4, rng).array().tanh().matrix();
    out.discriminator = check_gradient(store, d.range(store), [&](nn::Tape& t, nn::ParamStore& st) {
                          return d.loss(t, st, x, u);
                        }).rel_error;
  }
  return out;
}

}  // namespace hidio::testing
