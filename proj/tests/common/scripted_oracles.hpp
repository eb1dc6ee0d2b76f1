#pragma once

#include <random>
#include <vector>

#include "hidio/discriminator/discriminator.hpp"
#include "hidio/hierarchy/option_window.hpp"

namespace hidio::testing {

// Views from a scripted worker whose action is a = (u0, u1) at every step,
// in random states. Action features then contain u exactly.
inline std::vector<hierarchy::SubTrajectoryView> scripted_views(std::size_t n, std::size_t S, std::size_t K,
                                                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> kdist(0, K - 1);
  std::vector<hierarchy::SubTrajectoryView> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    hierarchy::OptionVector u{{unif(rng), unif(rng)}};
    hierarchy::Vec s(S);
    for (auto& v : s) v = unif(rng);
    hierarchy::OptionWindow w(0, u, s, K);
    const std::size_t k = kdist(rng);
    for (std::size_t j = 0; j <= k; ++j) {
      hierarchy::StepRecord r;
      r.k = j;
      r.state = w.state_at(j);
      r.action = u.u;
      r.next_state = r.state;
      for (std::size_t d = 0; d < 2 && d < S; ++d) r.next_state[d] += 0.1 * u.u[d];
      w.append_step(std::move(r));
    }
    out.push_back(w.view_at(k));
  }
  return out;
}

struct ScriptedDiscriminatorResult {
  double final_mean_log_q = 0.0;
  std::size_t updates = 0;
};

// Trains an Action-feature discriminator on fresh scripted batches and reports
// mean log q on a held-out batch.
inline ScriptedDiscriminatorResult train_scripted_discriminator(std::uint64_t seed, std::size_t updates,
                                                                std::size_t batch = 256) {
  const std::size_t S = 4, K = 3;
  std::mt19937_64 rng(seed);
  nn::ParamStore store;
  discriminator::DiscriminatorConfig cfg;
  cfg.kind = discriminator::FeatureKind::Action;
  cfg.state_dim = S;
  cfg.action_dim = 2;
  cfg.K = K;
  cfg.option_dim = 2;
  cfg.hidden = {32, 32};
  cfg.lr = 1e-3;
  discriminator::Discriminator disc(store, "disc", cfg);
  disc.init(store, rng);
  for (std::size_t i = 0; i < updates; ++i) {
    auto views = scripted_views(batch, S, K, rng);
    disc.update(store, disc.features(views), discriminator::Discriminator::options_of(views));
  }
  auto held = scripted_views(2048, S, K, rng);
  ScriptedDiscriminatorResult r;
  r.final_mean_log_q = disc.log_q(store, disc.features(held), discriminator::Discriminator::options_of(held)).mean();
  r.updates = updates;
  return r;
}

}  // namespace hidio::testing
