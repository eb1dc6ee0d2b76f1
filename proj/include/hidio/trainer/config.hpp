#pragma once

#include <cstdint>
#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hidio/discriminator/discriminator.hpp"
#include "hidio/envs/factory.hpp"
#include "hidio/errors.hpp"
#include "hidio/sac/discount.hpp"

namespace hidio::trainer {

using json = nlohmann::json;
using Real = double;

enum class Algorithm { Hidio, Sac, SacActRepeat };

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "hidio") return Algorithm::Hidio;
  if (s == "sac") return Algorithm::Sac;
  if (s == "sac_actrepeat") return Algorithm::SacActRepeat;
  throw ConfigError("unknown algorithm: " + s + " (expected hidio, sac or sac_actrepeat)");
}

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Hidio: return "hidio";
    case Algorithm::Sac: return "sac";
    case Algorithm::SacActRepeat: return "sac_actrepeat";
  }
  return "?";
}

/// Every field is addressable from the JSON config file by its name below.
struct TrainerConfig {
  std::string env = "goal_task";
  envs::EnvConfig env_config = envs::default_config("goal_task");
  std::string algorithm = "hidio";

  // Hierarchy.
  std::size_t K = 3;
  std::size_t D = 4;
  Real gamma = 0.99;
  std::string feature = "StateAction";
  std::string worker_discount = "hard";
  bool worker_history_input = false;
  Real pretrain_fraction = 0.0;
  std::size_t action_repeat = 3;

  // Data collection and training schedule.
  std::size_t actors = 1;
  std::size_t rollout_length = 100;
  std::size_t batches_per_iter = 25;
  std::size_t batch_size = 128;
  std::size_t total_env_steps = 300000;
  std::size_t initial_collect_steps = 1000;
  std::size_t replay_capacity = 100000;  // environment steps per actor
  std::size_t eval_episodes = 50;
  std::size_t eval_interval = 20;  // training iterations
  std::uint64_t seed = 0;
  std::uint64_t eval_seed = 1000003;

  // Networks and optimisation.
  std::vector<std::size_t> scheduler_hidden{64, 64};
  std::vector<std::size_t> worker_hidden{64, 64};
  std::vector<std::size_t> sac_hidden{64, 64};
  std::vector<std::size_t> discriminator_hidden{32, 32};
  Real lr = 5e-4;
  Real discriminator_lr = 5e-4;
  Real tau = 0.05;
  std::size_t target_update_interval = 1;
  Real worker_alpha = 0.01;
  Real scheduler_delta = 0.2;
  Real sac_delta = 0.2;
  Real initial_alpha = 1.0;

  // Output.
  std::string output_dir = "runs/default";
  std::string run_id = "run";
  bool log_importance_ratio = false;
  bool save_replay = false;
  Real stop_at_success = -1.0;  // end training once eval success reaches this (disabled if < 0)

  Algorithm algo() const { return algorithm_from_string(algorithm); }
  discriminator::FeatureKind feature_kind() const { return discriminator::feature_from_string(feature); }
  sac::DiscountMode worker_discount_mode() const {
    auto m = sac::discount_mode_from_string(worker_discount);
    if (m == sac::DiscountMode::Geometric) throw ConfigError("worker_discount must be hard or soft");
    return m;
  }

  void validate() const {
    algo();
    feature_kind();
    worker_discount_mode();
    env_config.validate();
    if (K < 1) throw ConfigError("K must be >= 1");
    if (D < 1) throw ConfigError("D must be >= 1");
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("gamma must lie in [0, 1]");
    if (!(pretrain_fraction >= 0.0 && pretrain_fraction < 1.0)) throw ConfigError("pretrain_fraction must lie in [0, 1)");
    if (pretrain_fraction > 0.0 && algo() != Algorithm::Hidio) throw ConfigError("pretraining requires algorithm hidio");
    if (action_repeat < 1) throw ConfigError("action_repeat must be >= 1");
    if (actors < 1) throw ConfigError("actors must be >= 1");
    if (rollout_length < 1) throw ConfigError("rollout_length must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");
    if (replay_capacity < K) throw ConfigError("replay_capacity must hold at least one option window");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");
    if (target_update_interval < 1) throw ConfigError("target_update_interval must be >= 1");
    if (!(worker_alpha > 0.0)) throw ConfigError("worker_alpha must be > 0");
    if (!(scheduler_delta > 0.0 && scheduler_delta < 1.0) || !(sac_delta > 0.0 && sac_delta < 1.0))
      throw ConfigError("entropy delta must lie in (0, 1)");
    if (!(initial_alpha > 0.0)) throw ConfigError("initial_alpha must be > 0");
    if (!(lr > 0.0) || !(discriminator_lr > 0.0)) throw ConfigError("learning rates must be > 0");
    auto check_hidden = [](const std::vector<std::size_t>& h, const char* name) {
      for (auto w : h)
        if (w < 1) throw ConfigError(std::string(name) + " widths must be >= 1");
    };
    check_hidden(scheduler_hidden, "scheduler_hidden");
    check_hidden(worker_hidden, "worker_hidden");
    check_hidden(sac_hidden, "sac_hidden");
    check_hidden(discriminator_hidden, "discriminator_hidden");
    auto probe = envs::make_env(env, env_config);
    (void)probe;
  }
};

inline json env_to_json(const envs::EnvConfig& c) {
  return json{{"arena_half_width", c.arena_half_width},
           {"goal_radius", c.goal_radius},
           {"distractor_count", c.distractor_count},
           {"distractor_penalty_radius", c.distractor_penalty_radius},
           {"too_far_radius", c.too_far_radius},
           {"action_penalty_coef", c.action_penalty_coef},
           {"horizon", c.horizon},
           {"terminate_on_success", c.terminate_on_success},
           {"seed", c.seed},
           {"dt", c.dt},
           {"max_speed", c.max_speed},
           {"agent_radius", c.agent_radius},
           {"ball_radius", c.ball_radius},
           {"ball_spawn_radius", c.ball_spawn_radius},
           {"link_length", c.link_length},
           {"max_joint_speed", c.max_joint_speed}};
}

namespace detail {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline void apply_env_json(const json& j, envs::EnvConfig& c) {
  static const std::vector<std::string> known{"arena_half_width", "goal_radius", "distractor_count",
                                              "distractor_penalty_radius", "too_far_radius", "action_penalty_coef",
                                              "horizon", "terminate_on_success", "seed", "dt", "max_speed",
                                              "agent_radius", "ball_radius", "ball_spawn_radius", "link_length",
                                              "max_joint_speed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown env_config field: " + it.key());
  using detail::read_field;
  read_field(j, "arena_half_width", c.arena_half_width);
  read_field(j, "goal_radius", c.goal_radius);
  read_field(j, "distractor_count", c.distractor_count);
  read_field(j, "distractor_penalty_radius", c.distractor_penalty_radius);
  read_field(j, "too_far_radius", c.too_far_radius);
  read_field(j, "action_penalty_coef", c.action_penalty_coef);
  read_field(j, "horizon", c.horizon);
  read_field(j, "terminate_on_success", c.terminate_on_success);
  read_field(j, "seed", c.seed);
  read_field(j, "dt", c.dt);
  read_field(j, "max_speed", c.max_speed);
  read_field(j, "agent_radius", c.agent_radius);
  read_field(j, "ball_radius", c.ball_radius);
  read_field(j, "ball_spawn_radius", c.ball_spawn_radius);
  read_field(j, "link_length", c.link_length);
  read_field(j, "max_joint_speed", c.max_joint_speed);
}

#define HIDIO_CONFIG_FIELDS(X)                                                                                   \
  X(algorithm) X(K) X(D) X(gamma) X(feature) X(worker_discount) X(worker_history_input) X(pretrain_fraction)    \
  X(action_repeat) X(actors) X(rollout_length) X(batches_per_iter) X(batch_size) X(total_env_steps)             \
  X(initial_collect_steps) X(replay_capacity) X(eval_episodes) X(eval_interval) X(seed) X(eval_seed)            \
  X(scheduler_hidden) X(worker_hidden) X(sac_hidden) X(discriminator_hidden) X(lr) X(discriminator_lr) X(tau)   \
  X(target_update_interval) X(worker_alpha) X(scheduler_delta) X(sac_delta) X(initial_alpha) X(output_dir)     \
  X(run_id) X(log_importance_ratio) X(save_replay) X(stop_at_success)

inline json to_json(const TrainerConfig& c) {
  json j;
  j["env"] = c.env;
  j["env_config"] = env_to_json(c.env_config);
#define X(name) j[#name] = c.name;
  HIDIO_CONFIG_FIELDS(X)
#undef X
  return j;
}

// Overlays `j` onto `c`. Changing "env" resets env_config to that env's
// defaults before any "env_config" overrides are applied.
inline void apply_json(const json& j, TrainerConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = [] {
    std::vector<std::string> k{"env", "env_config"};
#define X(name) k.push_back(#name);
    HIDIO_CONFIG_FIELDS(X)
#undef X
    return k;
  }();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown config field: " + it.key());
  if (j.contains("env")) {
    detail::read_field(j, "env", c.env);
    c.env_config = envs::default_config(c.env);
  }
  if (j.contains("env_config")) apply_env_json(j.at("env_config"), c.env_config);
#define X(name) detail::read_field(j, #name, c.name);
  HIDIO_CONFIG_FIELDS(X)
#undef X
}

inline TrainerConfig config_from_json(const json& j) {
  TrainerConfig c;
  apply_json(j, c);
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

inline TrainerConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

}  // namespace hidio::trainer
