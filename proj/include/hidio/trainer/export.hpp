#pragma once

#include <fstream>
#include <iomanip>
#include <random>
#include <string>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/nn/checkpoint.hpp"
#include "hidio/trainer/trainer.hpp"

namespace hidio::trainer {

enum class ExportMode { SampledOptionFixed, Policy };

inline ExportMode export_mode_from_string(const std::string& s) {
  if (s == "sampled_option_fixed") return ExportMode::SampledOptionFixed;
  if (s == "policy") return ExportMode::Policy;
  throw ConfigError("unknown export mode: " + s + " (expected sampled_option_fixed or policy)");
}

struct ExportOptions {
  ExportMode mode = ExportMode::SampledOptionFixed;
  std::size_t options = 4;
  std::size_t episodes_per_option = 100;
  bool uniform_options = false;  // draw u uniformly instead of from the scheduler at t=0
  bool deterministic_worker = false;
  std::uint64_t seed = 0;
  std::string run_id = "run";
};

struct ExportSummary {
  std::size_t rows = 0;
  std::size_t episodes = 0;
  std::vector<std::vector<Real>> options;  // u per option_id (fixed mode)
};

/// Rebuilds a trainer from a checkpoint's embedded config and loads its
/// parameters. `expected_env`, when non-empty, must match the checkpoint.
inline std::unique_ptr<Trainer> trainer_from_checkpoint(const std::string& path, const std::string& expected_env = {}) {
  nn::Checkpoint ck = nn::read_checkpoint(path);
  if (ck.metadata.empty()) throw ConfigError("checkpoint carries no trainer config: " + path);
  TrainerConfig cfg = config_from_json(json::parse(ck.metadata));
  if (!expected_env.empty() && expected_env != cfg.env)
    throw ConfigError("checkpoint was trained on env '" + cfg.env + "', not '" + expected_env + "'");
  auto t = std::make_unique<Trainer>(cfg);
  nn::load_into(ck, t->store());
  return t;
}

/// Writes rows (run_id, option_id, u_0..u_{D-1}, t, state..., action...) where
/// state is the environment's raw state before the action at step t.
inline ExportSummary export_trajectories(Trainer& tr, const std::string& out_path, const ExportOptions& opt) {
  HidioAgent* ag = tr.hidio();
  if (!ag) throw ConfigError("trajectory export needs a hierarchical (hidio) checkpoint");
  if (opt.episodes_per_option == 0 || opt.options == 0) throw ConfigError("export needs >= 1 option and episode");
  const TrainerConfig& cfg = tr.config();
  envs::EnvConfig ec = cfg.env_config;
  ec.seed = opt.seed;
  auto env = envs::make_env(cfg.env, ec);
  std::mt19937_64 rng(opt.seed ^ 0x5DEECE66Dull);

  std::ofstream os(out_path);
  if (!os) throw ConfigError("cannot open trajectory file: " + out_path);
  os << std::setprecision(17);
  env->reset();
  const std::size_t raw_dim = env->raw_state().size();
  os << "run_id,option_id";
  for (std::size_t i = 0; i < ag->D; ++i) os << ",u_" << i;
  os << ",t";
  for (std::size_t i = 0; i < raw_dim; ++i) os << ",state_" << i;
  for (std::size_t i = 0; i < ag->A; ++i) os << ",action_" << i;
  os << '\n';

  ExportSummary sum;
  auto worker_action = [&](const hierarchy::OptionWindow& w) {
    Vec in = hierarchy::worker_input(w, w.valid_len(), ag->A, ag->history);
    return ag->worker.act(ag->store, std::span<const Real>(in), opt.deterministic_worker, rng);
  };
  auto run_episode = [&](std::size_t option_id, const Vec* fixed_u) {
    Vec obs = env->reset();
    std::optional<hierarchy::OptionWindow> w;
    std::size_t t = 0;
    std::size_t h = 0;
    while (!env->done()) {
      if (!w || w->closed()) {
        OptionVector u;
        if (fixed_u)
          u.u = *fixed_u;
        else
          u.u = ag->scheduler.act(ag->store, std::span<const Real>(obs), true, rng);
        w.emplace(h++, std::move(u), obs, ag->K);
      }
      const Vec raw = env->raw_state();
      Vec a = worker_action(*w);
      auto sr = env->step(a);
      os << opt.run_id << ',' << (fixed_u ? option_id : w->h());
      for (Real v : w->option().u) os << ',' << v;
      os << ',' << t;
      for (Real v : raw) os << ',' << v;
      for (Real v : a) os << ',' << v;
      os << '\n';
      hierarchy::StepRecord rec;
      rec.k = w->valid_len();
      rec.state = obs;
      rec.action = a;
      rec.next_state = sr.next_state;
      rec.done = sr.done;
      w->append_step(std::move(rec));
      obs = sr.next_state;
      ++t;
      ++sum.rows;
    }
    ++sum.episodes;
  };

  if (opt.mode == ExportMode::SampledOptionFixed) {
    std::uniform_real_distribution<Real> unif(-1.0, 1.0);
    for (std::size_t o = 0; o < opt.options; ++o) {
      Vec u(ag->D);
      if (opt.uniform_options) {
        for (auto& v : u) v = unif(rng);
      } else {
        Vec obs = env->reset();
        u = ag->scheduler.act(ag->store, std::span<const Real>(obs), false, rng);
      }
      sum.options.push_back(u);
      for (std::size_t e = 0; e < opt.episodes_per_option; ++e) run_episode(o, &u);
    }
  } else {
    for (std::size_t e = 0; e < opt.episodes_per_option; ++e) run_episode(0, nullptr);
  }
  if (!os) throw ConfigError("failed writing trajectory file: " + out_path);
  return sum;
}

}  // namespace hidio::trainer
