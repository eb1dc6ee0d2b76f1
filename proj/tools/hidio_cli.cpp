#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hidio/trainer/ablation.hpp"
#include "hidio/trainer/config.hpp"
#include "hidio/trainer/export.hpp"
#include "hidio/trainer/trainer.hpp"

namespace {

using hidio::trainer::json;
using hidio::trainer::TrainerConfig;

// Flags shared by train, pretrain and ablate. Unset flags leave the config untouched.
struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> env, algorithm, feature, worker_discount, output_dir, run_id;
  std::optional<std::size_t> K, D, total_env_steps, actors, rollout_length, batches_per_iter, batch_size,
      eval_episodes, eval_interval;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma, pretrain_fraction;
  bool history = false;

  void add_to(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config file");
    app->add_option("--set", sets, "Override any config field: name=<json value> (repeatable)");
    app->add_option("--env", env, "Environment: goal_task, push_ball or reacher");
    app->add_option("--algorithm", algorithm, "hidio, sac or sac_actrepeat");
    app->add_option("--feature", feature, "Discriminator feature kind");
    app->add_option("--worker-discount", worker_discount, "hard or soft");
    app->add_option("--output-dir", output_dir, "Run output directory");
    app->add_option("--run-id", run_id, "Run identifier");
    app->add_option("--K", K, "Steps per option");
    app->add_option("--D", D, "Option dimension");
    app->add_option("--total-env-steps", total_env_steps, "Environment step budget");
    app->add_option("--actors", actors, "Parallel environment instances");
    app->add_option("--rollout-length", rollout_length, "Steps per actor per iteration");
    app->add_option("--batches-per-iter", batches_per_iter, "Training batches per iteration");
    app->add_option("--batch-size", batch_size, "Batch size");
    app->add_option("--eval-episodes", eval_episodes, "Episodes per evaluation");
    app->add_option("--eval-interval", eval_interval, "Iterations between evaluations");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--gamma", gamma, "Base discount");
    app->add_option("--pretrain-fraction", pretrain_fraction, "Fraction of steps spent pretraining the worker");
    app->add_flag("--worker-history-input", history, "Condition the worker on the padded sub-trajectory");
  }

  TrainerConfig build() const {
    TrainerConfig c;
    if (!config_path.empty()) hidio::trainer::apply_json(hidio::trainer::read_json_file(config_path), c);
    json j = json::object();
    if (env) j["env"] = *env;
    if (algorithm) j["algorithm"] = *algorithm;
    if (feature) j["feature"] = *feature;
    if (worker_discount) j["worker_discount"] = *worker_discount;
    if (output_dir) j["output_dir"] = *output_dir;
    if (run_id) j["run_id"] = *run_id;
    if (K) j["K"] = *K;
    if (D) j["D"] = *D;
    if (total_env_steps) j["total_env_steps"] = *total_env_steps;
    if (actors) j["actors"] = *actors;
    if (rollout_length) j["rollout_length"] = *rollout_length;
    if (batches_per_iter) j["batches_per_iter"] = *batches_per_iter;
    if (batch_size) j["batch_size"] = *batch_size;
    if (eval_episodes) j["eval_episodes"] = *eval_episodes;
    if (eval_interval) j["eval_interval"] = *eval_interval;
    if (seed) j["seed"] = *seed;
    if (gamma) j["gamma"] = *gamma;
    if (pretrain_fraction) j["pretrain_fraction"] = *pretrain_fraction;
    if (history) j["worker_history_input"] = true;
    hidio::trainer::apply_json(j, c);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw hidio::ConfigError("--set expects name=value, got: " + s);
      const std::string key = s.substr(0, eq), raw = s.substr(eq + 1);
      json v;
      try {
        v = json::parse(raw);
      } catch (const json::parse_error&) {
        v = raw;  // bare strings need no quoting
      }
      const auto dot = key.find('.');
      if (dot != std::string::npos) {
        if (key.substr(0, dot) != "env_config") throw hidio::ConfigError("only env_config has nested fields: " + key);
        hidio::trainer::apply_json(json{{"env_config", json{{key.substr(dot + 1), v}}}}, c);
      } else {
        hidio::trainer::apply_json(json{{key, v}}, c);
      }
    }
    c.validate();
    return c;
  }
};

void print_rows(const hidio::trainer::TrainResult& r) {
  for (const auto& row : r.rows)
    std::printf("env_steps=%zu eval_success=%.3f eval_return=%.3f wall=%.1fs\n", row.env_steps, row.eval_success_rate,
                row.eval_return, row.wall_time);
  std::printf("metrics: %s\ncheckpoint: %s\n", r.metrics_path.c_str(), r.checkpoint_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical RL with intrinsic option discovery"};
  app.require_subcommand(1);

  ConfigFlags train_flags, pretrain_flags, ablate_flags;
  auto* train = app.add_subcommand("train", "Train an agent (hidio, sac or sac_actrepeat)");
  train_flags.add_to(train);
  auto* pretrain = app.add_subcommand("pretrain", "Pretrain the worker on uniform options, then train the scheduler");
  pretrain_flags.add_to(pretrain);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint with deterministic policies");
  std::string eval_ckpt, eval_env;
  std::size_t eval_episodes = 100;
  std::uint64_t eval_seed = 1000003;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  eval->add_option("--episodes", eval_episodes, "Number of episodes");
  eval->add_option("--seed", eval_seed, "Evaluation environment seed");
  eval->add_option("--env", eval_env, "Expected environment (checked against the checkpoint)");

  auto* exp = app.add_subcommand("export-traj", "Export option trajectories to CSV");
  std::string exp_ckpt, exp_out, exp_env, exp_mode = "sampled_option_fixed";
  hidio::trainer::ExportOptions eo;
  exp->add_option("--checkpoint", exp_ckpt, "Checkpoint file")->required();
  exp->add_option("--out", exp_out, "Output CSV")->required();
  exp->add_option("--env", exp_env, "Expected environment (checked against the checkpoint)");
  exp->add_option("--mode", exp_mode, "sampled_option_fixed or policy");
  exp->add_option("--options", eo.options, "Number of options to sample");
  exp->add_option("--episodes-per-option", eo.episodes_per_option, "Trajectories per option");
  exp->add_option("--seed", eo.seed, "Seed");
  exp->add_option("--run-id", eo.run_id, "Run identifier column");
  exp->add_flag("--uniform", eo.uniform_options, "Draw options uniformly instead of from the scheduler");
  exp->add_flag("--deterministic", eo.deterministic_worker, "Use the worker's deterministic action");

  auto* ablate = app.add_subcommand("ablate", "Sweep feature kinds, worker discounts and K");
  ablate_flags.add_to(ablate);
  std::string sweep_path, ablate_out = "runs/ablation";
  std::vector<std::string> sw_features, sw_discounts;
  std::vector<std::size_t> sw_K;
  std::vector<std::uint64_t> sw_seeds;
  ablate->add_option("--sweep", sweep_path, "Sweep JSON: {features, discounts, K, seeds}");
  ablate->add_option("--features", sw_features, "Feature kinds to sweep");
  ablate->add_option("--discounts", sw_discounts, "Worker discounts to sweep");
  ablate->add_option("--Ks", sw_K, "Option lengths to sweep");
  ablate->add_option("--seeds", sw_seeds, "Seeds shared by every cell");
  ablate->add_option("--out", ablate_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) {
      TrainerConfig c = train_flags.build();
      hidio::trainer::Trainer t(c);
      print_rows(t.run());
    } else if (*pretrain) {
      TrainerConfig c = pretrain_flags.build();
      if (c.pretrain_fraction <= 0.0) throw hidio::ConfigError("pretrain needs --pretrain-fraction in (0, 1)");
      hidio::trainer::Trainer t(c);
      auto r = t.run();
      print_rows(r);
      if (r.phase_switch_step) std::printf("phase switch at env_steps=%zu\n", *r.phase_switch_step);
    } else if (*eval) {
      auto t = hidio::trainer::trainer_from_checkpoint(eval_ckpt, eval_env);
      auto r = t->evaluate(eval_episodes, eval_seed);
      std::printf("success_rate=%.6f mean_return=%.6f episodes=%zu\n", r.success_rate, r.mean_return, r.episodes);
    } else if (*exp) {
      eo.mode = hidio::trainer::export_mode_from_string(exp_mode);
      auto t = hidio::trainer::trainer_from_checkpoint(exp_ckpt, exp_env);
      auto s = hidio::trainer::export_trajectories(*t, exp_out, eo);
      std::printf("wrote %zu rows from %zu episodes to %s\n", s.rows, s.episodes, exp_out.c_str());
    } else if (*ablate) {
      TrainerConfig base = ablate_flags.build();
      hidio::trainer::SweepSpec spec;
      if (!sweep_path.empty()) spec = hidio::trainer::sweep_from_json(hidio::trainer::read_json_file(sweep_path));
      if (!sw_features.empty()) spec.features = sw_features;
      if (!sw_discounts.empty()) spec.discounts = sw_discounts;
      if (!sw_K.empty()) spec.Ks = sw_K;
      if (!sw_seeds.empty()) spec.seeds = sw_seeds;
      json check{{"features", spec.features}, {"discounts", spec.discounts}, {"K", spec.Ks}, {"seeds", spec.seeds}};
      spec = hidio::trainer::sweep_from_json(check);
      auto r = hidio::trainer::run_ablation(base, spec, ablate_out);
      for (const auto& c : r.cells)
        std::printf("%s auc_mean=%.3f auc_sd=%.3f seeds=%zu\n", c.cell.c_str(), c.auc_mean, c.auc_sd, c.seeds);
      std::printf("summary: %s\n", r.summary_path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
