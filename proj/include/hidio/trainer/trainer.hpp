#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hidio/discriminator/discriminator.hpp"
#include "hidio/envs/factory.hpp"
#include "hidio/errors.hpp"
#include "hidio/hierarchy/option_window.hpp"
#include "hidio/nn/checkpoint.hpp"
#include "hidio/replay/buffers.hpp"
#include "hidio/sac/sac_learner.hpp"
#include "hidio/trainer/config.hpp"
#include "hidio/trainer/metrics.hpp"

namespace hidio::trainer {

using hierarchy::OptionVector;
using hierarchy::OptionWindow;
using nn::Matrix;
using Vec = std::vector<Real>;

inline std::size_t obs_dim_of(const TrainerConfig& c) { return envs::make_env(c.env, c.env_config)->obs_dim(); }
inline std::size_t action_dim_of(const TrainerConfig& c) { return envs::make_env(c.env, c.env_config)->action_dim(); }

/// Scheduler, worker and discriminator sharing one parameter store.
struct HidioAgent {
  std::size_t S = 0, A = 0, D = 0, K = 1;
  bool history = false;
  nn::ParamStore store;
  sac::SacLearner scheduler;
  sac::SacLearner worker;
  discriminator::Discriminator disc;
  sac::DiscountSpec worker_discount;

  HidioAgent(const TrainerConfig& c, std::size_t obs_dim, std::size_t action_dim)
      : S(obs_dim), A(action_dim), D(c.D), K(c.K), history(c.worker_history_input) {
    sac::SacConfig sc;
    sc.obs_dim = S;
    sc.action_dim = D;
    sc.hidden = c.scheduler_hidden;
    sc.lr = c.lr;
    sc.tau = c.tau;
    sc.target_update_interval = c.target_update_interval;
    sc.entropy.automatic = true;
    sc.entropy.delta = c.scheduler_delta;
    sc.entropy.initial_alpha = c.initial_alpha;
    scheduler = sac::SacLearner(store, "scheduler", sc);

    sac::SacConfig wc;
    wc.obs_dim = hierarchy::worker_input_dim(S, A, D, K, history);
    wc.action_dim = A;
    wc.hidden = c.worker_hidden;
    wc.lr = c.lr;
    wc.tau = c.tau;
    wc.target_update_interval = c.target_update_interval;
    wc.entropy.automatic = false;
    wc.entropy.alpha = c.worker_alpha;
    worker = sac::SacLearner(store, "worker", wc);

    discriminator::DiscriminatorConfig dc;
    dc.kind = c.feature_kind();
    dc.state_dim = S;
    dc.action_dim = A;
    dc.K = K;
    dc.option_dim = D;
    dc.hidden = c.discriminator_hidden;
    dc.lr = c.discriminator_lr;
    disc = discriminator::Discriminator(store, "discriminator", dc);

    worker_discount.mode = c.worker_discount_mode();
    worker_discount.K = K;
    worker_discount.gamma = c.gamma;
  }

  template <typename Rng>
  void init(Rng& rng) {
    scheduler.init(store, rng);
    worker.init(store, rng);
    disc.init(store, rng);
  }
};

/// Flat SAC on the environment MDP; each sampled action is held for `repeat` steps.
struct FlatAgent {
  std::size_t S = 0, A = 0, repeat = 1;
  nn::ParamStore store;
  sac::SacLearner sac;

  FlatAgent(const TrainerConfig& c, std::size_t obs_dim, std::size_t action_dim, std::size_t repeat_)
      : S(obs_dim), A(action_dim), repeat(repeat_) {
    sac::SacConfig fc;
    fc.obs_dim = S;
    fc.action_dim = A;
    fc.hidden = c.sac_hidden;
    fc.lr = c.lr;
    fc.tau = c.tau;
    fc.target_update_interval = c.target_update_interval;
    fc.entropy.automatic = true;
    fc.entropy.delta = c.sac_delta;
    fc.entropy.initial_alpha = c.initial_alpha;
    sac = sac::SacLearner(store, "sac", fc);
  }

  template <typename Rng>
  void init(Rng& rng) {
    sac.init(store, rng);
  }
};

struct EvalResult {
  Real success_rate = 0.0;
  Real mean_return = 0.0;
  std::size_t episodes = 0;
  std::size_t policy_queries = 0;  // flat: sampled actions; hierarchical: options issued
  std::size_t env_steps = 0;
};

struct TrainResult {
  std::size_t env_steps = 0;
  std::size_t iterations = 0;
  std::optional<std::size_t> phase_switch_step;           // env step at which the worker freezes
  std::optional<std::size_t> first_scheduled_option_step;  // first option drawn from the scheduler after it
  std::vector<MetricsRow> rows;
  std::string metrics_path;
  std::string checkpoint_path;
  std::size_t scheduler_transitions = 0;
  std::size_t episodes = 0;
  Real max_return_error = 0.0;  // |stored R_h - recomputed R_h| over every stored transition
};

/// Callbacks for inspecting collected data as it is produced.
struct TrainerHooks {
  std::function<void(const OptionWindow&, const replay::Transition&)> on_window;
  std::function<void(const std::vector<OptionWindow>&, std::size_t episode_length)> on_episode;
};

class Trainer {
 public:
  explicit Trainer(TrainerConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    cfg_.validate();
    algo_ = cfg_.algo();
    auto probe = envs::make_env(cfg_.env, cfg_.env_config);
    S_ = probe->obs_dim();
    A_ = probe->action_dim();
    horizon_ = probe->horizon();
    std::mt19937_64 init_rng(cfg_.seed * 0x9E3779B97F4A7C15ull + 17);
    if (algo_ == Algorithm::Hidio) {
      hidio_ = std::make_unique<HidioAgent>(cfg_, S_, A_);
      hidio_->init(init_rng);
    } else {
      flat_ = std::make_unique<FlatAgent>(cfg_, S_, A_, algo_ == Algorithm::SacActRepeat ? cfg_.action_repeat : 1);
      flat_->init(init_rng);
    }
    const std::size_t cap_steps = cfg_.replay_capacity * cfg_.actors;
    const std::size_t sched_cap = algo_ == Algorithm::Hidio ? hierarchy::window_count(cap_steps, cfg_.K) : cap_steps;
    transitions_ = replay::TransitionBuffer(std::max<std::size_t>(1, sched_cap));
    if (hidio_) windows_ = replay::WorkerBuffer(std::max<std::size_t>(1, cap_steps / cfg_.K), A_, cfg_.worker_history_input);
    for (std::size_t i = 0; i < cfg_.actors; ++i) {
      envs::EnvConfig ec = cfg_.env_config;
      ec.seed = cfg_.env_config.seed + 7919 * cfg_.seed + 104729 * i + 1;
      actors_.emplace_back();
      actors_.back().env = envs::make_env(cfg_.env, ec);
    }
    if (cfg_.pretrain_fraction > 0.0)
      switch_step_ = static_cast<std::size_t>(std::llround(cfg_.pretrain_fraction * static_cast<Real>(cfg_.total_env_steps)));
  }

  const TrainerConfig& config() const { return cfg_; }
  Algorithm algorithm() const { return algo_; }
  nn::ParamStore& store() { return hidio_ ? hidio_->store : flat_->store; }
  const nn::ParamStore& store() const { return hidio_ ? hidio_->store : flat_->store; }
  HidioAgent* hidio() { return hidio_.get(); }
  FlatAgent* flat() { return flat_.get(); }
  const replay::TransitionBuffer& transitions() const { return transitions_; }
  const replay::WorkerBuffer& windows() const { return windows_; }
  std::size_t env_steps() const { return env_steps_; }
  std::size_t policy_queries() const { return policy_queries_; }
  TrainerHooks& hooks() { return hooks_; }
  std::mt19937_64& rng() { return rng_; }

  // 1 while pretraining the worker on uniform options, 2 once scheduling over
  // the frozen worker, 0 without pretraining.
  int phase() const {
    if (!switch_step_) return 0;
    return env_steps_ < *switch_step_ ? 1 : 2;
  }

  /// Steps every actor `steps_per_actor` times.
  void collect(std::size_t steps_per_actor) {
    for (auto& a : actors_)
      for (std::size_t i = 0; i < steps_per_actor; ++i) actor_step(a);
  }

  /// One training iteration of `batches_per_iter` batches.
  void train_iteration() {
    const int ph = phase_for_training();
    for (std::size_t m = 0; m < cfg_.batches_per_iter; ++m) {
      if (hidio_) {
        if (ph != 1) train_scheduler_batch();
        if (ph != 2) train_worker_batch();
      } else {
        train_flat_batch();
      }
    }
    ++iterations_;
  }

  EvalResult evaluate(std::size_t episodes, std::uint64_t seed) const {
    if (episodes == 0) throw ConfigError("evaluation needs at least one episode");
    envs::EnvConfig ec = cfg_.env_config;
    ec.seed = seed;
    auto env = envs::make_env(cfg_.env, ec);
    std::mt19937_64 unused(0);
    EvalResult r;
    r.episodes = episodes;
    Real total_return = 0.0;
    std::size_t successes = 0;
    for (std::size_t e = 0; e < episodes; ++e) {
      Vec obs = env->reset();
      bool success = false;
      std::size_t t = 0;
      std::optional<OptionWindow> w;
      Vec held;
      while (!env->done()) {
        Vec a;
        if (hidio_) {
          if (!w || w->closed()) {
            OptionVector u{hidio_->scheduler.act(hidio_->store, std::span<const Real>(obs), true, unused)};
            w.emplace(t / cfg_.K, std::move(u), obs, cfg_.K);
            ++r.policy_queries;
          }
          Vec in = hierarchy::worker_input(*w, w->valid_len(), A_, cfg_.worker_history_input);
          a = hidio_->worker.act(hidio_->store, std::span<const Real>(in), true, unused);
        } else {
          if (t % flat_->repeat == 0) {
            held = flat_->sac.act(flat_->store, std::span<const Real>(obs), true, unused);
            ++r.policy_queries;
          }
          a = held;
        }
        auto sr = env->step(a);
        if (w) {
          hierarchy::StepRecord rec;
          rec.k = w->valid_len();
          rec.state = obs;
          rec.action = a;
          rec.next_state = sr.next_state;
          rec.done = sr.done;
          w->append_step(std::move(rec));
        }
        total_return += sr.reward;
        success = success || sr.success;
        obs = sr.next_state;
        ++t;
        ++r.env_steps;
      }
      successes += success ? 1 : 0;
    }
    r.success_rate = static_cast<Real>(successes) / static_cast<Real>(episodes);
    r.mean_return = total_return / static_cast<Real>(episodes);
    return r;
  }

  /// The full schedule: initial collection, then rollout/train iterations
  /// until total_env_steps, with evaluations every eval_interval iterations.
  TrainResult run() {
    namespace fs = std::filesystem;
    fs::create_directories(cfg_.output_dir);
    TrainResult res;
    res.metrics_path = (fs::path(cfg_.output_dir) / "metrics.csv").string();
    res.checkpoint_path = (fs::path(cfg_.output_dir) / "checkpoint.bin").string();
    MetricsWriter writer(res.metrics_path);
    start_ = std::chrono::steady_clock::now();

    const std::size_t per_iter = cfg_.actors * cfg_.rollout_length;
    if (cfg_.total_env_steps > 0) {
      const std::size_t init = std::min(cfg_.initial_collect_steps, cfg_.total_env_steps) / cfg_.actors;
      collect(init);
      emit_row(writer, res);
      bool stop = false;
      while (!stop && env_steps_ + per_iter <= cfg_.total_env_steps) {
        collect(cfg_.rollout_length);
        train_iteration();
        const bool last = env_steps_ + per_iter > cfg_.total_env_steps;
        if (iterations_ % cfg_.eval_interval == 0 || last) {
          const MetricsRow& row = emit_row(writer, res);
          stop = cfg_.stop_at_success >= 0.0 && row.eval_success_rate >= cfg_.stop_at_success;
        }
      }
    }
    nn::save_checkpoint(res.checkpoint_path, store(), to_json(cfg_).dump());
    if (cfg_.save_replay)
      replay::save_snapshot((fs::path(cfg_.output_dir) / "replay.bin").string(), transitions_, windows_);
    res.env_steps = env_steps_;
    res.iterations = iterations_;
    res.phase_switch_step = switch_step_;
    res.first_scheduled_option_step = first_scheduled_step_;
    res.scheduler_transitions = transitions_total_;
    res.episodes = episodes_total_;
    res.max_return_error = max_return_error_;
    return res;
  }

 private:
  struct ActorState {
    std::unique_ptr<envs::Env> env;
    Vec obs;
    bool need_reset = true;
    // Hierarchical bookkeeping.
    std::optional<OptionWindow> window;
    std::vector<OptionWindow> episode_windows;
    Real window_return = 0.0;
    Real window_weight = 1.0;
    // Flat bookkeeping.
    Vec held_action;
    std::size_t held_left = 0;
    replay::Transition pending;
    // Episode statistics.
    Real episode_return = 0.0;
    bool episode_success = false;
    std::size_t episode_length = 0;
  };

  int phase_for_training() const {
    if (!switch_step_) return 0;
    return env_steps_ <= *switch_step_ ? 1 : 2;
  }

  void begin_episode(ActorState& a) {
    a.obs = a.env->reset();
    a.need_reset = false;
    a.window.reset();
    a.episode_windows.clear();
    a.episode_return = 0.0;
    a.episode_success = false;
    a.episode_length = 0;
    a.held_left = 0;
  }

  void end_episode(ActorState& a) {
    a.need_reset = true;
    ++episodes_total_;
    stats_.episode_returns.push_back(a.episode_return);
    stats_.episode_successes.push_back(a.episode_success ? 1.0 : 0.0);
    if (hidio_) {
      std::size_t covered = 0;
      for (const auto& w : a.episode_windows) covered += w.valid_len();
      if (covered != a.episode_length) throw InternalError("option windows do not partition the episode");
      if (a.episode_windows.size() != hierarchy::window_count(a.episode_length, cfg_.K))
        throw InternalError("scheduler transition count differs from ceil(T/K)");
      if (hooks_.on_episode) hooks_.on_episode(a.episode_windows, a.episode_length);
    }
  }

  void actor_step(ActorState& a) {
    if (a.need_reset) begin_episode(a);
    if (hidio_)
      hidio_step(a);
    else
      flat_step(a);
  }

  void hidio_step(ActorState& a) {
    HidioAgent& ag = *hidio_;
    if (!a.window) {
      OptionVector u;
      if (phase() == 1) {
        std::uniform_real_distribution<Real> unif(-1.0, 1.0);
        u.u.resize(ag.D);
        for (auto& v : u.u) v = unif(rng_);
      } else {
        if (switch_step_ && !first_scheduled_step_) first_scheduled_step_ = env_steps_;
        u.u = ag.scheduler.act(ag.store, std::span<const Real>(a.obs), false, rng_);
      }
      if (!u.in_bounds()) throw InternalError("option outside [-1, 1]^D");
      if (!a.episode_windows.empty() && a.episode_windows.back().boundary_state() != a.obs)
        throw InternalError("boundary identity violated between option windows");
      ++policy_queries_;
      a.window.emplace(a.episode_windows.size(), std::move(u), a.obs, ag.K);
      a.window_return = 0.0;
      a.window_weight = 1.0;
    }
    OptionWindow& w = *a.window;
    const std::size_t k = w.valid_len();
    Vec in = hierarchy::worker_input(w, k, ag.A, ag.history);
    auto [action, logp] = ag.worker.sample(ag.store, std::span<const Real>(in), rng_);
    auto sr = a.env->step(action);
    ++env_steps_;
    account(a, sr);

    hierarchy::StepRecord rec;
    rec.k = k;
    rec.state = a.obs;
    rec.action = action;
    rec.next_state = sr.next_state;
    rec.env_reward = sr.reward;
    rec.done = sr.done;
    rec.terminal = sr.done && !sr.truncated;
    rec.behavior_log_prob = logp;
    w.append_step(std::move(rec));
    a.window_return += a.window_weight * sr.reward;
    a.window_weight *= cfg_.gamma;
    a.obs = sr.next_state;

    if (w.closed()) {
      replay::Transition t;
      t.obs = w.initial_state();
      t.action = w.option().u;
      t.reward = a.window_return;
      t.next_obs = w.boundary_state();
      t.terminal = w.terminal();
      t.steps = w.valid_len();
      const Real err = std::abs(t.reward - w.discounted_return(cfg_.gamma));
      max_return_error_ = std::max(max_return_error_, err);
      if (err > 1e-12) throw InternalError("stored R_h differs from its window's discounted return");
      if (hooks_.on_window) hooks_.on_window(w, t);
      transitions_.push(t);
      ++transitions_total_;
      a.episode_windows.push_back(w);
      windows_.push_window(std::move(w));
      a.window.reset();
    }
    if (sr.done) end_episode(a);
  }

  void flat_step(ActorState& a) {
    FlatAgent& ag = *flat_;
    if (a.held_left == 0) {
      a.held_action = ag.sac.act(ag.store, std::span<const Real>(a.obs), false, rng_);
      a.held_left = ag.repeat;
      ++policy_queries_;
      a.pending = replay::Transition{};
      a.pending.obs = a.obs;
      a.pending.action = a.held_action;
      a.pending.steps = 0;
      a.window_weight = 1.0;
    }
    auto sr = a.env->step(a.held_action);
    ++env_steps_;
    account(a, sr);
    a.pending.reward += a.window_weight * sr.reward;
    a.window_weight *= cfg_.gamma;
    ++a.pending.steps;
    --a.held_left;
    a.obs = sr.next_state;
    if (a.held_left == 0 || sr.done) {
      a.pending.next_obs = a.obs;
      a.pending.terminal = sr.done && !sr.truncated;
      transitions_.push(a.pending);
      ++transitions_total_;
      a.held_left = 0;
    }
    if (sr.done) end_episode(a);
  }

  void account(ActorState& a, const envs::StepResult& sr) {
    a.episode_return += sr.reward;
    a.episode_success = a.episode_success || sr.success;
    ++a.episode_length;
  }

  void train_scheduler_batch() {
    HidioAgent& ag = *hidio_;
    auto b = transitions_.sample(cfg_.batch_size, cfg_.gamma, rng_);
    auto cs = ag.scheduler.critic_update(ag.store, b, rng_);
    auto as = ag.scheduler.actor_update(ag.store, b.obs, rng_);
    check_finite("scheduler critic loss", cs.q1_loss + cs.q2_loss, b);
    check_finite("scheduler actor loss", as.actor_loss + as.alpha_loss, b);
    stats_.add(stats_.scheduler_critic, cs.q1_loss + cs.q2_loss);
    stats_.add(stats_.scheduler_actor, as.actor_loss);
    stats_.scheduler_alpha = as.alpha;
  }

  void train_worker_batch() {
    HidioAgent& ag = *hidio_;
    auto wb = windows_.sample_worker_batch(cfg_.batch_size, rng_);
    replay::relabel(wb, ag.disc, ag.store, ag.worker, cfg_.log_importance_ratio);
    const Real dl = ag.disc.update(ag.store, wb.disc_inputs, wb.options);
    auto tb = replay::worker_transitions(wb, ag.worker_discount);
    auto cs = ag.worker.critic_update(ag.store, tb, rng_);
    auto as = ag.worker.actor_update(ag.store, tb.obs, rng_);
    check_finite("discriminator loss", dl, tb);
    check_finite("worker critic loss", cs.q1_loss + cs.q2_loss, tb);
    check_finite("worker actor loss", as.actor_loss, tb);
    stats_.add(stats_.discriminator, dl);
    stats_.add(stats_.intrinsic, wb.reward.mean());
    stats_.add(stats_.log_q, wb.log_q.mean());
    stats_.add(stats_.worker_critic, cs.q1_loss + cs.q2_loss);
    stats_.add(stats_.worker_actor, as.actor_loss);
    if (cfg_.log_importance_ratio) stats_.add(stats_.importance, wb.importance_log_ratio);
    stats_.worker_alpha = as.alpha;
  }

  void train_flat_batch() {
    FlatAgent& ag = *flat_;
    auto b = transitions_.sample(cfg_.batch_size, cfg_.gamma, rng_);
    auto cs = ag.sac.critic_update(ag.store, b, rng_);
    auto as = ag.sac.actor_update(ag.store, b.obs, rng_);
    check_finite("critic loss", cs.q1_loss + cs.q2_loss, b);
    check_finite("actor loss", as.actor_loss + as.alpha_loss, b);
    stats_.add(stats_.worker_critic, cs.q1_loss + cs.q2_loss);
    stats_.add(stats_.worker_actor, as.actor_loss);
    stats_.worker_alpha = as.alpha;
  }

  // Non-finite losses abort the run after dumping the offending batch.
  void check_finite(const char* what, Real v, const sac::TransitionBatch& b) const {
    if (std::isfinite(v)) return;
    namespace fs = std::filesystem;
    fs::create_directories(cfg_.output_dir);
    const std::string path = (fs::path(cfg_.output_dir) / "nan_dump.txt").string();
    std::ofstream os(path);
    Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n");
    os << what << " = " << v << " at env_steps " << env_steps_ << " iteration " << iterations_ << "\n";
    os << "obs:\n" << b.obs.format(fmt) << "\naction:\n" << b.action.format(fmt) << "\nreward:\n"
       << b.reward.format(fmt) << "\nnext_obs:\n" << b.next_obs.format(fmt) << "\ndiscount:\n"
       << b.discount.format(fmt) << "\n";
    throw NumericError(std::string("non-finite ") + what + "; batch dumped to " + path);
  }

  const MetricsRow& emit_row(MetricsWriter& writer, TrainResult& res) {
    MetricsRow r;
    r.iteration = iterations_;
    r.env_steps = env_steps_;
    r.phase = phase();
    const EvalResult ev = evaluate(cfg_.eval_episodes, cfg_.eval_seed);
    r.eval_success_rate = ev.success_rate;
    r.eval_return = ev.mean_return;
    r.train_episode_return = Stats::mean(stats_.episode_returns);
    r.train_success_rate = Stats::mean(stats_.episode_successes);
    r.intrinsic_reward_mean = Stats::mean(stats_.intrinsic);
    r.log_q_mean = Stats::mean(stats_.log_q);
    r.discriminator_loss = Stats::mean(stats_.discriminator);
    r.scheduler_critic_loss = Stats::mean(stats_.scheduler_critic);
    r.scheduler_actor_loss = Stats::mean(stats_.scheduler_actor);
    r.scheduler_alpha = stats_.scheduler_alpha;
    r.worker_critic_loss = Stats::mean(stats_.worker_critic);
    r.worker_actor_loss = Stats::mean(stats_.worker_actor);
    r.worker_alpha = stats_.worker_alpha;
    r.importance_log_ratio = Stats::mean(stats_.importance);
    r.wall_time = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start_).count();
    writer.append(r);
    stats_.reset();
    res.rows.push_back(r);
    return res.rows.back();
  }

  struct Stats {
    std::vector<Real> episode_returns, episode_successes, intrinsic, log_q, discriminator, scheduler_critic,
        scheduler_actor, worker_critic, worker_actor, importance;
    Real scheduler_alpha = std::nan("");
    Real worker_alpha = std::nan("");

    static void add(std::vector<Real>& v, Real x) { v.push_back(x); }
    static Real mean(const std::vector<Real>& v) {
      if (v.empty()) return std::nan("");
      Real s = 0.0;
      for (Real x : v) s += x;
      return s / static_cast<Real>(v.size());
    }
    void reset() {
      for (auto* v : {&episode_returns, &episode_successes, &intrinsic, &log_q, &discriminator, &scheduler_critic,
                      &scheduler_actor, &worker_critic, &worker_actor, &importance})
        v->clear();
    }
  };

  TrainerConfig cfg_;
  Algorithm algo_ = Algorithm::Hidio;
  std::mt19937_64 rng_;
  std::size_t S_ = 0, A_ = 0, horizon_ = 0;
  std::unique_ptr<HidioAgent> hidio_;
  std::unique_ptr<FlatAgent> flat_;
  replay::TransitionBuffer transitions_;
  replay::WorkerBuffer windows_;
  std::vector<ActorState> actors_;
  std::optional<std::size_t> switch_step_;
  std::optional<std::size_t> first_scheduled_step_;
  std::size_t env_steps_ = 0;
  std::size_t iterations_ = 0;
  std::size_t policy_queries_ = 0;
  std::size_t transitions_total_ = 0;
  std::size_t episodes_total_ = 0;
  Real max_return_error_ = 0.0;
  Stats stats_;
  TrainerHooks hooks_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace hidio::trainer
