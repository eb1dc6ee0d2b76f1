// Acceptance driver. Prints one "P<n> PASS|FAIL <detail>" line per selected
// criterion and exits nonzero if any selected criterion fails.
//
//   hidio_acceptance [P1 ... P8] [--work-dir DIR] [--config FILE] [--seeds N]
//
// P6 and P7 train full agents (roughly an hour of CPU per seed and algorithm);
// completed runs found under --work-dir with an identical config are reused.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "gradient_suite.hpp"
#include "hidio/sac/discount.hpp"
#include "hidio/trainer/trainer.hpp"
#include "replay_oracles.hpp"
#include "sac_oracles.hpp"
#include "scripted_oracles.hpp"

using namespace hidio;
using namespace hidio::trainer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::string work_dir;
  std::string config_path;
  std::size_t seeds = 3;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome p1_gradients(const Options&) {
  const auto t0 = std::chrono::steady_clock::now();
  testing::LossGradErrors worst;
  std::size_t failures = 0;
  const std::size_t seeds = 20;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    auto e = testing::loss_gradient_errors(s);
    worst.actor = std::max(worst.actor, e.actor);
    worst.critic = std::max(worst.critic, e.critic);
    worst.temperature = std::max(worst.temperature, e.temperature);
    worst.discriminator = std::max(worst.discriminator, e.discriminator);
    if (e.worst() > 1e-4) ++failures;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 120.0,
          std::to_string(seeds) + " seeds, max rel err actor " + fmt(worst.actor) + " critic " + fmt(worst.critic) +
              " temperature " + fmt(worst.temperature) + " discriminator " + fmt(worst.discriminator) + ", " +
              fmt(secs, 3) + " s"};
}

Outcome p2_structure(const Options&) {
  std::size_t violations = 0;

  // Episodes collected by the trainer itself, across several option lengths.
  std::size_t episodes = 0;
  for (std::size_t K : {1, 2, 3, 5, 7}) {
    TrainerConfig c;
    c.K = K;
    c.worker_discount = "hard";
    c.seed = K;
    c.replay_capacity = 2000;
    Trainer t(c);
    std::size_t here = 0;
    t.hooks().on_episode = [&](const std::vector<OptionWindow>& ws, std::size_t len) {
      std::size_t covered = 0;
      for (std::size_t h = 0; h < ws.size(); ++h) {
        covered += ws[h].valid_len();
        if (h + 1 < ws.size()) {
          if (ws[h].boundary_state() != ws[h + 1].initial_state()) ++violations;
          if (!ws[h].full()) ++violations;
        }
      }
      if (covered != len || ws.size() != hierarchy::window_count(len, K)) ++violations;
      ++here;
    };
    while (here < 200) t.collect(100);
    episodes += here;

    // The mask applied to sampled worker transitions.
    std::mt19937_64 rng(K);
    auto b = t.windows().sample_worker_batch(512, rng);
    for (std::size_t i = 0; i < b.items.size(); ++i) {
      const bool last = b.items[i].k + 1 == K;
      const Real d = sac::step_discount({sac::DiscountMode::HardWindow, c.gamma, K}, b.items[i].k, b.items[i].terminal);
      if (d != ((last || b.items[i].terminal) ? 0.0 : 1.0)) ++violations;
    }
  }

  for (std::size_t K = 1; K <= 10; ++K) {
    sac::DiscountSpec hard{sac::DiscountMode::HardWindow, 0.99, K};
    for (std::size_t k = 0; k < K; ++k)
      if (sac::step_discount(hard, k, false) != (k + 1 == K ? 0.0 : 1.0)) ++violations;
  }

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> Td(1, 1000), Kd(1, 50);
  for (int i = 0; i < 100; ++i) {
    const std::size_t T = Td(rng), K = Kd(rng);
    std::size_t h = 0, covered = 0;
    while (covered < T) covered += K, ++h;
    if (hierarchy::window_count(T, K) != h) ++violations;
  }
  return {violations == 0 && episodes >= 1000,
          std::to_string(episodes) + " episodes, 10 masks, 100 (T,K) cases, " + std::to_string(violations) +
              " violations"};
}

Outcome p3_freshness(const Options&) {
  std::size_t violations = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto r = testing::relabel_freshness_trial(1000 + t);
    violations += (r.stable ? 0 : 1) + (r.changed ? 0 : 1);
  }
  return {violations == 0, "100 trials, " + std::to_string(violations) + " violations"};
}

Outcome p4_discriminator(const Options&) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t ok = 0;
  std::string vals;
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto r = testing::train_scripted_discriminator(s, 2000);
    ok += r.final_mean_log_q >= -0.05 ? 1 : 0;
    vals += (s ? ", " : "") + fmt(r.final_mean_log_q);
  }
  const double secs = seconds_since(t0);
  return {ok == 3 && secs < 120.0, "mean log q per seed [" + vals + "], " + fmt(secs, 3) + " s"};
}

Outcome p5_sac(const Options&) {
  std::size_t ok = 0;
  std::string vals;
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto r = testing::run_two_state_sac(s, 5000);
    ok += r.max_error <= 0.05 ? 1 : 0;
    vals += (s ? ", " : "") + fmt(r.max_error);
  }
  return {ok == 3, "max |Q - Q*| per seed [" + vals + "]"};
}

TrainerConfig desk_preset(const Options& o) {
  TrainerConfig c;
  if (!o.config_path.empty()) apply_json(read_json_file(o.config_path), c);
  return c;
}

// Trains (or reuses) one run and returns its metrics rows.
std::vector<MetricsRow> train_or_reuse(TrainerConfig c, const std::string& dir, double* return_error = nullptr) {
  c.output_dir = dir;
  const std::string cfg_path = dir + "/config.json", done_path = dir + "/done.json";
  const std::string want = to_json(c).dump();
  if (fs::exists(done_path) && fs::exists(cfg_path)) {
    std::ifstream is(cfg_path);
    std::string have((std::istreambuf_iterator<char>(is)), {});
    if (have == want) {
      auto done = read_json_file(done_path);
      if (return_error) *return_error = done.value("max_return_error", 0.0);
      std::cerr << "reusing " << dir << '\n';
      return read_metrics(dir + "/metrics.csv");
    }
  }
  fs::create_directories(dir);
  fs::remove(done_path);
  {
    std::ofstream os(cfg_path);
    os << want;
  }
  std::cerr << "training " << dir << " ..." << std::endl;
  const auto t0 = std::chrono::steady_clock::now();
  Trainer t(c);
  auto r = t.run();
  json done;
  done["max_return_error"] = r.max_return_error;
  done["seconds"] = seconds_since(t0);
  done["env_steps"] = r.env_steps;
  std::ofstream(done_path) << done.dump();
  if (return_error) *return_error = r.max_return_error;
  std::cerr << "  finished in " << fmt(seconds_since(t0), 4) << " s" << std::endl;
  return r.rows;
}

// Mean eval success per env_steps over runs sharing one evaluation schedule.
std::map<std::size_t, double> mean_curve(const std::vector<std::vector<MetricsRow>>& runs) {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const auto& rows : runs)
    for (const auto& r : rows) {
      acc[r.env_steps].first += r.eval_success_rate;
      ++acc[r.env_steps].second;
    }
  std::map<std::size_t, double> out;
  for (const auto& [step, v] : acc)
    if (v.second == runs.size()) out[step] = v.first / static_cast<double>(v.second);
  return out;
}

std::string run_dir(const Options& o, const std::string& name, std::uint64_t seed) {
  return (fs::path(o.work_dir) / (name + "_seed" + std::to_string(seed))).string();
}

Outcome p6_smoke(const Options& o) {
  std::vector<std::vector<MetricsRow>> hidio_runs, sac_runs;
  for (std::uint64_t s = 0; s < o.seeds; ++s) {
    TrainerConfig h = desk_preset(o);
    h.seed = s;
    hidio_runs.push_back(train_or_reuse(h, run_dir(o, "hidio_K" + std::to_string(h.K), s)));
    TrainerConfig f = desk_preset(o);
    f.algorithm = "sac";
    f.seed = s;
    sac_runs.push_back(train_or_reuse(f, run_dir(o, "sac", s)));
  }
  auto hm = mean_curve(hidio_runs), sm = mean_curve(sac_runs);
  double best_h = 0.0, best_gap = -1.0;
  std::size_t best_step = 0;
  bool pass = false;
  for (const auto& [step, h] : hm) {
    if (step > 300000 || !sm.count(step)) continue;
    const double gap = h - sm.at(step);
    if (h > best_h) best_h = h;
    if (gap > best_gap) best_gap = gap, best_step = step;
    if (h >= 0.6 && gap >= 0.2) pass = true;
  }
  const double final_h = hm.empty() ? 0.0 : hm.rbegin()->second, final_s = sm.empty() ? 0.0 : sm.rbegin()->second;
  return {pass, std::to_string(o.seeds) + " seeds: peak hidio mean success " + fmt(best_h, 3) + ", largest gap " +
                    fmt(best_gap, 3) + " at " + std::to_string(best_step) + " steps, final hidio " +
                    fmt(final_h, 3) + " vs sac " + fmt(final_s, 3)};
}

Outcome p7_option_length(const Options& o) {
  std::map<std::size_t, double> auc;
  for (std::size_t K : {1, 3}) {
    double sum = 0.0;
    for (std::uint64_t s = 0; s < o.seeds; ++s) {
      TrainerConfig c = desk_preset(o);
      c.K = K;
      c.seed = s;
      sum += success_auc(train_or_reuse(c, run_dir(o, "hidio_K" + std::to_string(K), s)));
    }
    auc[K] = sum / static_cast<double>(o.seeds);
  }
  return {auc[1] < auc[3], "mean success AUC K=1 " + fmt(auc[1], 6) + " vs K=3 " + fmt(auc[3], 6)};
}

Outcome p8_bookkeeping(const Options& o) {
  TrainerConfig c = desk_preset(o);
  c.total_env_steps = 20000;
  c.output_dir = (fs::path(o.work_dir) / "p8").string();
  Trainer t(c);
  double worst = 0.0;
  std::size_t n = 0;
  t.hooks().on_window = [&](const OptionWindow& w, const replay::Transition& tr) {
    double g = 0.0, d = 1.0;
    for (const auto& s : w.steps()) {
      g += d * s.env_reward;
      d *= c.gamma;
    }
    worst = std::max(worst, std::abs(g - tr.reward));
    ++n;
  };
  auto r = t.run();
  worst = std::max(worst, r.max_return_error);
  return {worst <= 1e-12 && n == r.scheduler_transitions && n > 0,
          std::to_string(n) + " windows over " + std::to_string(r.env_steps) + " steps, max |R_h error| " +
              fmt(worst, 3)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HIDIO acceptance criteria"};
  std::vector<std::string> selected;
  Options o;
  o.work_dir = (fs::temp_directory_path() / "hidio_acceptance").string();
  app.add_option("criteria", selected, "Criteria to run (P1..P8); default all");
  app.add_option("--work-dir", o.work_dir, "Directory for training runs");
  app.add_option("--config", o.config_path, "JSON overlay for the desk preset used by P6-P8");
  app.add_option("--seeds", o.seeds, "Seeds for P6 and P7")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> all = {
      {"P1", p1_gradients}, {"P2", p2_structure},     {"P3", p3_freshness},     {"P4", p4_discriminator},
      {"P5", p5_sac},       {"P6", p6_smoke},         {"P7", p7_option_length}, {"P8", p8_bookkeeping}};
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.first);

  bool all_pass = true;
  for (const auto& name : selected) {
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& c) { return c.first == name; });
    if (it == all.end()) {
      std::cerr << "unknown criterion: " << name << '\n';
      return 2;
    }
    Outcome out;
    try {
      out = it->second(o);
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    std::cout << name << ' ' << (out.pass ? "PASS" : "FAIL") << ' ' << out.detail << std::endl;
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
