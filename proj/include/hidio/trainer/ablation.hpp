#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/trainer/config.hpp"
#include "hidio/trainer/metrics.hpp"
#include "hidio/trainer/trainer.hpp"

namespace hidio::trainer {

/// Cartesian sweep over any subset of feature kind, worker discount and K.
/// Empty axes keep the base config's value.
struct SweepSpec {
  std::vector<std::string> features;
  std::vector<std::string> discounts;
  std::vector<std::size_t> Ks;
  std::vector<std::uint64_t> seeds{0, 1, 2};
};

inline SweepSpec sweep_from_json(const json& j) {
  SweepSpec s;
  detail::read_field(j, "features", s.features);
  detail::read_field(j, "discounts", s.discounts);
  detail::read_field(j, "K", s.Ks);
  detail::read_field(j, "seeds", s.seeds);
  if (s.seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (const auto& f : s.features) discriminator::feature_from_string(f);
  for (const auto& d : s.discounts)
    if (d != "hard" && d != "soft") throw ConfigError("sweep discount must be hard or soft: " + d);
  for (auto k : s.Ks)
    if (k < 1) throw ConfigError("sweep K must be >= 1");
  return s;
}

struct SweepCell {
  std::string name;
  TrainerConfig config;  // output_dir and seed are filled per run
};

inline std::vector<SweepCell> expand_sweep(const TrainerConfig& base, const SweepSpec& s) {
  const std::vector<std::string> fs = s.features.empty() ? std::vector<std::string>{base.feature} : s.features;
  const std::vector<std::string> ds =
      s.discounts.empty() ? std::vector<std::string>{base.worker_discount} : s.discounts;
  const std::vector<std::size_t> ks = s.Ks.empty() ? std::vector<std::size_t>{base.K} : s.Ks;
  std::vector<SweepCell> cells;
  for (const auto& f : fs)
    for (const auto& d : ds)
      for (auto k : ks) {
        SweepCell c;
        c.config = base;
        c.config.feature = f;
        c.config.worker_discount = d;
        c.config.K = k;
        c.name = f + "_" + d + "_K" + std::to_string(k);
        cells.push_back(std::move(c));
      }
  return cells;
}

struct CellRun {
  std::string cell;
  std::uint64_t seed = 0;
  std::string metrics_path;
  Real auc = 0.0;
  Real final_success = std::nan("");
};

struct CellSummary {
  std::string cell;
  Real auc_mean = 0.0;
  Real auc_sd = 0.0;
  std::size_t seeds = 0;
};

struct AblationResult {
  std::vector<CellRun> runs;
  std::vector<CellSummary> cells;
  std::string summary_path;
};

inline std::pair<Real, Real> mean_sd(const std::vector<Real>& v) {
  if (v.empty()) return {std::nan(""), std::nan("")};
  Real m = 0.0;
  for (Real x : v) m += x;
  m /= static_cast<Real>(v.size());
  Real ss = 0.0;
  for (Real x : v) ss += (x - m) * (x - m);
  const Real sd = v.size() > 1 ? std::sqrt(ss / static_cast<Real>(v.size() - 1)) : 0.0;
  return {m, sd};
}

/// Runs every cell under every seed into `out_dir/<cell>/seed_<s>/` and writes
/// `summary.csv` (one row per run) and `summary_cells.csv` (AUC mean and sd per cell).
inline AblationResult run_ablation(const TrainerConfig& base, const SweepSpec& spec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  AblationResult res;
  for (const auto& cell : expand_sweep(base, spec)) {
    std::vector<Real> aucs;
    for (auto seed : spec.seeds) {
      TrainerConfig c = cell.config;
      c.seed = seed;
      c.output_dir = (fs::path(out_dir) / cell.name / ("seed_" + std::to_string(seed))).string();
      c.run_id = cell.name + "_s" + std::to_string(seed);
      Trainer t(c);
      TrainResult tr = t.run();
      CellRun r;
      r.cell = cell.name;
      r.seed = seed;
      r.metrics_path = tr.metrics_path;
      r.auc = success_auc(tr.rows);
      r.final_success = tr.rows.empty() ? std::nan("") : tr.rows.back().eval_success_rate;
      aucs.push_back(r.auc);
      res.runs.push_back(r);
    }
    auto [m, sd] = mean_sd(aucs);
    res.cells.push_back({cell.name, m, sd, aucs.size()});
  }
  res.summary_path = (fs::path(out_dir) / "summary.csv").string();
  std::ofstream os(res.summary_path);
  os << std::setprecision(17) << "cell,seed,auc,final_success,metrics_path\n";
  for (const auto& r : res.runs)
    os << r.cell << ',' << r.seed << ',' << r.auc << ',' << format_real(r.final_success) << ',' << r.metrics_path
       << '\n';
  std::ofstream oc(fs::path(out_dir) / "summary_cells.csv");
  oc << std::setprecision(17) << "cell,seeds,auc_mean,auc_sd\n";
  for (const auto& c : res.cells) oc << c.cell << ',' << c.seeds << ',' << c.auc_mean << ',' << c.auc_sd << '\n';
  return res;
}

}  // namespace hidio::trainer
