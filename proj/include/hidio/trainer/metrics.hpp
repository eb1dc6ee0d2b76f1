#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "hidio/errors.hpp"

namespace hidio::trainer {

using Real = double;

/// One line of the metrics CSV. Fields that do not apply to the running
/// algorithm (for example discriminator statistics in flat SAC) are NaN and
/// written as "nan".
struct MetricsRow {
  std::size_t iteration = 0;
  std::size_t env_steps = 0;
  int phase = 0;  // 0 normal training, 1 pretraining, 2 scheduling over a frozen worker
  Real eval_success_rate = std::nan("");
  Real eval_return = std::nan("");
  Real train_episode_return = std::nan("");
  Real train_success_rate = std::nan("");
  Real intrinsic_reward_mean = std::nan("");
  Real log_q_mean = std::nan("");
  Real discriminator_loss = std::nan("");
  Real scheduler_critic_loss = std::nan("");
  Real scheduler_actor_loss = std::nan("");
  Real scheduler_alpha = std::nan("");
  Real worker_critic_loss = std::nan("");
  Real worker_actor_loss = std::nan("");
  Real worker_alpha = std::nan("");
  Real importance_log_ratio = std::nan("");
  Real wall_time = 0.0;
};

inline const std::vector<std::string>& metrics_header() {
  static const std::vector<std::string> h{"iteration",
                                          "env_steps",
                                          "phase",
                                          "eval_success_rate",
                                          "eval_return",
                                          "train_episode_return",
                                          "train_success_rate",
                                          "intrinsic_reward_mean",
                                          "log_q_mean",
                                          "discriminator_loss",
                                          "scheduler_critic_loss",
                                          "scheduler_actor_loss",
                                          "scheduler_alpha",
                                          "worker_critic_loss",
                                          "worker_actor_loss",
                                          "worker_alpha",
                                          "importance_log_ratio",
                                          "wall_time"};
  return h;
}

inline std::string format_real(Real v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string to_csv_line(const MetricsRow& r) {
  std::ostringstream os;
  os << r.iteration << ',' << r.env_steps << ',' << r.phase;
  for (Real v : {r.eval_success_rate, r.eval_return, r.train_episode_return, r.train_success_rate,
                 r.intrinsic_reward_mean, r.log_q_mean, r.discriminator_loss, r.scheduler_critic_loss,
                 r.scheduler_actor_loss, r.scheduler_alpha, r.worker_critic_loss, r.worker_actor_loss, r.worker_alpha,
                 r.importance_log_ratio, r.wall_time})
    os << ',' << format_real(v);
  return os.str();
}

/// Append-only CSV writer; every row is flushed so the file can be read while
/// a run is in progress.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path) : path_(path), os_(path, std::ios::trunc) {
    if (!os_) throw ConfigError("cannot open metrics file: " + path);
    for (std::size_t i = 0; i < metrics_header().size(); ++i) os_ << (i ? "," : "") << metrics_header()[i];
    os_ << '\n';
    os_.flush();
  }

  void append(const MetricsRow& r) {
    if (wrote_any_ && r.env_steps < last_steps_) throw InternalError("metrics env_steps must be monotone");
    os_ << to_csv_line(r) << '\n';
    os_.flush();
    last_steps_ = r.env_steps;
    wrote_any_ = true;
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream os_;
  std::size_t last_steps_ = 0;
  bool wrote_any_ = false;
};

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline Real parse_real(const std::string& s) {
  if (s == "nan") return std::nan("");
  std::size_t pos = 0;
  Real v = std::stod(s, &pos);
  if (pos != s.size()) throw ConfigError("malformed number in CSV: " + s);
  return v;
}

inline std::vector<MetricsRow> read_metrics(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open metrics file: " + path);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("metrics file is empty: " + path);
  if (split_csv(line) != metrics_header()) throw ConfigError("metrics header mismatch in " + path);
  std::vector<MetricsRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto c = split_csv(line);
    if (c.size() != metrics_header().size()) throw ConfigError("malformed metrics row in " + path);
    MetricsRow r;
    r.iteration = std::stoull(c[0]);
    r.env_steps = std::stoull(c[1]);
    r.phase = std::stoi(c[2]);
    Real* f[] = {&r.eval_success_rate, &r.eval_return, &r.train_episode_return, &r.train_success_rate,
                 &r.intrinsic_reward_mean, &r.log_q_mean, &r.discriminator_loss, &r.scheduler_critic_loss,
                 &r.scheduler_actor_loss, &r.scheduler_alpha, &r.worker_critic_loss, &r.worker_actor_loss,
                 &r.worker_alpha, &r.importance_log_ratio, &r.wall_time};
    for (std::size_t i = 0; i < std::size(f); ++i) *f[i] = parse_real(c[3 + i]);
    rows.push_back(r);
  }
  return rows;
}

// Trapezoidal area under eval_success_rate over env_steps.
inline Real success_auc(const std::vector<MetricsRow>& rows) {
  Real auc = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Real dx = static_cast<Real>(rows[i].env_steps) - static_cast<Real>(rows[i - 1].env_steps);
    auc += 0.5 * dx * (rows[i].eval_success_rate + rows[i - 1].eval_success_rate);
  }
  return auc;
}

}  // namespace hidio::trainer
