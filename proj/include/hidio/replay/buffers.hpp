#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hidio/discriminator/discriminator.hpp"
#include "hidio/errors.hpp"
#include "hidio/hierarchy/option_window.hpp"
#include "hidio/nn/checkpoint.hpp"
#include "hidio/replay/ring.hpp"
#include "hidio/sac/discount.hpp"
#include "hidio/sac/sac_learner.hpp"

namespace hidio::replay {

using hierarchy::OptionWindow;
using hierarchy::SubTrajectoryView;
using nn::Matrix;
using Real = double;
using Vec = std::vector<Real>;

/// One transition of an agent whose step may span several environment steps
/// (a scheduler window, or an action held for a few repeats).
struct Transition {
  Vec obs;
  Vec action;
  Real reward = 0.0;  // sum_k gamma^k r_k over the covered steps, as collected
  Vec next_obs;
  bool terminal = false;
  std::size_t steps = 1;  // environment steps covered
  bool operator==(const Transition&) const = default;
};

using SchedulerTransition = Transition;

template <typename Rng>
std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

class TransitionBuffer : public Ring<Transition> {
 public:
  using Ring<Transition>::Ring;

  template <typename Rng>
  std::vector<std::size_t> sample_indices(std::size_t B, Rng& rng) const {
    if (empty()) throw UsageError("sample from an empty transition buffer");
    std::vector<std::size_t> idx(B);
    for (auto& i : idx) i = uniform_index(size(), rng);
    return idx;
  }

  // Discount per row is gamma^steps, or 0 for terminal transitions.
  template <typename Rng>
  sac::TransitionBatch sample(std::size_t B, Real gamma, Rng& rng) const {
    return batch(sample_indices(B, rng), gamma);
  }

  sac::TransitionBatch batch(const std::vector<std::size_t>& idx, Real gamma) const {
    const Transition& first = at(idx.at(0));
    const auto B = static_cast<Eigen::Index>(idx.size());
    const auto O = static_cast<Eigen::Index>(first.obs.size());
    const auto A = static_cast<Eigen::Index>(first.action.size());
    sac::TransitionBatch b;
    b.obs.resize(B, O);
    b.next_obs.resize(B, O);
    b.action.resize(B, A);
    b.reward.resize(B, 1);
    b.discount.resize(B, 1);
    for (Eigen::Index r = 0; r < B; ++r) {
      const Transition& t = at(idx[static_cast<std::size_t>(r)]);
      b.obs.row(r) = Eigen::Map<const Eigen::RowVectorXd>(t.obs.data(), O);
      b.next_obs.row(r) = Eigen::Map<const Eigen::RowVectorXd>(t.next_obs.data(), O);
      b.action.row(r) = Eigen::Map<const Eigen::RowVectorXd>(t.action.data(), A);
      b.reward(r, 0) = t.reward;
      b.discount(r, 0) = t.terminal ? 0.0 : std::pow(gamma, static_cast<Real>(t.steps));
    }
    return b;
  }
};

using SchedulerBuffer = TransitionBuffer;

/// One sampled (window, k) pair. Rewards are not stored; see relabel().
struct WorkerSample {
  std::size_t window = 0;  // ring index at sampling time
  std::size_t k = 0;
  SubTrajectoryView view;
  Vec worker_obs;
  Vec next_worker_obs;
  Vec action;
  bool terminal = false;
  Real behavior_log_prob = 0.0;
};

struct WorkerBatch {
  std::vector<WorkerSample> items;
  Matrix worker_obs;
  Matrix next_worker_obs;
  Matrix actions;
  Matrix options;

  // Filled by relabel().
  Matrix disc_inputs;
  Eigen::VectorXd log_q;
  Matrix log_pi;
  Matrix reward;
  Real importance_log_ratio = std::nan("");

  std::size_t size() const { return items.size(); }
};

class WorkerBuffer : public Ring<OptionWindow> {
 public:
  WorkerBuffer() = default;
  WorkerBuffer(std::size_t capacity_windows, std::size_t action_dim, bool history_input)
      : Ring<OptionWindow>(capacity_windows), action_dim_(action_dim), history_(history_input) {}

  void push_window(OptionWindow w) {
    if (!w.closed()) throw UsageError("only closed option windows can be stored");
    if (w.valid_len() == 0) throw UsageError("empty option window");
    push(std::move(w));
  }

  std::size_t action_dim() const { return action_dim_; }
  bool history_input() const { return history_; }

  std::size_t stored_steps() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i) n += at(i).valid_len();
    return n;
  }

  // Uniform over (window, k < valid_len): draw window and slot uniformly and
  // reject slots past the valid prefix.
  template <typename Rng>
  std::pair<std::size_t, std::size_t> sample_pair(Rng& rng) const {
    if (empty()) throw UsageError("sample from an empty worker buffer");
    const std::size_t K = at(0).K();
    for (;;) {
      const std::size_t w = uniform_index(size(), rng);
      const std::size_t k = uniform_index(K, rng);
      if (k < at(w).valid_len()) return {w, k};
    }
  }

  WorkerSample element(std::size_t w, std::size_t k) const {
    const OptionWindow& win = at(w);
    WorkerSample s;
    s.window = w;
    s.k = k;
    s.view = win.view_at(k);
    s.worker_obs = hierarchy::worker_input(win, k, action_dim_, history_);
    s.next_worker_obs = hierarchy::next_worker_input(win, k, action_dim_, history_);
    const auto& st = win.steps()[k];
    s.action = st.action;
    s.terminal = st.terminal;
    s.behavior_log_prob = st.behavior_log_prob;
    return s;
  }

  template <typename Rng>
  WorkerBatch sample_worker_batch(std::size_t B, Rng& rng) const {
    if (B == 0) throw UsageError("worker batch size must be >= 1");
    WorkerBatch b;
    b.items.reserve(B);
    for (std::size_t i = 0; i < B; ++i) {
      auto [w, k] = sample_pair(rng);
      b.items.push_back(element(w, k));
    }
    assemble(b);
    return b;
  }

  static void assemble(WorkerBatch& b) {
    const auto B = static_cast<Eigen::Index>(b.items.size());
    const auto& f = b.items.front();
    auto fill = [B](Matrix& m, std::size_t width, auto&& get) {
      m.resize(B, static_cast<Eigen::Index>(width));
      for (Eigen::Index r = 0; r < B; ++r) {
        const Vec& v = get(r);
        if (v.size() != width) throw InternalError("ragged worker batch");
        m.row(r) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(width));
      }
    };
    fill(b.worker_obs, f.worker_obs.size(), [&](Eigen::Index r) -> const Vec& { return b.items[r].worker_obs; });
    fill(b.next_worker_obs, f.next_worker_obs.size(),
         [&](Eigen::Index r) -> const Vec& { return b.items[r].next_worker_obs; });
    fill(b.actions, f.action.size(), [&](Eigen::Index r) -> const Vec& { return b.items[r].action; });
    fill(b.options, f.view.option.dim(), [&](Eigen::Index r) -> const Vec& { return b.items[r].view.option.u; });
  }

 private:
  std::size_t action_dim_ = 1;
  bool history_ = false;
};

/// Recomputes every element's intrinsic reward with the current discriminator
/// and current worker policy. Nothing stored at collection time is reused.
/// The importance log-ratio is a diagnostic and never enters any loss.
inline void relabel(WorkerBatch& b, const discriminator::Discriminator& disc, const nn::ParamStore& store,
                    const sac::SacLearner& worker, bool log_importance_ratio = false) {
  if (b.items.empty()) throw UsageError("relabel on an empty batch");
  std::vector<SubTrajectoryView> views;
  views.reserve(b.items.size());
  for (const auto& it : b.items) views.push_back(it.view);
  b.disc_inputs = disc.features(views);
  b.log_q = disc.log_q(store, b.disc_inputs, b.options);
  if ((b.log_q.array() > 0.0).any()) throw InternalError("log q must be <= 0");
  b.log_pi = worker.log_prob(store, b.worker_obs, b.actions);
  b.reward.resize(b.log_q.size(), 1);
  for (Eigen::Index i = 0; i < b.log_q.size(); ++i)
    b.reward(i, 0) = discriminator::intrinsic_reward(b.log_q(i), b.log_pi(i, 0));
  if (log_importance_ratio) {
    Real s = 0.0;
    for (std::size_t i = 0; i < b.items.size(); ++i)
      s += b.log_pi(static_cast<Eigen::Index>(i), 0) - b.items[i].behavior_log_prob;
    b.importance_log_ratio = s / static_cast<Real>(b.items.size());
  } else {
    b.importance_log_ratio = std::nan("");
  }
}

// Worker SAC batch from a relabeled worker batch with per-step discounts.
inline sac::TransitionBatch worker_transitions(const WorkerBatch& b, const sac::DiscountSpec& spec) {
  if (b.reward.rows() != static_cast<Eigen::Index>(b.size())) throw UsageError("worker batch not relabeled");
  sac::TransitionBatch t;
  t.obs = b.worker_obs;
  t.action = b.actions;
  t.reward = b.reward;
  t.next_obs = b.next_worker_obs;
  t.discount.resize(static_cast<Eigen::Index>(b.size()), 1);
  for (std::size_t i = 0; i < b.size(); ++i)
    t.discount(static_cast<Eigen::Index>(i), 0) = sac::step_discount(spec, b.items[i].k, b.items[i].terminal);
  return t;
}

// ---------------------------------------------------------------------------
// Snapshots

inline constexpr char kReplayMagic[8] = {'H', 'I', 'D', 'I', 'O', 'R', 'P', 'L'};
inline constexpr std::uint32_t kReplayVersion = 1;

namespace detail {
using nn::detail::get;
using nn::detail::put;

inline void put_vec(std::ostream& os, const Vec& v) {
  put<std::uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(Real)));
}

inline Vec get_vec(std::istream& is) {
  const auto n = get<std::uint64_t>(is);
  if (n > (1u << 24)) throw ConfigError("replay snapshot corrupt: vector too long");
  Vec v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(Real)));
  if (!is) throw ConfigError("replay snapshot truncated");
  return v;
}
}  // namespace detail

inline void save_snapshot(const std::string& path, const TransitionBuffer& sched, const WorkerBuffer& worker) {
  using namespace detail;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open replay snapshot for writing: " + path);
  os.write(kReplayMagic, 8);
  put<std::uint32_t>(os, kReplayVersion);
  put<std::uint64_t>(os, sched.capacity());
  put<std::uint64_t>(os, sched.total_pushed());
  put<std::uint64_t>(os, sched.size());
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const auto& t = sched.at(i);
    put_vec(os, t.obs);
    put_vec(os, t.action);
    put<Real>(os, t.reward);
    put_vec(os, t.next_obs);
    put<std::uint8_t>(os, t.terminal);
    put<std::uint64_t>(os, t.steps);
  }
  put<std::uint64_t>(os, worker.capacity());
  put<std::uint64_t>(os, worker.action_dim());
  put<std::uint8_t>(os, worker.history_input());
  put<std::uint64_t>(os, worker.total_pushed());
  put<std::uint64_t>(os, worker.size());
  for (std::size_t i = 0; i < worker.size(); ++i) {
    const auto& w = worker.at(i);
    put<std::uint64_t>(os, w.h());
    put<std::uint64_t>(os, w.K());
    put_vec(os, w.option().u);
    put_vec(os, w.initial_state());
    put<std::uint64_t>(os, w.valid_len());
    for (const auto& s : w.steps()) {
      put<std::uint64_t>(os, s.k);
      put_vec(os, s.state);
      put_vec(os, s.action);
      put_vec(os, s.next_state);
      put<Real>(os, s.env_reward);
      put<std::uint8_t>(os, s.done);
      put<std::uint8_t>(os, s.terminal);
      put<Real>(os, s.behavior_log_prob);
    }
  }
  if (!os) throw ConfigError("failed writing replay snapshot: " + path);
}

inline void load_snapshot(const std::string& path, TransitionBuffer& sched, WorkerBuffer& worker) {
  using namespace detail;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open replay snapshot: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kReplayMagic, 8) != 0) throw ConfigError("not a replay snapshot: " + path);
  if (get<std::uint32_t>(is) != kReplayVersion) throw ConfigError("unsupported replay snapshot version");

  const auto s_cap = get<std::uint64_t>(is);
  const auto s_pushed = get<std::uint64_t>(is);
  const auto s_n = get<std::uint64_t>(is);
  std::vector<Transition> ts(s_n);
  for (auto& t : ts) {
    t.obs = get_vec(is);
    t.action = get_vec(is);
    t.reward = get<Real>(is);
    t.next_obs = get_vec(is);
    t.terminal = get<std::uint8_t>(is) != 0;
    t.steps = get<std::uint64_t>(is);
  }
  TransitionBuffer s(s_cap);
  s.assign(std::move(ts), s_pushed);

  const auto w_cap = get<std::uint64_t>(is);
  const auto w_adim = get<std::uint64_t>(is);
  const bool w_hist = get<std::uint8_t>(is) != 0;
  const auto w_pushed = get<std::uint64_t>(is);
  const auto w_n = get<std::uint64_t>(is);
  std::vector<OptionWindow> ws;
  ws.reserve(w_n);
  for (std::uint64_t i = 0; i < w_n; ++i) {
    const auto h = get<std::uint64_t>(is);
    const auto K = get<std::uint64_t>(is);
    hierarchy::OptionVector u{get_vec(is)};
    Vec s0 = get_vec(is);
    OptionWindow w(h, std::move(u), std::move(s0), K);
    const auto n = get<std::uint64_t>(is);
    for (std::uint64_t j = 0; j < n; ++j) {
      hierarchy::StepRecord r;
      r.k = get<std::uint64_t>(is);
      r.state = get_vec(is);
      r.action = get_vec(is);
      r.next_state = get_vec(is);
      r.env_reward = get<Real>(is);
      r.done = get<std::uint8_t>(is) != 0;
      r.terminal = get<std::uint8_t>(is) != 0;
      r.behavior_log_prob = get<Real>(is);
      w.append_step(std::move(r));
    }
    ws.push_back(std::move(w));
  }
  WorkerBuffer wb(w_cap, w_adim, w_hist);
  wb.assign(std::move(ws), w_pushed);
  sched = std::move(s);
  worker = std::move(wb);
}

}  // namespace hidio::replay
