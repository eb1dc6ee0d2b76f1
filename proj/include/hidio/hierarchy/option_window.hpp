#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hidio/errors.hpp"

namespace hidio::hierarchy {

using Real = double;
using Vec = std::vector<Real>;

// Number of scheduler decisions in an episode of T steps: ceil(T / K).
constexpr std::size_t window_count(std::size_t T, std::size_t K) { return (T + K - 1) / K; }

/// Latent option u in [-1, 1]^D passed from the scheduler to the worker.
struct OptionVector {
  Vec u;

  std::size_t dim() const { return u.size(); }
  bool in_bounds() const {
    return std::all_of(u.begin(), u.end(), [](Real v) { return v >= -1.0 && v <= 1.0; });
  }
  bool operator==(const OptionVector&) const = default;
};

struct StepRecord {
  std::size_t k = 0;
  Vec state;
  Vec action;
  Vec next_state;
  Real env_reward = 0.0;
  bool done = false;      // episode ended at this step (any reason)
  bool terminal = false;  // true termination; no bootstrapping past this step
  Real behavior_log_prob = 0.0;  // worker log pi(a) at collection time, diagnostics only
  bool operator==(const StepRecord&) const = default;
};

/// Fixed-width input to the discriminator: the sub-trajectory prefix up to
/// step k of a window, zero-padded to K slots.
struct SubTrajectoryView {
  OptionVector option;
  Vec s0;
  std::vector<Vec> states;   // slot j holds s_{h,j+1} for j <= k, zeros after
  std::vector<Vec> actions;  // slot j holds a_{h,j} for j <= k, zeros after
  std::size_t prefix_len = 0;  // k + 1
  bool operator==(const SubTrajectoryView&) const = default;
};

/// One scheduler step: the option, the state it was issued in, and up to K
/// worker steps. Closed once K steps are recorded or the episode ends.
class OptionWindow {
 public:
  OptionWindow() = default;
  OptionWindow(std::size_t h, OptionVector option, Vec initial_state, std::size_t K)
      : h_(h), K_(K), option_(std::move(option)), initial_state_(std::move(initial_state)) {
    if (K_ < 1) throw ConfigError("option window length K must be >= 1");
    steps_.reserve(K_);
  }

  void append_step(StepRecord step) {
    if (closed()) throw UsageError("append_step on a closed option window");
    if (step.k != steps_.size())
      throw InternalError("step index " + std::to_string(step.k) + " does not follow valid_len " +
                          std::to_string(steps_.size()));
    const Vec& expected = steps_.empty() ? initial_state_ : steps_.back().next_state;
    if (step.state != expected) throw InternalError("option window chaining violated at k=" + std::to_string(step.k));
    steps_.push_back(std::move(step));
  }

  bool closed() const { return steps_.size() == K_ || (!steps_.empty() && steps_.back().done); }
  bool full() const { return steps_.size() == K_; }
  bool terminal() const { return !steps_.empty() && steps_.back().terminal; }

  std::size_t h() const { return h_; }
  std::size_t K() const { return K_; }
  std::size_t valid_len() const { return steps_.size(); }
  const OptionVector& option() const { return option_; }
  const Vec& initial_state() const { return initial_state_; }
  const std::vector<StepRecord>& steps() const { return steps_; }

  // s_{h,K}, or the last next_state of a truncated window.
  const Vec& boundary_state() const {
    if (!closed()) throw UsageError("boundary_state on an open option window");
    return steps_.back().next_state;
  }

  // s_{h,j} for 0 <= j <= valid_len.
  const Vec& state_at(std::size_t j) const {
    if (j > steps_.size()) throw UsageError("state index past recorded steps");
    return j == 0 ? initial_state_ : steps_[j - 1].next_state;
  }

  SubTrajectoryView view_at(std::size_t k) const {
    if (k >= steps_.size())
      throw UsageError("view_at(" + std::to_string(k) + ") with valid_len " + std::to_string(steps_.size()));
    const std::size_t S = initial_state_.size();
    const std::size_t A = steps_.front().action.size();
    SubTrajectoryView v;
    v.option = option_;
    v.s0 = initial_state_;
    v.states.assign(K_, Vec(S, 0.0));
    v.actions.assign(K_, Vec(A, 0.0));
    for (std::size_t j = 0; j <= k; ++j) {
      v.states[j] = steps_[j].next_state;
      v.actions[j] = steps_[j].action;
    }
    v.prefix_len = k + 1;
    return v;
  }

  // Sum over recorded steps of gamma^k * r_{h,k}.
  Real discounted_return(Real gamma) const {
    Real total = 0.0, w = 1.0;
    for (const auto& s : steps_) {
      total += w * s.env_reward;
      w *= gamma;
    }
    return total;
  }

  bool operator==(const OptionWindow&) const = default;

 private:
  std::size_t h_ = 0;
  std::size_t K_ = 1;
  OptionVector option_;
  Vec initial_state_;
  std::vector<StepRecord> steps_;
};

inline std::size_t worker_input_dim(std::size_t S, std::size_t A, std::size_t D, std::size_t K, bool history) {
  return history ? K * S + (K - 1) * A + D : S + D;
}

/// Worker policy input at step k of a window (0 <= k <= valid_len, k < K).
///
/// Default: [s_{h,k}, u]. With `history`: [s_{h,0..k} padded to K slots,
/// a_{h,0..k-1} padded to K-1 slots, u].
inline Vec worker_input(const OptionWindow& w, std::size_t k, std::size_t A, bool history) {
  if (k >= w.K()) throw UsageError("worker_input index must be < K");
  const Vec& u = w.option().u;
  Vec out;
  if (!history) {
    const Vec& s = w.state_at(k);
    out.reserve(s.size() + u.size());
    out.insert(out.end(), s.begin(), s.end());
  } else {
    const std::size_t S = w.initial_state().size();
    for (std::size_t j = 0; j < w.K(); ++j) {
      if (j <= k) {
        const Vec& s = w.state_at(j);
        out.insert(out.end(), s.begin(), s.end());
      } else {
        out.insert(out.end(), S, 0.0);
      }
    }
    if (w.K() > 1) {
      for (std::size_t j = 0; j + 1 < w.K(); ++j) {
        if (j < k) {
          const Vec& a = w.steps()[j].action;
          out.insert(out.end(), a.begin(), a.end());
        } else {
          out.insert(out.end(), A, 0.0);
        }
      }
    }
  }
  out.insert(out.end(), u.begin(), u.end());
  return out;
}

// Input built for a fresh window that starts in `state` under option `u`
// (used for the bootstrap input after the last step of a window).
inline Vec fresh_worker_input(const Vec& state, const OptionVector& u, std::size_t K, std::size_t A, bool history) {
  Vec out;
  if (!history) {
    out = state;
  } else {
    out = state;
    out.resize(K * state.size(), 0.0);
    out.resize(out.size() + (K - 1) * A, 0.0);
  }
  out.insert(out.end(), u.u.begin(), u.u.end());
  return out;
}

// Input for the state following step k of a closed-or-open window.
inline Vec next_worker_input(const OptionWindow& w, std::size_t k, std::size_t action_dim, bool history) {
  if (k + 1 < w.K()) return worker_input(w, k + 1, action_dim, history);
  return fresh_worker_input(w.steps()[k].next_state, w.option(), w.K(), action_dim, history);
}

}  // namespace hidio::hierarchy
