#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/hierarchy/option_window.hpp"
#include "hidio/nn/adam.hpp"
#include "hidio/nn/mlp.hpp"
#include "hidio/nn/tape.hpp"

namespace hidio::discriminator {

using hierarchy::OptionVector;
using hierarchy::SubTrajectoryView;
using nn::Matrix;
using nn::Real;
using Vec = std::vector<Real>;

// Weight of the worker log-probability in the intrinsic reward.
inline constexpr Real kEntropyWeight = 0.01;

enum class FeatureKind { State, Action, StateDiff, StateAction, StateConcat, ActionConcat };

inline const std::vector<FeatureKind>& all_feature_kinds() {
  static const std::vector<FeatureKind> kinds{FeatureKind::State,       FeatureKind::Action,
                                              FeatureKind::StateDiff,   FeatureKind::StateAction,
                                              FeatureKind::StateConcat, FeatureKind::ActionConcat};
  return kinds;
}

inline std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::State: return "State";
    case FeatureKind::Action: return "Action";
    case FeatureKind::StateDiff: return "StateDiff";
    case FeatureKind::StateAction: return "StateAction";
    case FeatureKind::StateConcat: return "StateConcat";
    case FeatureKind::ActionConcat: return "ActionConcat";
  }
  return "?";
}

inline FeatureKind feature_from_string(const std::string& s) {
  for (auto k : all_feature_kinds())
    if (to_string(k) == s) return k;
  throw ConfigError("unknown feature kind: " + s);
}

inline std::size_t feature_input_dim(FeatureKind kind, std::size_t S, std::size_t A, std::size_t K) {
  switch (kind) {
    case FeatureKind::State: return S;
    case FeatureKind::Action: return S + A;
    case FeatureKind::StateDiff: return S;
    case FeatureKind::StateAction: return A + S;
    case FeatureKind::StateConcat: return K * S;
    case FeatureKind::ActionConcat: return S + K * A;
  }
  return 0;
}

/// Discriminator input for the sub-trajectory ending at step k = prefix_len - 1.
inline Vec extract_input(FeatureKind kind, const SubTrajectoryView& v) {
  if (v.prefix_len == 0 || v.prefix_len > v.states.size()) throw UsageError("malformed sub-trajectory view");
  const std::size_t k = v.prefix_len - 1;
  const Vec& next = v.states[k];
  const Vec& act = v.actions[k];
  Vec out;
  auto append = [&out](const Vec& x) { out.insert(out.end(), x.begin(), x.end()); };
  switch (kind) {
    case FeatureKind::State:
      append(next);
      break;
    case FeatureKind::Action:
      append(v.s0);
      append(act);
      break;
    case FeatureKind::StateDiff: {
      const Vec& prev = k == 0 ? v.s0 : v.states[k - 1];
      out.resize(next.size());
      for (std::size_t i = 0; i < next.size(); ++i) out[i] = next[i] - prev[i];
      break;
    }
    case FeatureKind::StateAction:
      append(act);
      append(next);
      break;
    case FeatureKind::StateConcat:
      for (const auto& s : v.states) append(s);
      break;
    case FeatureKind::ActionConcat:
      append(v.s0);
      for (const auto& a : v.actions) append(a);
      break;
  }
  return out;
}

inline Real squared_distance(std::span<const Real> f, std::span<const Real> u) {
  if (f.size() != u.size()) throw ConfigError("feature/option dimension mismatch");
  Real s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - u[i]) * (f[i] - u[i]);
  return s;
}

inline Real intrinsic_reward(Real log_q, Real worker_log_prob) { return log_q - kEntropyWeight * worker_log_prob; }

struct DiscriminatorConfig {
  FeatureKind kind = FeatureKind::StateAction;
  std::size_t state_dim = 1;
  std::size_t action_dim = 1;
  std::size_t K = 3;
  std::size_t option_dim = 1;
  std::vector<std::size_t> hidden{32, 32};
  Real lr = 1e-4;
};

/// q_psi(u | sub-trajectory) with log q = -||f_psi(features) - u||^2.
class Discriminator {
 public:
  Discriminator() = default;
  Discriminator(nn::ParamStore& store, const std::string& prefix, DiscriminatorConfig cfg)
      : cfg_(std::move(cfg)),
        mlp_(store, prefix, nn::MlpSpec{feature_input_dim(cfg_.kind, cfg_.state_dim, cfg_.action_dim, cfg_.K),
                                        cfg_.hidden, cfg_.option_dim, nn::Activation::Relu}) {
    opt_ = nn::Adam(mlp_.range(store), nn::AdamConfig{cfg_.lr});
  }

  template <typename Rng>
  void init(nn::ParamStore& store, Rng& rng) const {
    mlp_.init(store, rng);
  }

  const DiscriminatorConfig& config() const { return cfg_; }
  const nn::Mlp& mlp() const { return mlp_; }
  FeatureKind kind() const { return cfg_.kind; }
  std::size_t input_dim() const { return mlp_.spec().input_dim; }
  nn::ParamRange range(const nn::ParamStore& store) const { return mlp_.range(store); }

  Matrix features(const std::vector<SubTrajectoryView>& views) const {
    Matrix x(static_cast<Eigen::Index>(views.size()), static_cast<Eigen::Index>(input_dim()));
    for (std::size_t i = 0; i < views.size(); ++i) {
      Vec f = extract_input(cfg_.kind, views[i]);
      if (f.size() != input_dim()) throw ConfigError("feature width does not match discriminator input");
      for (std::size_t j = 0; j < f.size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f[j];
    }
    return x;
  }

  Matrix predict(const nn::ParamStore& store, const Matrix& inputs) const { return mlp_.forward(store, inputs); }

  // Row-wise log q for a batch of (features, options).
  Eigen::VectorXd log_q(const nn::ParamStore& store, const Matrix& inputs, const Matrix& options) const {
    Matrix f = predict(store, inputs);
    if (f.cols() != options.cols() || f.rows() != options.rows()) throw ConfigError("option batch shape mismatch");
    return -(f - options).rowwise().squaredNorm();
  }

  Real log_q(const nn::ParamStore& store, const SubTrajectoryView& view, const OptionVector& u) const {
    Vec in = extract_input(cfg_.kind, view);
    Vec f = mlp_.forward(store, std::span<const Real>(in));
    return -squared_distance(f, u.u);
  }

  Real intrinsic_reward(const nn::ParamStore& store, Real worker_log_prob, const SubTrajectoryView& view,
                        const OptionVector& u) const {
    return discriminator::intrinsic_reward(log_q(store, view, u), worker_log_prob);
  }

  // Mean over the batch of ||f - u||^2; gradients reach only this network.
  nn::Var loss(nn::Tape& tape, nn::ParamStore& store, const Matrix& inputs, const Matrix& options) const {
    if (inputs.rows() == 0) throw UsageError("discriminator loss on an empty batch");
    nn::Var f = mlp_.forward(tape, store, tape.constant(inputs));
    nn::Var diff = nn::ops::sub(f, tape.constant(options));
    return nn::ops::mean(nn::ops::sum_cols(nn::ops::square(diff)));
  }

  Real loss(nn::ParamStore& store, const std::vector<SubTrajectoryView>& views) const {
    if (views.empty()) throw UsageError("discriminator loss on an empty batch");
    nn::Tape tape;
    return loss(tape, store, features(views), options_of(views)).scalar();
  }

  // One Adam step on the batch; returns the loss before the step.
  Real update(nn::ParamStore& store, const Matrix& inputs, const Matrix& options) {
    nn::Tape tape;
    nn::Var l = loss(tape, store, inputs, options);
    store.zero_grads(opt_.range());
    tape.backward(l);
    opt_.step(store);
    return l.scalar();
  }

  static Matrix options_of(const std::vector<SubTrajectoryView>& views) {
    if (views.empty()) return Matrix(0, 0);
    Matrix u(static_cast<Eigen::Index>(views.size()), static_cast<Eigen::Index>(views.front().option.dim()));
    for (std::size_t i = 0; i < views.size(); ++i)
      for (std::size_t j = 0; j < views[i].option.dim(); ++j)
        u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = views[i].option.u[j];
    return u;
  }

  nn::Adam& optimizer() { return opt_; }

 private:
  DiscriminatorConfig cfg_;
  nn::Mlp mlp_;
  nn::Adam opt_;
};

}  // namespace hidio::discriminator
