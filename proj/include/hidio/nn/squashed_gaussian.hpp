#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/nn/mlp.hpp"
#include "hidio/nn/tape.hpp"

namespace hidio::nn {

inline constexpr Real kLogStdMin = -20.0;
inline constexpr Real kLogStdMax = 2.0;
inline constexpr Real kTanhEps = 1e-6;
inline const Real kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

struct GaussianPolicyOutput {
  std::vector<Real> mean;
  std::vector<Real> log_std;
  std::vector<Real> sample;  // pre-squash z = mean + exp(log_std) * noise
  std::vector<Real> action;  // tanh(z)
  Real log_prob = 0.0;
};

inline constexpr Real kActionBound = 1.0 - 1e-12;

// tanh kept strictly inside (-1, 1); tanh itself rounds to +-1 for |x| > ~19.
inline Var squash(const Var& x) {
  return ops::detail::unary(
      x,
      [](Real v) {
        const Real y = std::tanh(v);
        return y > kActionBound ? kActionBound : (y < -kActionBound ? -kActionBound : y);
      },
      [](Real v, Real) {
        const Real y = std::tanh(v);
        return 1.0 - y * y;
      });
}

// Traced pieces of a reparameterised tanh-Gaussian draw over a batch.
struct SquashedSample {
  Var mean;
  Var log_std;
  Var pre_tanh;
  Var action;
  Var log_prob;  // (B x 1)
};

// `head` is the (B x 2A) policy network output: [mean | raw log_std].
inline SquashedSample squashed_gaussian(const Var& head, const Matrix& noise) {
  if (head.cols() % 2 != 0) throw ConfigError("policy head width must be even");
  const Eigen::Index a = head.cols() / 2;
  if (noise.rows() != head.rows() || noise.cols() != a) throw ConfigError("noise shape does not match action dim");
  Tape& t = *head.tape();
  SquashedSample s;
  s.mean = ops::slice_cols(head, 0, a);
  s.log_std = ops::clamp(ops::slice_cols(head, a, a), kLogStdMin, kLogStdMax);
  Var eps = t.constant(noise);
  s.pre_tanh = ops::add(s.mean, ops::mul(ops::exp(s.log_std), eps));
  s.action = squash(s.pre_tanh);
  // (z - mean) / std == noise exactly, so the quadratic term is a constant.
  Matrix quad = (-0.5 * noise.array().square() - kHalfLog2Pi).matrix();
  Var gauss = ops::sub(t.constant(std::move(quad)), s.log_std);
  Var jac = ops::log(ops::add_scalar(ops::neg(ops::square(s.action)), 1.0 + kTanhEps));
  s.log_prob = ops::sum_cols(ops::sub(gauss, jac));
  return s;
}

// Pre-squash value of a stored action, clipped so atanh stays finite.
inline Real pre_tanh_of(Real action) {
  constexpr Real lim = 1.0 - 1e-7;
  return std::atanh(action < -lim ? -lim : (action > lim ? lim : action));
}

// Log-density of given squashed actions under the policy head (B x 1).
inline Var squashed_log_prob(const Var& head, const Matrix& actions) {
  const Eigen::Index a = head.cols() / 2;
  if (actions.rows() != head.rows() || actions.cols() != a) throw ConfigError("action shape does not match head");
  Tape& t = *head.tape();
  Var mean = ops::slice_cols(head, 0, a);
  Var log_std = ops::clamp(ops::slice_cols(head, a, a), kLogStdMin, kLogStdMax);
  Matrix z = actions.unaryExpr([](Real v) { return pre_tanh_of(v); });
  Matrix sq = actions.unaryExpr([](Real v) {
    const Real th = std::tanh(pre_tanh_of(v));
    return std::log(1.0 - th * th + kTanhEps);
  });
  Var diff = ops::mul(ops::sub(t.constant(std::move(z)), mean), ops::exp(ops::neg(log_std)));
  Var gauss = ops::add_scalar(ops::neg(ops::add(ops::scale(ops::square(diff), 0.5), log_std)), -kHalfLog2Pi);
  return ops::sum_cols(ops::sub(gauss, t.constant(std::move(sq))));
}

inline Matrix deterministic_action(const Matrix& head) {
  const Eigen::Index a = head.cols() / 2;
  return head.leftCols(a).array().tanh().min(kActionBound).max(-kActionBound).matrix();
}

// Single-input draw through a policy MLP with caller-supplied standard normal noise.
inline GaussianPolicyOutput sample_squashed_gaussian(ParamStore& store, const Mlp& policy,
                                                     std::span<const Real> input, std::span<const Real> noise) {
  if (policy.spec().output_dim % 2 != 0) throw ConfigError("policy MLP output must be 2 * action_dim");
  const std::size_t a = policy.spec().output_dim / 2;
  if (noise.size() != a) throw ConfigError("noise length must equal action dim");
  Tape tape;
  Var x = tape.constant_row(input);
  Var head = policy.forward(tape, store, x, false);
  Matrix n = Eigen::Map<const Matrix>(noise.data(), 1, static_cast<Eigen::Index>(a));
  SquashedSample s = squashed_gaussian(head, n);
  auto row = [](const Var& v) { return std::vector<Real>(v.value().data(), v.value().data() + v.value().size()); };
  GaussianPolicyOutput out;
  out.mean = row(s.mean);
  out.log_std = row(s.log_std);
  out.sample = row(s.pre_tanh);
  out.action = row(s.action);
  out.log_prob = s.log_prob.scalar();
  return out;
}

}  // namespace hidio::nn
