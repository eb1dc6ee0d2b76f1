#pragma once

#include <cmath>
#include <vector>

#include "hidio/nn/param_store.hpp"

namespace hidio::nn {

struct AdamConfig {
  Real lr = 1e-4;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real eps = 1e-8;
};

// Adam over one contiguous range of a ParamStore. Gradients in the range are
// consumed (zeroed) by every step.
class Adam {
 public:
  Adam() = default;
  Adam(ParamRange range, AdamConfig config) : range_(range), cfg_(config), m_(range.size, 0.0), v_(range.size, 0.0) {}

  void step(ParamStore& store) {
    ++t_;
    auto p = store.values(range_);
    auto g = store.grads(range_);
    const Real c1 = 1.0 - std::pow(cfg_.beta1, static_cast<Real>(t_));
    const Real c2 = 1.0 - std::pow(cfg_.beta2, static_cast<Real>(t_));
    for (std::size_t i = 0; i < range_.size; ++i) {
      m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g[i];
      v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      p[i] -= cfg_.lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.eps);
      g[i] = 0.0;
    }
  }

  std::size_t steps() const { return t_; }
  const ParamRange& range() const { return range_; }
  const std::vector<Real>& first_moment() const { return m_; }
  const std::vector<Real>& second_moment() const { return v_; }
  AdamConfig& config() { return cfg_; }

 private:
  ParamRange range_;
  AdamConfig cfg_;
  std::vector<Real> m_;
  std::vector<Real> v_;
  std::size_t t_ = 0;
};

inline void adam_step(ParamStore& store, Adam& opt) { opt.step(store); }

}  // namespace hidio::nn
