#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "hidio/errors.hpp"

namespace hidio::sac {

using Real = double;

enum class DiscountMode { Geometric, HardWindow, SoftWindow };

struct DiscountSpec {
  DiscountMode mode = DiscountMode::Geometric;
  Real gamma = 0.99;
  std::size_t K = 1;

  void validate() const {
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("discount gamma must lie in [0, 1]");
    if (K < 1) throw ConfigError("discount window K must be >= 1");
  }
};

inline DiscountMode discount_mode_from_string(const std::string& s) {
  if (s == "hard") return DiscountMode::HardWindow;
  if (s == "soft") return DiscountMode::SoftWindow;
  if (s == "geometric") return DiscountMode::Geometric;
  throw ConfigError("unknown discount mode: " + s);
}

inline std::string to_string(DiscountMode m) {
  switch (m) {
    case DiscountMode::HardWindow: return "hard";
    case DiscountMode::SoftWindow: return "soft";
    case DiscountMode::Geometric: return "geometric";
  }
  return "?";
}

// Per-step bootstrap weight eta for the transition leaving step k of a window.
inline Real step_discount(const DiscountSpec& spec, std::size_t k, bool terminal) {
  if (terminal) return 0.0;
  switch (spec.mode) {
    case DiscountMode::HardWindow:
      if (k >= spec.K) throw UsageError("step index outside option window");
      return k + 1 == spec.K ? 0.0 : 1.0;
    case DiscountMode::SoftWindow:
      if (k >= spec.K) throw UsageError("step index outside option window");
      return 1.0 - 1.0 / static_cast<Real>(spec.K);
    case DiscountMode::Geometric:
      return spec.gamma;
  }
  return 0.0;
}

// Sum over action dimensions of ln(max_i - min_i) + ln(delta).
inline Real target_entropy(std::span<const std::pair<Real, Real>> ranges, Real delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("target entropy delta must lie in (0, 1)");
  Real h = 0.0;
  for (const auto& [lo, hi] : ranges) {
    if (!(hi > lo) || !std::isfinite(hi - lo)) throw ConfigError("action range must be finite and non-empty");
    h += std::log(hi - lo) + std::log(delta);
  }
  return h;
}

inline Real target_entropy(std::size_t action_dim, Real lo, Real hi, Real delta) {
  std::vector<std::pair<Real, Real>> r(action_dim, {lo, hi});
  return target_entropy(std::span<const std::pair<Real, Real>>(r), delta);
}

}  // namespace hidio::sac
