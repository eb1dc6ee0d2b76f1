#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hidio/errors.hpp"

namespace hidio::nn {

using Real = double;

struct SliceInfo {
  std::string name;
  std::size_t offset = 0;
  std::vector<std::size_t> shape;

  std::size_t size() const {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  }
  std::size_t rows() const { return shape.size() == 2 ? shape[0] : 1; }
  std::size_t cols() const { return shape.size() == 2 ? shape[1] : (shape.empty() ? 1 : shape[0]); }
};

// Contiguous [offset, offset + size) span of the flat store.
struct ParamRange {
  std::size_t offset = 0;
  std::size_t size = 0;
  std::size_t end() const { return offset + size; }
};

/// Flat value/gradient storage shared by every network of an agent.
///
/// Slices are appended in registration order, so they never overlap and a
/// network registered in one go occupies a contiguous range that optimizers
/// and target-network averaging can address directly.
class ParamStore {
 public:
  const SliceInfo& add(const std::string& name, std::vector<std::size_t> shape) {
    if (index_.count(name)) throw ConfigError("duplicate parameter slice: " + name);
    if (shape.empty()) throw ConfigError("parameter slice needs a shape: " + name);
    for (auto d : shape)
      if (d == 0) throw ConfigError("zero-sized dimension in slice: " + name);
    SliceInfo info{name, values_.size(), std::move(shape)};
    values_.resize(values_.size() + info.size(), 0.0);
    grads_.resize(values_.size(), 0.0);
    index_.emplace(name, slices_.size());
    slices_.push_back(std::move(info));
    return slices_.back();
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  const SliceInfo& slice(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown parameter slice: " + name);
    return slices_[it->second];
  }

  const std::vector<SliceInfo>& slices() const { return slices_; }

  // Range covering every slice whose name starts with `prefix`; they must be contiguous.
  ParamRange range(const std::string& prefix) const {
    std::size_t lo = values_.size(), hi = 0;
    std::size_t covered = 0;
    for (const auto& s : slices_) {
      if (s.name.compare(0, prefix.size(), prefix) != 0) continue;
      lo = std::min(lo, s.offset);
      hi = std::max(hi, s.offset + s.size());
      covered += s.size();
    }
    if (covered == 0) throw ConfigError("no parameter slices with prefix: " + prefix);
    if (hi - lo != covered) throw ConfigError("slices with prefix are not contiguous: " + prefix);
    return {lo, covered};
  }

  std::size_t size() const { return values_.size(); }

  std::span<Real> values() { return values_; }
  std::span<const Real> values() const { return values_; }
  std::span<Real> grads() { return grads_; }
  std::span<const Real> grads() const { return grads_; }

  std::span<Real> values(const SliceInfo& s) { return {values_.data() + s.offset, s.size()}; }
  std::span<const Real> values(const SliceInfo& s) const { return {values_.data() + s.offset, s.size()}; }
  std::span<Real> grads(const SliceInfo& s) { return {grads_.data() + s.offset, s.size()}; }
  std::span<const Real> grads(const SliceInfo& s) const { return {grads_.data() + s.offset, s.size()}; }

  std::span<Real> values(const ParamRange& r) { return {values_.data() + r.offset, r.size}; }
  std::span<const Real> values(const ParamRange& r) const { return {values_.data() + r.offset, r.size}; }
  std::span<Real> grads(const ParamRange& r) { return {grads_.data() + r.offset, r.size}; }

  void zero_grads() { std::fill(grads_.begin(), grads_.end(), 0.0); }
  void zero_grads(const ParamRange& r) {
    std::fill(grads_.begin() + r.offset, grads_.begin() + r.end(), 0.0);
  }

  // target <- (1 - tau) * target + tau * source, elementwise over equal-sized ranges.
  void polyak(const ParamRange& source, const ParamRange& target, Real tau) {
    if (source.size != target.size) throw ConfigError("polyak ranges differ in size");
    const Real* src = values_.data() + source.offset;
    Real* dst = values_.data() + target.offset;
    for (std::size_t i = 0; i < source.size; ++i) dst[i] = (1.0 - tau) * dst[i] + tau * src[i];
  }

 private:
  std::vector<Real> values_;
  std::vector<Real> grads_;
  std::vector<SliceInfo> slices_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace hidio::nn
