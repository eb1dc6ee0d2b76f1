#pragma once

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/nn/param_store.hpp"
#include "hidio/nn/tape.hpp"

namespace hidio::nn {

enum class Activation { Relu, Tanh };

inline Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  throw ConfigError("unknown activation: " + s);
}

struct MlpSpec {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden;
  std::size_t output_dim = 1;
  Activation activation = Activation::Relu;

  void validate() const {
    if (input_dim < 1 || output_dim < 1) throw ConfigError("MLP dims must be >= 1");
    for (auto h : hidden)
      if (h < 1) throw ConfigError("MLP hidden widths must be >= 1");
  }
};

/// An MLP whose weights live in a ParamStore under `<prefix>.l<i>.{weight,bias}`.
class Mlp {
 public:
  Mlp() = default;

  // Registers all layer slices contiguously (weights are zero until init()).
  Mlp(ParamStore& store, const std::string& prefix, MlpSpec spec) : prefix_(prefix), spec_(std::move(spec)) {
    spec_.validate();
    std::size_t in = spec_.input_dim;
    std::vector<std::size_t> widths = spec_.hidden;
    widths.push_back(spec_.output_dim);
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const std::string base = prefix + ".l" + std::to_string(i);
      Layer l;
      l.weight = store.add(base + ".weight", {widths[i], in});
      l.bias = store.add(base + ".bias", {1, widths[i]});
      layers_.push_back(l);
      in = widths[i];
    }
  }

  const MlpSpec& spec() const { return spec_; }
  const std::string& prefix() const { return prefix_; }
  std::size_t num_layers() const { return layers_.size(); }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases; the last
  // layer is additionally multiplied by `last_layer_scale`.
  template <typename Rng>
  void init(ParamStore& store, Rng& rng, Real last_layer_scale = 1.0) const {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const Real bound = 1.0 / std::sqrt(static_cast<Real>(layers_[i].weight.cols()));
      const Real s = (i + 1 == layers_.size()) ? last_layer_scale : 1.0;
      std::uniform_real_distribution<Real> dist(-bound, bound);
      for (auto& w : store.values(layers_[i].weight)) w = s * dist(rng);
      for (auto& b : store.values(layers_[i].bias)) b = s * dist(rng);
    }
  }

  ParamRange range(const ParamStore& store) const { return store.range(prefix_ + "."); }

  // Traced forward pass over a (batch x input_dim) node.
  Var forward(Tape& tape, ParamStore& store, const Var& input, bool track = true) const {
    if (input.cols() != static_cast<Eigen::Index>(spec_.input_dim))
      throw ConfigError("MLP " + prefix_ + ": expected input width " + std::to_string(spec_.input_dim) +
                        ", got " + std::to_string(input.cols()));
    Var h = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      Var w = tape.param(store, layers_[i].weight, track);
      Var b = tape.param(store, layers_[i].bias, track);
      h = ops::linear(h, w, b);
      if (i + 1 < layers_.size()) h = spec_.activation == Activation::Relu ? ops::relu(h) : ops::tanh(h);
    }
    return h;
  }

  // Untraced batched forward pass.
  Matrix forward(const ParamStore& store, const Matrix& input) const {
    if (input.cols() != static_cast<Eigen::Index>(spec_.input_dim))
      throw ConfigError("MLP " + prefix_ + ": expected input width " + std::to_string(spec_.input_dim) +
                        ", got " + std::to_string(input.cols()));
    Matrix h = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& L = layers_[i];
      Eigen::Map<const Matrix> w(store.values(L.weight).data(), static_cast<Eigen::Index>(L.weight.rows()),
                                 static_cast<Eigen::Index>(L.weight.cols()));
      Eigen::Map<const Matrix> b(store.values(L.bias).data(), 1, static_cast<Eigen::Index>(L.bias.cols()));
      Matrix next = h * w.transpose();
      next.rowwise() += b.row(0);
      if (i + 1 < layers_.size()) {
        if (spec_.activation == Activation::Relu)
          next = next.cwiseMax(0.0);
        else
          next = next.array().tanh().matrix();
      }
      h = std::move(next);
    }
    return h;
  }

  std::vector<Real> forward(const ParamStore& store, std::span<const Real> input) const {
    if (input.size() != spec_.input_dim)
      throw ConfigError("MLP " + prefix_ + ": expected input length " + std::to_string(spec_.input_dim) +
                        ", got " + std::to_string(input.size()));
    Matrix x = Eigen::Map<const Matrix>(input.data(), 1, static_cast<Eigen::Index>(input.size()));
    Matrix y = forward(store, x);
    return {y.data(), y.data() + y.size()};
  }

 private:
  struct Layer {
    SliceInfo weight;
    SliceInfo bias;
  };
  std::string prefix_;
  MlpSpec spec_;
  std::vector<Layer> layers_;
};

inline std::vector<Real> forward_mlp(const ParamStore& store, const Mlp& mlp, std::span<const Real> input) {
  return mlp.forward(store, input);
}

}  // namespace hidio::nn
