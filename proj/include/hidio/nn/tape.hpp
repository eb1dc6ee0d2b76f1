#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/nn/param_store.hpp"

namespace hidio::nn {

// Rows index the batch, columns index features.
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  const Matrix& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Real scalar() const;
  bool requires_grad() const;
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode trace of matrix operations. A fresh tape is built for every
/// forward pass; `backward` walks it once in reverse and writes parameter
/// gradients into the owning ParamStore (accumulating).
class Tape {
 public:
  Tape() { nodes_.reserve(64); }
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value) { return push(std::move(value), false, nullptr); }

  Var constant_row(std::span<const Real> row) {
    Matrix m(1, static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = row[i];
    return constant(std::move(m));
  }

  // Leaf reading a parameter slice as a (rows x cols) matrix. With track=false
  // the value participates in the computation but receives no gradient.
  Var param(ParamStore& store, const SliceInfo& slice, bool track = true) {
    const auto r = static_cast<Eigen::Index>(slice.rows());
    const auto c = static_cast<Eigen::Index>(slice.cols());
    Matrix m = Eigen::Map<const Matrix>(store.values(slice).data(), r, c);
    Var v = push(std::move(m), track, nullptr);
    if (track) {
      nodes_[v.id_].store = &store;
      nodes_[v.id_].offset = slice.offset;
    }
    return v;
  }

  void backward(Var loss) {
    check(loss);
    if (loss.value().rows() != 1 || loss.value().cols() != 1)
      throw UsageError("backward requires a scalar loss node");
    if (!nodes_[loss.id_].requires_grad) return;
    grad_ref(loss.id_).setOnes();
    for (std::size_t i = loss.id_ + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (!n.has_grad) continue;
      if (n.back) n.back(*this, i);
      if (n.store) {
        auto g = n.store->grads();
        const Real* src = n.grad.data();
        for (Eigen::Index j = 0; j < n.grad.size(); ++j) g[n.offset + static_cast<std::size_t>(j)] += src[j];
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }

  // --- implementation surface for the op library below ---
  using Backward = std::function<void(Tape&, std::size_t)>;

  Var push(Matrix value, bool requires_grad, Backward back) {
    nodes_.push_back(Node{std::move(value), Matrix(), requires_grad, false, std::move(back), nullptr, 0});
    return Var(this, nodes_.size() - 1);
  }

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Gradient buffer of a node, zero-initialised on first touch.
  Matrix& grad_ref(std::size_t id) {
    Node& n = nodes_[id];
    if (!n.has_grad) {
      n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
      n.has_grad = true;
    }
    return n.grad;
  }

  void check(const Var& v) const {
    if (v.tape_ != this) throw UsageError("variable belongs to a different tape");
  }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    bool has_grad = false;
    Backward back;
    ParamStore* store = nullptr;
    std::size_t offset = 0;
  };
  std::vector<Node> nodes_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }
inline const Matrix& Var::grad() const { return tape_->grad(id_); }
inline bool Var::requires_grad() const { return tape_->requires_grad(id_); }
inline Real Var::scalar() const {
  if (value().size() != 1) throw UsageError("scalar() on non-scalar node");
  return value()(0, 0);
}

namespace ops {

namespace detail {

inline Tape& same_tape(const Var& a, const Var& b) {
  if (a.tape() == nullptr || a.tape() != b.tape()) throw UsageError("operands on different tapes");
  return *a.tape();
}

// Unary elementwise op given value f(x) and derivative df(x, y).
template <typename F, typename DF>
Var unary(const Var& x, F f, DF df) {
  Tape& t = *x.tape();
  Matrix y = x.value().unaryExpr(f);
  const std::size_t xi = x.id();
  const bool rg = x.requires_grad();
  return t.push(std::move(y), rg, rg ? Tape::Backward([xi, df](Tape& tp, std::size_t self) {
    const Matrix& xv = tp.value(xi);
    const Matrix& yv = tp.value(self);
    Matrix d = xv.binaryExpr(yv, df);
    tp.grad_ref(xi).array() += tp.grad(self).array() * d.array();
  }) : nullptr);
}

inline bool is_scalar(const Var& v) { return v.rows() == 1 && v.cols() == 1; }

}  // namespace detail

// y = x W^T + b, with W shaped (out, in) and b shaped (1, out).
inline Var linear(const Var& x, const Var& w, const Var& b) {
  Tape& t = detail::same_tape(x, w);
  t.check(b);
  if (x.cols() != w.cols())
    throw ConfigError("linear: input width " + std::to_string(x.cols()) + " does not match weight " +
                      std::to_string(w.cols()));
  if (b.rows() != 1 || b.cols() != w.rows()) throw ConfigError("linear: bias shape mismatch");
  Matrix y = x.value() * w.value().transpose();
  y.rowwise() += b.value().row(0);
  const std::size_t xi = x.id(), wi = w.id(), bi = b.id();
  const bool rg = x.requires_grad() || w.requires_grad() || b.requires_grad();
  return t.push(std::move(y), rg, rg ? Tape::Backward([xi, wi, bi](Tape& tp, std::size_t self) {
    const Matrix& gy = tp.grad(self);
    if (tp.requires_grad(xi)) tp.grad_ref(xi).noalias() += gy * tp.value(wi);
    if (tp.requires_grad(wi)) tp.grad_ref(wi).noalias() += gy.transpose() * tp.value(xi);
    if (tp.requires_grad(bi)) tp.grad_ref(bi) += gy.colwise().sum();
  }) : nullptr);
}

inline Var relu(const Var& x) {
  return detail::unary(x, [](Real v) { return v > 0.0 ? v : 0.0; },
                       [](Real v, Real) { return v > 0.0 ? 1.0 : 0.0; });
}

inline Var tanh(const Var& x) {
  return detail::unary(x, [](Real v) { return std::tanh(v); }, [](Real, Real y) { return 1.0 - y * y; });
}

inline Var exp(const Var& x) {
  return detail::unary(x, [](Real v) { return std::exp(v); }, [](Real, Real y) { return y; });
}

inline Var log(const Var& x) {
  return detail::unary(x, [](Real v) { return std::log(v); }, [](Real v, Real) { return 1.0 / v; });
}

inline Var square(const Var& x) {
  return detail::unary(x, [](Real v) { return v * v; }, [](Real v, Real) { return 2.0 * v; });
}

inline Var scale(const Var& x, Real c) {
  return detail::unary(x, [c](Real v) { return c * v; }, [c](Real, Real) { return c; });
}

inline Var add_scalar(const Var& x, Real c) {
  return detail::unary(x, [c](Real v) { return v + c; }, [](Real, Real) { return 1.0; });
}

inline Var neg(const Var& x) { return scale(x, -1.0); }

// Elementwise clamp; gradient is zero where the bound is active.
inline Var clamp(const Var& x, Real lo, Real hi) {
  return detail::unary(x, [lo, hi](Real v) { return v < lo ? lo : (v > hi ? hi : v); },
                       [lo, hi](Real v, Real) { return (v < lo || v > hi) ? 0.0 : 1.0; });
}

namespace detail {

// Binary op where b is either the same shape as a or a 1x1 scalar broadcast.
template <typename F, typename DA, typename DB>
Var binary(const Var& a, const Var& b, F f, DA da, DB db, const char* name) {
  Tape& t = same_tape(a, b);
  const bool b_scalar = is_scalar(b) && !is_scalar(a);
  if (!b_scalar && (a.rows() != b.rows() || a.cols() != b.cols()))
    throw ConfigError(std::string(name) + ": shape mismatch");
  Matrix y(a.rows(), a.cols());
  if (b_scalar) {
    const Real bv = b.value()(0, 0);
    y = a.value().unaryExpr([&](Real av) { return f(av, bv); });
  } else {
    y = a.value().binaryExpr(b.value(), f);
  }
  const std::size_t ai = a.id(), bi = b.id();
  const bool rg = a.requires_grad() || b.requires_grad();
  return t.push(std::move(y), rg, rg ? Tape::Backward([ai, bi, b_scalar, da, db](Tape& tp, std::size_t self) {
    const Matrix& gy = tp.grad(self);
    const Matrix& av = tp.value(ai);
    const Matrix& bv = tp.value(bi);
    if (b_scalar) {
      const Real s = bv(0, 0);
      if (tp.requires_grad(ai))
        tp.grad_ref(ai).array() += gy.array() * av.unaryExpr([&](Real x) { return da(x, s); }).array();
      if (tp.requires_grad(bi))
        tp.grad_ref(bi)(0, 0) += (gy.array() * av.unaryExpr([&](Real x) { return db(x, s); }).array()).sum();
    } else {
      if (tp.requires_grad(ai)) tp.grad_ref(ai).array() += gy.array() * av.binaryExpr(bv, da).array();
      if (tp.requires_grad(bi)) tp.grad_ref(bi).array() += gy.array() * av.binaryExpr(bv, db).array();
    }
  }) : nullptr);
}

}  // namespace detail

inline Var add(const Var& a, const Var& b) {
  return detail::binary(
      a, b, [](Real x, Real y) { return x + y; }, [](Real, Real) { return 1.0; },
      [](Real, Real) { return 1.0; }, "add");
}

inline Var sub(const Var& a, const Var& b) {
  return detail::binary(
      a, b, [](Real x, Real y) { return x - y; }, [](Real, Real) { return 1.0; },
      [](Real, Real) { return -1.0; }, "sub");
}

inline Var mul(const Var& a, const Var& b) {
  return detail::binary(
      a, b, [](Real x, Real y) { return x * y; }, [](Real, Real y) { return y; },
      [](Real x, Real) { return x; }, "mul");
}

// Elementwise minimum; ties route the gradient to the first operand.
inline Var minimum(const Var& a, const Var& b) {
  return detail::binary(
      a, b, [](Real x, Real y) { return x <= y ? x : y; }, [](Real x, Real y) { return x <= y ? 1.0 : 0.0; },
      [](Real x, Real y) { return x <= y ? 0.0 : 1.0; }, "minimum");
}

// Row sums: (B x n) -> (B x 1).
inline Var sum_cols(const Var& x) {
  Tape& t = *x.tape();
  Matrix y = x.value().rowwise().sum();
  const std::size_t xi = x.id();
  const bool rg = x.requires_grad();
  return t.push(std::move(y), rg, rg ? Tape::Backward([xi](Tape& tp, std::size_t self) {
    tp.grad_ref(xi).colwise() += tp.grad(self).col(0);
  }) : nullptr);
}

inline Var sum(const Var& x) {
  Tape& t = *x.tape();
  Matrix y(1, 1);
  y(0, 0) = x.value().sum();
  const std::size_t xi = x.id();
  const bool rg = x.requires_grad();
  return t.push(std::move(y), rg, rg ? Tape::Backward([xi](Tape& tp, std::size_t self) {
    tp.grad_ref(xi).array() += tp.grad(self)(0, 0);
  }) : nullptr);
}

inline Var mean(const Var& x) { return scale(sum(x), 1.0 / static_cast<Real>(x.value().size())); }

inline Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ConfigError("concat_cols: no operands");
  Tape& t = *parts.front().tape();
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  bool rg = false;
  for (const auto& p : parts) {
    t.check(p);
    if (p.rows() != rows) throw ConfigError("concat_cols: row count mismatch");
    cols += p.cols();
    rg = rg || p.requires_grad();
  }
  Matrix y(rows, cols);
  std::vector<std::pair<std::size_t, Eigen::Index>> layout;
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    y.middleCols(c, p.cols()) = p.value();
    layout.emplace_back(p.id(), c);
    c += p.cols();
  }
  return t.push(std::move(y), rg, rg ? Tape::Backward([layout](Tape& tp, std::size_t self) {
    const Matrix& gy = tp.grad(self);
    for (const auto& [id, start] : layout) {
      if (!tp.requires_grad(id)) continue;
      tp.grad_ref(id) += gy.middleCols(start, tp.value(id).cols());
    }
  }) : nullptr);
}

inline Var slice_cols(const Var& x, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 1 || start + count > x.cols()) throw ConfigError("slice_cols: out of range");
  Tape& t = *x.tape();
  Matrix y = x.value().middleCols(start, count);
  const std::size_t xi = x.id();
  const bool rg = x.requires_grad();
  return t.push(std::move(y), rg, rg ? Tape::Backward([xi, start, count](Tape& tp, std::size_t self) {
    tp.grad_ref(xi).middleCols(start, count) += tp.grad(self);
  }) : nullptr);
}

// Value copy with no gradient path.
inline Var detach(const Var& x) { return x.tape()->constant(x.value()); }

}  // namespace ops

}  // namespace hidio::nn
