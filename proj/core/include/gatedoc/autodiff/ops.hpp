#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gatedoc/autodiff/graph.hpp"

// Differentiable operations over Tensor handles. Every op validates shapes and
// throws DimensionError naming the offending shapes.
//
// Broadcasting in add/sub/mul is restricted to two cases: an operand with a
// single element, and a "row" operand whose shape (ignoring leading 1s) equals
// the trailing dimensions of the other operand.

namespace gatedoc::ad {

enum class Activation { kSigmoid, kTanh, kRelu };
enum class Elementwise { kAdd, kSub, kMul };

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> transpose(const Tensor<T>& a);

template <typename T>
Tensor<T> reshape(const Tensor<T>& a, Shape shape);

template <typename T>
Tensor<T> elementwise(Elementwise kind, const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  return elementwise(Elementwise::kAdd, a, b);
}
template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  return elementwise(Elementwise::kSub, a, b);
}
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  return elementwise(Elementwise::kMul, a, b);
}

/// Multiply by a compile-time-free constant (not a graph value).
template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor);

template <typename T>
Tensor<T> activation(Activation kind, const Tensor<T>& x);

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  return activation(Activation::kSigmoid, x);
}
template <typename T>
Tensor<T> tanh(const Tensor<T>& x) {
  return activation(Activation::kTanh, x);
}
template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  return activation(Activation::kRelu, x);
}

template <typename T>
Tensor<T> concat(std::span<const Tensor<T>> parts, std::size_t axis);

template <typename T>
Tensor<T> concat(const Tensor<T>& a, const Tensor<T>& b, std::size_t axis) {
  const Tensor<T> parts[] = {a, b};
  return concat<T>(std::span<const Tensor<T>>(parts), axis);
}

/// Half-open range [begin, end) along `axis`.
template <typename T>
Tensor<T> slice(const Tensor<T>& a, std::size_t axis, std::size_t begin, std::size_t end);

/// Row i of a matrix as a 1 x n matrix.
template <typename T>
Tensor<T> row(const Tensor<T>& a, std::size_t i) {
  return slice(a, 0, i, i + 1);
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& x, std::size_t axis);

/// Normalizes each row over the last axis, then applies gain and bias (both [n]).
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias,
                     T eps = T(1e-5));

/// Rows of `table` selected by `ids`; result is ids.size() x table.dim(1).
template <typename T>
Tensor<T> gather_rows(const Tensor<T>& table, std::span<const std::size_t> ids);

/// Sum of all entries, shape [1].
template <typename T>
Tensor<T> sum(const Tensor<T>& a);

inline constexpr double kProbabilityClamp = 1e-7;

/// Mean over classes of -[t ln p + (1-t) ln(1-p)], with p clamped to
/// [1e-7, 1-1e-7]. Shape [1].
template <typename T>
Tensor<T> bce_loss(const Tensor<T>& probs, const Tensor<T>& target);

/// Scalar sigmoid that never overflows.
template <typename T>
T stable_sigmoid(T x);

}  // namespace gatedoc::ad
