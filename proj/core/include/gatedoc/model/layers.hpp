#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "gatedoc/autodiff/graph.hpp"
#include "gatedoc/autodiff/ops.hpp"
#include "gatedoc/autodiff/parameters.hpp"
#include "gatedoc/random.hpp"

namespace gatedoc::model {

using ad::Graph;
using ad::ParameterSet;
using ad::Tensor;

/// y = x W + b, with W stored [in x out] and b stored [out].
template <typename T>
struct Linear {
  Tensor<T> weight;
  Tensor<T> bias;

  Tensor<T> operator()(const Tensor<T>& x) const { return ad::add(ad::matmul(x, weight), bias); }
};

/// Two linear layers with ReLU after each (the class-embedding FNN).
template <typename T>
struct ReluFnn {
  Linear<T> hidden;
  Linear<T> output;

  Tensor<T> operator()(const Tensor<T>& x) const { return ad::relu(output(ad::relu(hidden(x)))); }
};

/// Registers parameters with the initialization scheme shared by all layers:
/// Glorot-uniform matrices, zero biases, unit layer-norm gains.
template <typename T>
class ParamBuilder {
 public:
  ParamBuilder(ParameterSet<T>& params, Rng& rng) : params_(params), rng_(rng) {}

  void matrix(const std::string& name, std::size_t rows, std::size_t cols);
  void zeros(const std::string& name, std::size_t n);
  void ones(const std::string& name, std::size_t n);
  void linear(const std::string& prefix, std::size_t in, std::size_t out);
  void relu_fnn(const std::string& prefix, std::size_t in, std::size_t hidden, std::size_t out);

 private:
  ParameterSet<T>& params_;
  Rng& rng_;
};

template <typename T>
Linear<T> bind_linear(Graph<T>& g, const ParameterSet<T>& params, const std::string& prefix) {
  return {g.parameter(params, prefix + ".weight"), g.parameter(params, prefix + ".bias")};
}

template <typename T>
ReluFnn<T> bind_relu_fnn(Graph<T>& g, const ParameterSet<T>& params, const std::string& prefix) {
  return {bind_linear(g, params, prefix + ".hidden"), bind_linear(g, params, prefix + ".output")};
}

extern template class ParamBuilder<float>;
extern template class ParamBuilder<double>;

}  // namespace gatedoc::model
