#include "gatedoc/model/layers.hpp"

#include <cmath>

namespace gatedoc::model {

template <typename T>
void ParamBuilder<T>::matrix(const std::string& name, std::size_t rows, std::size_t cols) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<T> values(rows * cols);
  for (auto& v : values) v = static_cast<T>(rng_.uniform(-limit, limit));
  params_.add(name, {rows, cols}, std::move(values));
}

template <typename T>
void ParamBuilder<T>::zeros(const std::string& name, std::size_t n) {
  params_.add(name, {n}, std::vector<T>(n, T(0)));
}

template <typename T>
void ParamBuilder<T>::ones(const std::string& name, std::size_t n) {
  params_.add(name, {n}, std::vector<T>(n, T(1)));
}

template <typename T>
void ParamBuilder<T>::linear(const std::string& prefix, std::size_t in, std::size_t out) {
  matrix(prefix + ".weight", in, out);
  zeros(prefix + ".bias", out);
}

template <typename T>
void ParamBuilder<T>::relu_fnn(const std::string& prefix, std::size_t in, std::size_t hidden,
                               std::size_t out) {
  linear(prefix + ".hidden", in, hidden);
  linear(prefix + ".output", hidden, out);
}

template class ParamBuilder<float>;
template class ParamBuilder<double>;

}  // namespace gatedoc::model
