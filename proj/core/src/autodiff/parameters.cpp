#include "gatedoc/autodiff/parameters.hpp"

#include <algorithm>

#include "gatedoc/errors.hpp"

namespace gatedoc::ad {

template <typename T>
std::size_t ParameterSet<T>::add(std::string name, Shape shape, std::vector<T> value) {
  if (numel(shape) != value.size()) {
    throw DimensionError("parameter '" + name + "' has shape " + to_string(shape) + " but " +
                         std::to_string(value.size()) + " values");
  }
  if (index_.contains(name)) throw InternalError("duplicate parameter '" + name + "'");
  const std::size_t index = params_.size();
  index_.emplace(name, index);
  params_.push_back(Parameter<T>{std::move(name), std::move(shape), std::move(value)});
  return index;
}

template <typename T>
std::optional<std::size_t> ParameterSet<T>::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

template <typename T>
std::size_t ParameterSet<T>::index_of(std::string_view name) const {
  auto found = find(name);
  if (!found) throw InternalError("unknown parameter '" + std::string(name) + "'");
  return *found;
}

template <typename T>
std::size_t ParameterSet<T>::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

template <typename T>
Gradients<T>::Gradients(const ParameterSet<T>& params) {
  buffers_.reserve(params.size());
  for (const auto& p : params) buffers_.emplace_back(p.value.size(), T(0));
}

template <typename T>
void Gradients<T>::zero() {
  for (auto& b : buffers_) std::fill(b.begin(), b.end(), T(0));
}

template <typename T>
void Gradients<T>::add(const Gradients& other) {
  if (other.buffers_.size() != buffers_.size()) throw DimensionError("gradient set size mismatch");
  for (std::size_t i = 0; i < buffers_.size(); ++i) {
    auto& dst = buffers_[i];
    const auto& src = other.buffers_[i];
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
  }
}

template <typename T>
void Gradients<T>::scale(T factor) {
  for (auto& b : buffers_) {
    for (auto& v : b) v *= factor;
  }
}

template class ParameterSet<float>;
template class ParameterSet<double>;
template class Gradients<float>;
template class Gradients<double>;

}  // namespace gatedoc::ad
