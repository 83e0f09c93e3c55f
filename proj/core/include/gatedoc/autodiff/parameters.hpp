#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gatedoc/autodiff/shape.hpp"

namespace gatedoc::ad {

template <typename T>
struct Parameter {
  std::string name;
  Shape shape;
  std::vector<T> value;
};

/// Named trainable arrays in registration order. The order is stable and is
/// the order used by checkpoints and optimizer state.
template <typename T>
class ParameterSet {
 public:
  std::size_t add(std::string name, Shape shape, std::vector<T> value);

  std::size_t size() const { return params_.size(); }
  bool empty() const { return params_.empty(); }

  Parameter<T>& operator[](std::size_t i) { return params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return params_[i]; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  const Parameter<T>& at(std::string_view name) const { return params_[index_of(name)]; }
  Parameter<T>& at(std::string_view name) { return params_[index_of(name)]; }

  /// Total number of scalar entries across all parameters.
  std::size_t scalar_count() const;

  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }

  template <typename U>
  ParameterSet<U> cast() const {
    ParameterSet<U> out;
    for (const auto& p : params_) {
      out.add(p.name, p.shape, std::vector<U>(p.value.begin(), p.value.end()));
    }
    return out;
  }

 private:
  std::vector<Parameter<T>> params_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// One dense gradient buffer per parameter, aligned with a ParameterSet.
template <typename T>
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(const ParameterSet<T>& params);

  std::size_t size() const { return buffers_.size(); }
  std::vector<T>& operator[](std::size_t i) { return buffers_[i]; }
  const std::vector<T>& operator[](std::size_t i) const { return buffers_[i]; }

  void zero();
  void add(const Gradients& other);
  void scale(T factor);

 private:
  std::vector<std::vector<T>> buffers_;
};

extern template class ParameterSet<float>;
extern template class ParameterSet<double>;
extern template class Gradients<float>;
extern template class Gradients<double>;

}  // namespace gatedoc::ad
