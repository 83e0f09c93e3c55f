#include "gatedoc/autodiff/optimizer.hpp"

#include <cmath>

#include "gatedoc/errors.hpp"

namespace gatedoc::ad {

template <typename T>
void Adam::step(ParameterSet<T>& params, const Gradients<T>& grads) {
  if (grads.size() != params.size()) throw DimensionError("adam: gradient count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].size() != params[i].value.size()) {
      throw DimensionError("adam: gradient for '" + params[i].name + "' has wrong length");
    }
    for (T g : grads[i]) {
      if (!std::isfinite(g)) {
        throw TrainingError("non-finite gradient in parameter '" + params[i].name + "'");
      }
    }
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.value.size(), 0.0);
      v_.emplace_back(p.value.size(), 0.0);
    }
  }
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = options_.learning_rate;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& value = params[i].value;
    auto& m = m_[i];
    auto& v = v_[i];
    const auto& g = grads[i];
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double gj = static_cast<double>(g[j]);
      m[j] = b1 * m[j] + (1.0 - b1) * gj;
      v[j] = b2 * v[j] + (1.0 - b2) * gj * gj;
      const double update = lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + options_.epsilon);
      value[j] = static_cast<T>(static_cast<double>(value[j]) - update);
    }
  }
}

template void Adam::step<float>(ParameterSet<float>&, const Gradients<float>&);
template void Adam::step<double>(ParameterSet<double>&, const Gradients<double>&);

}  // namespace gatedoc::ad
