#pragma once

#include <cstdint>
#include <vector>

#include "gatedoc/autodiff/parameters.hpp"

namespace gatedoc::ad {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moments are kept in double regardless of the
/// parameter precision.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  /// Throws TrainingError naming the first parameter with a non-finite gradient;
  /// parameters are untouched in that case.
  template <typename T>
  void step(ParameterSet<T>& params, const Gradients<T>& grads);

  std::uint64_t step_count() const { return step_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }

 private:
  AdamOptions options_;
  std::uint64_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace gatedoc::ad
