#pragma once

#include <functional>
#include <string>

#include "gatedoc/autodiff/graph.hpp"
#include "gatedoc/autodiff/parameters.hpp"

namespace gatedoc::ad {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t entries_checked = 0;
  bool finite = true;
  /// Set when the loss went non-finite; names the parameter being perturbed.
  std::string failure;

  bool passed(double tolerance) const { return finite && max_relative_error < tolerance; }
};

/// Builds the loss for the current parameter values inside the given graph.
using LossBuilder = std::function<Tensor<double>(Graph<double>&, const ParameterSet<double>&)>;

/// Compares analytic gradients against central differences for every entry of
/// every parameter. Relative error uses max(|a|, |b|, 1e-8) as denominator.
GradCheckResult grad_check(const LossBuilder& build, ParameterSet<double>& params, double eps = 1e-6);

}  // namespace gatedoc::ad
