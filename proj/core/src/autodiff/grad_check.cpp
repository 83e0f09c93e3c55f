#include "gatedoc/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "gatedoc/errors.hpp"

namespace gatedoc::ad {

namespace {

double evaluate(const LossBuilder& build, const ParameterSet<double>& params) {
  Graph<double> g;
  return build(g, params).item();
}

}  // namespace

GradCheckResult grad_check(const LossBuilder& build, ParameterSet<double>& params, double eps) {
  GradCheckResult result;
  Gradients<double> analytic(params);
  {
    Graph<double> g;
    auto loss = build(g, params);
    if (!std::isfinite(loss.item())) {
      result.finite = false;
      result.failure = "loss is non-finite at the base point";
      return result;
    }
    g.backward(loss);
    g.accumulate_parameter_grads(analytic);
  }

  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& values = params[p].value;
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double saved = values[j];
      values[j] = saved + eps;
      const double up = evaluate(build, params);
      values[j] = saved - eps;
      const double down = evaluate(build, params);
      values[j] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        result.finite = false;
        result.failure = "non-finite loss while perturbing '" + params[p].name + "'";
        return result;
      }
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[p][j];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      ++result.entries_checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = params[p].name;
        result.worst_index = j;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace gatedoc::ad
