#pragma once

#include <cstddef>
#include <cstdint>

#include "gatedoc/autodiff/grad_check.hpp"
#include "gatedoc/model/model.hpp"
#include "gatedoc/random.hpp"

// Small random models and documents for gradient checks, oracle comparisons
// and benchmarks.

namespace gatedoc::model {

/// Every width set to `width`; one shared layer applied twice.
ModelConfig toy_config(std::size_t width = 4, std::size_t vocab_size = 12, std::size_t n_classes = 3);

/// `sentences` sentences of 1-4 non-reserved tokens each, with a random label.
text::TokenizedDocument random_document(Rng& rng, std::size_t sentences, std::size_t vocab_size,
                                        std::size_t n_classes);

/// Overwrites every entry (biases and gains included) with U(-scale, scale).
template <typename T>
void randomize(ParameterSet<T>& params, Rng& rng, double scale = 0.5);

inline constexpr double kModelCheckStep = 1e-5;

/// Central-difference check of the full forward + loss in double precision,
/// at the model's own initialization for `seed`. The default step sits near
/// the cube root of machine epsilon: at 1e-6 the roundoff in the O(1) loss
/// (about 1e-10 after division) already rivals the smallest gradients.
ad::GradCheckResult model_grad_check(const ModelConfig& config, const text::TokenizedDocument& doc,
                                     std::uint64_t seed, double eps = kModelCheckStep);

}  // namespace gatedoc::model
