#pragma once

#include <optional>

#include "gatedoc/model/config.hpp"
#include "gatedoc/model/layers.hpp"

namespace gatedoc::model {

/// Document-side class similarity: FNN over E_d and the shared class matrix.
template <typename T>
struct DocumentClassSimilarity {
  ReluFnn<T> fnn;
  Tensor<T> class_matrix;
};

/// Hidden ReLU layer followed by a sigmoid output layer, one unit per class.
template <typename T>
struct OutputHead {
  Linear<T> hidden;
  Linear<T> output;
};

template <typename T>
struct HeadResult {
  Tensor<T> class_similarity;  // C_d, invalid when the document path is disabled
  Tensor<T> probabilities;     // [1 x n_classes]
};

/// probs = sigmoid(FNN([E_d ; C_d])); with no class-similarity path the
/// head reads E_d alone.
template <typename T>
HeadResult<T> classify_head(const Tensor<T>& document_embedding,
                            const std::optional<DocumentClassSimilarity<T>>& class_sim,
                            const OutputHead<T>& head);

template <typename T>
void register_classifier(ParamBuilder<T>& builder, const ModelConfig& config);

template <typename T>
OutputHead<T> bind_output_head(Graph<T>& g, const ParameterSet<T>& params);

}  // namespace gatedoc::model
