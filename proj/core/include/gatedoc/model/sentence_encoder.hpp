#pragma once

#include <cstddef>
#include <span>

#include "gatedoc/model/config.hpp"
#include "gatedoc/model/layers.hpp"
#include "gatedoc/text/vocab.hpp"

namespace gatedoc::model {

/// Weights of the single transformer layer that is reused at every depth.
template <typename T>
struct SharedLayer {
  Tensor<T> norm1_gain, norm1_bias;
  Linear<T> query, value, output;
  Tensor<T> key_weight;
  Tensor<T> norm2_gain, norm2_bias;
  Linear<T> ffn_inner, ffn_outer;
};

template <typename T>
struct EncoderWeights {
  Tensor<T> token_embedding;     // [vocab x token_dim]
  Tensor<T> position_embedding;  // [max_length x token_dim]
  Linear<T> input_projection;    // token_dim -> hidden_dim
  SharedLayer<T> layer;
  std::size_t n_heads = 1;
  std::size_t n_layers = 0;
};

template <typename T>
void register_sentence_encoder(ParamBuilder<T>& builder, const ModelConfig& config);

template <typename T>
EncoderWeights<T> bind_sentence_encoder(Graph<T>& g, const ParameterSet<T>& params,
                                        const ModelConfig& config);

/// Contextual token matrix [stream_len x hidden_dim]: embeddings plus
/// positions, projected, then the shared pre-norm block applied n_layers
/// times. Throws DimensionError when the stream exceeds the position table.
template <typename T>
Tensor<T> transformer_encode(std::span<const text::TokenId> stream, const EncoderWeights<T>& w);

/// Rows of `encoded` at the [SEP] positions, in sentence order.
template <typename T>
Tensor<T> extract_sentence_embeddings(const Tensor<T>& encoded,
                                      std::span<const std::size_t> sep_positions);

/// Inner products between FNN(x_i) and each class embedding row:
/// C = ReLU-FNN(X) * class_matrix^T, one row per input row.
template <typename T>
Tensor<T> class_similarity(const Tensor<T>& x, const ReluFnn<T>& fnn, const Tensor<T>& class_matrix);

/// Row-wise [E ; C].
template <typename T>
Tensor<T> enrich(const Tensor<T>& embeddings, const Tensor<T>& similarities);

}  // namespace gatedoc::model
