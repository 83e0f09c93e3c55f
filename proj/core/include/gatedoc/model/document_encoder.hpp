#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gatedoc/model/config.hpp"
#include "gatedoc/model/layers.hpp"

namespace gatedoc::model {

/// Scalar mode: weight is [1 x width], one sigmoid score per sentence.
/// Vector mode: weight is [width x width], one score per coordinate.
template <typename T>
struct GateWeights {
  Tensor<T> weight;
  GateMode mode = GateMode::kScalar;
};

template <typename T>
struct GateOutput {
  Tensor<T> gated;               // E'' [n x width]
  Tensor<T> gate_values;         // [n x 1] or [n x width]
  std::vector<double> scores;    // per-sentence importance in (0,1)
};

/// g_i = sigmoid(W_g . E'_i); E''_i = g_i * E'_i. In vector mode the product
/// is elementwise and the reported score is mean(g_i).
template <typename T>
GateOutput<T> gate(const Tensor<T>& enriched, const GateWeights<T>& weights);

/// Standard GRU cell over row vectors, weights stored [in x hidden]:
///   z  = sigmoid(x Wz + h Uz + bz)
///   r  = sigmoid(x Wr + h Ur + br)
///   h~ = tanh(x Wh + (r * h) Uh + bh)
///   h' = (1 - z) * h + z * h~
template <typename T>
struct GruCellWeights {
  Tensor<T> update_input, update_hidden, update_bias;
  Tensor<T> reset_input, reset_hidden, reset_bias;
  Tensor<T> candidate_input, candidate_hidden, candidate_bias;
};

template <typename T>
Tensor<T> gru_cell(const Tensor<T>& x, const Tensor<T>& h_prev, const GruCellWeights<T>& w);

/// Forward GRU over the rows of `inputs` from a zero state; returns all
/// hidden states [n x hidden].
template <typename T>
Tensor<T> encode_sequence(const Tensor<T>& inputs, const GruCellWeights<T>& w);

template <typename T>
struct AttentionResult {
  Tensor<T> weights;  // [n x 1], softmax over enc_i . query
  Tensor<T> context;  // [1 x hidden], sum_i a_i enc_i
};

template <typename T>
AttentionResult<T> attend(const Tensor<T>& encodings, const Tensor<T>& query);

template <typename T>
struct DecoderWeights {
  GruCellWeights<T> cell;  // input width 2 * hidden
  Linear<T> bridge;        // hidden -> hidden, tanh
  Tensor<T> start_symbol;  // [1 x hidden]
};

template <typename T>
struct DecodeResult {
  Tensor<T> document_embedding;  // E_d [1 x hidden]
  Tensor<T> initial_state;       // dec_0
  AttentionResult<T> attention;
};

/// dec_0 = tanh(bridge(enc_n)); (a, cnt) = attend(encs, dec_0);
/// E_d = GRU([start ; cnt], dec_0).
template <typename T>
DecodeResult<T> decode_document(const Tensor<T>& encodings, const DecoderWeights<T>& w);

template <typename T>
void register_document_encoder(ParamBuilder<T>& builder, const ModelConfig& config);

template <typename T>
GateWeights<T> bind_gate(Graph<T>& g, const ParameterSet<T>& params, const ModelConfig& config);
template <typename T>
GruCellWeights<T> bind_gru_cell(Graph<T>& g, const ParameterSet<T>& params, const std::string& prefix);
template <typename T>
DecoderWeights<T> bind_decoder(Graph<T>& g, const ParameterSet<T>& params);

}  // namespace gatedoc::model
