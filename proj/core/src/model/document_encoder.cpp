#include "gatedoc/model/document_encoder.hpp"

#include "gatedoc/errors.hpp"

namespace gatedoc::model {

template <typename T>
GateOutput<T> gate(const Tensor<T>& enriched, const GateWeights<T>& w) {
  const std::size_t width = enriched.dim(1);
  const std::size_t n = enriched.dim(0);
  if (w.weight.rank() != 2 || w.weight.dim(1) != width ||
      (w.mode == GateMode::kScalar && w.weight.dim(0) != 1) ||
      (w.mode == GateMode::kVector && w.weight.dim(0) != width)) {
    throw DimensionError("gate: weight " + ad::to_string(w.weight.shape()) +
                         " does not match sentence width " + std::to_string(width));
  }
  GateOutput<T> out;
  out.gate_values = ad::sigmoid(ad::matmul(enriched, ad::transpose(w.weight)));
  const auto g = out.gate_values.values();
  if (w.mode == GateMode::kScalar) {
    std::vector<Tensor<T>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back(ad::mul(ad::row(out.gate_values, i), ad::row(enriched, i)));
      out.scores.push_back(static_cast<double>(g[i]));
    }
    out.gated = n == 1 ? rows.front() : ad::concat<T>(rows, 0);
  } else {
    out.gated = ad::mul(out.gate_values, enriched);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0;
      for (std::size_t j = 0; j < width; ++j) total += static_cast<double>(g[i * width + j]);
      out.scores.push_back(total / static_cast<double>(width));
    }
  }
  return out;
}

template <typename T>
Tensor<T> gru_cell(const Tensor<T>& x, const Tensor<T>& h_prev, const GruCellWeights<T>& w) {
  if (x.rank() != 2 || x.dim(0) != 1 || x.dim(1) != w.update_input.dim(0)) {
    throw DimensionError("gru_cell: input " + ad::to_string(x.shape()) + " vs weight " +
                         ad::to_string(w.update_input.shape()));
  }
  if (h_prev.rank() != 2 || h_prev.dim(0) != 1 || h_prev.dim(1) != w.update_hidden.dim(0)) {
    throw DimensionError("gru_cell: state " + ad::to_string(h_prev.shape()) + " vs weight " +
                         ad::to_string(w.update_hidden.shape()));
  }
  using ad::add;
  using ad::matmul;
  using ad::mul;
  const auto z = ad::sigmoid(add(add(matmul(x, w.update_input), matmul(h_prev, w.update_hidden)), w.update_bias));
  const auto r = ad::sigmoid(add(add(matmul(x, w.reset_input), matmul(h_prev, w.reset_hidden)), w.reset_bias));
  const auto candidate = ad::tanh(
      add(add(matmul(x, w.candidate_input), matmul(mul(r, h_prev), w.candidate_hidden)), w.candidate_bias));
  return add(h_prev, mul(z, ad::sub(candidate, h_prev)));
}

template <typename T>
Tensor<T> encode_sequence(const Tensor<T>& inputs, const GruCellWeights<T>& w) {
  if (inputs.rank() != 2 || inputs.dim(0) == 0) {
    throw InternalError("encode_sequence: need at least one sentence, got " + ad::to_string(inputs.shape()));
  }
  const std::size_t hidden = w.update_hidden.dim(0);
  auto state = inputs.graph().constant({1, hidden}, std::vector<T>(hidden, T(0)));
  std::vector<Tensor<T>> states;
  states.reserve(inputs.dim(0));
  for (std::size_t i = 0; i < inputs.dim(0); ++i) {
    state = gru_cell(ad::row(inputs, i), state, w);
    states.push_back(state);
  }
  return states.size() == 1 ? states.front() : ad::concat<T>(states, 0);
}

template <typename T>
AttentionResult<T> attend(const Tensor<T>& encodings, const Tensor<T>& query) {
  if (query.rank() != 2 || query.dim(0) != 1 || encodings.rank() != 2 || query.dim(1) != encodings.dim(1)) {
    throw DimensionError("attend: query " + ad::to_string(query.shape()) + " vs encodings " +
                         ad::to_string(encodings.shape()));
  }
  AttentionResult<T> out;
  out.weights = ad::softmax(ad::matmul(encodings, ad::transpose(query)), 0);
  out.context = ad::matmul(ad::transpose(out.weights), encodings);
  return out;
}

template <typename T>
DecodeResult<T> decode_document(const Tensor<T>& encodings, const DecoderWeights<T>& w) {
  if (encodings.rank() != 2 || encodings.dim(0) == 0) {
    throw InternalError("decode_document: no encoder states");
  }
  DecodeResult<T> out;
  const auto last = ad::row(encodings, encodings.dim(0) - 1);
  out.initial_state = ad::tanh(w.bridge(last));
  out.attention = attend(encodings, out.initial_state);
  const auto input = ad::concat(w.start_symbol, out.attention.context, 1);
  out.document_embedding = gru_cell(input, out.initial_state, w.cell);
  return out;
}

namespace {

template <typename T>
void register_gru_cell(ParamBuilder<T>& b, const std::string& prefix, std::size_t in, std::size_t hidden) {
  for (const char* gate_name : {"update", "reset", "candidate"}) {
    const std::string p = prefix + "." + gate_name;
    b.matrix(p + ".input", in, hidden);
    b.matrix(p + ".hidden", hidden, hidden);
    b.zeros(p + ".bias", hidden);
  }
}

}  // namespace

template <typename T>
void register_document_encoder(ParamBuilder<T>& b, const ModelConfig& c) {
  const std::size_t width = c.sentence_width();
  if (c.variant.gate) {
    b.matrix("gate.weight", c.gate_mode == GateMode::kScalar ? 1 : width, width);
  }
  register_gru_cell(b, "encoder_gru", width, c.gru_dim);
  b.linear("bridge", c.gru_dim, c.gru_dim);
  b.matrix("start_symbol", 1, c.gru_dim);
  register_gru_cell(b, "decoder_gru", 2 * c.gru_dim, c.gru_dim);
}

template <typename T>
GateWeights<T> bind_gate(Graph<T>& g, const ParameterSet<T>& p, const ModelConfig& c) {
  return {g.parameter(p, "gate.weight"), c.gate_mode};
}

template <typename T>
GruCellWeights<T> bind_gru_cell(Graph<T>& g, const ParameterSet<T>& p, const std::string& prefix) {
  GruCellWeights<T> w;
  w.update_input = g.parameter(p, prefix + ".update.input");
  w.update_hidden = g.parameter(p, prefix + ".update.hidden");
  w.update_bias = g.parameter(p, prefix + ".update.bias");
  w.reset_input = g.parameter(p, prefix + ".reset.input");
  w.reset_hidden = g.parameter(p, prefix + ".reset.hidden");
  w.reset_bias = g.parameter(p, prefix + ".reset.bias");
  w.candidate_input = g.parameter(p, prefix + ".candidate.input");
  w.candidate_hidden = g.parameter(p, prefix + ".candidate.hidden");
  w.candidate_bias = g.parameter(p, prefix + ".candidate.bias");
  return w;
}

template <typename T>
DecoderWeights<T> bind_decoder(Graph<T>& g, const ParameterSet<T>& p) {
  return {bind_gru_cell(g, p, "decoder_gru"), bind_linear(g, p, "bridge"), g.parameter(p, "start_symbol")};
}

#define GATEDOC_INSTANTIATE(T)                                                                   \
  template GateOutput<T> gate<T>(const Tensor<T>&, const GateWeights<T>&);                       \
  template Tensor<T> gru_cell<T>(const Tensor<T>&, const Tensor<T>&, const GruCellWeights<T>&);  \
  template Tensor<T> encode_sequence<T>(const Tensor<T>&, const GruCellWeights<T>&);             \
  template AttentionResult<T> attend<T>(const Tensor<T>&, const Tensor<T>&);                     \
  template DecodeResult<T> decode_document<T>(const Tensor<T>&, const DecoderWeights<T>&);       \
  template void register_document_encoder<T>(ParamBuilder<T>&, const ModelConfig&);              \
  template GateWeights<T> bind_gate<T>(Graph<T>&, const ParameterSet<T>&, const ModelConfig&);   \
  template GruCellWeights<T> bind_gru_cell<T>(Graph<T>&, const ParameterSet<T>&, const std::string&); \
  template DecoderWeights<T> bind_decoder<T>(Graph<T>&, const ParameterSet<T>&);

GATEDOC_INSTANTIATE(float)
GATEDOC_INSTANTIATE(double)
#undef GATEDOC_INSTANTIATE

}  // namespace gatedoc::model
