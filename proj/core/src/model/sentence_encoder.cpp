#include "gatedoc/model/sentence_encoder.hpp"

#include <cmath>
#include <vector>

#include "gatedoc/errors.hpp"

namespace gatedoc::model {

template <typename T>
void register_sentence_encoder(ParamBuilder<T>& b, const ModelConfig& c) {
  const std::size_t h = c.hidden_dim;
  b.matrix("encoder.token_embedding", c.vocab_size, c.token_dim);
  b.matrix("encoder.position_embedding", c.max_length, c.token_dim);
  b.linear("encoder.input_projection", c.token_dim, h);
  b.ones("encoder.layer.norm1.gain", h);
  b.zeros("encoder.layer.norm1.bias", h);
  b.linear("encoder.layer.attention.query", h, h);
  // Keys carry no bias: a per-query constant added to every score cancels in
  // the softmax, so such a bias would never receive gradient.
  b.matrix("encoder.layer.attention.key.weight", h, h);
  b.linear("encoder.layer.attention.value", h, h);
  b.linear("encoder.layer.attention.output", h, h);
  b.ones("encoder.layer.norm2.gain", h);
  b.zeros("encoder.layer.norm2.bias", h);
  b.linear("encoder.layer.ffn.inner", h, 4 * h);
  b.linear("encoder.layer.ffn.outer", 4 * h, h);
}

template <typename T>
EncoderWeights<T> bind_sentence_encoder(Graph<T>& g, const ParameterSet<T>& p, const ModelConfig& c) {
  EncoderWeights<T> w;
  w.token_embedding = g.parameter(p, "encoder.token_embedding");
  w.position_embedding = g.parameter(p, "encoder.position_embedding");
  w.input_projection = bind_linear(g, p, "encoder.input_projection");
  auto& l = w.layer;
  l.norm1_gain = g.parameter(p, "encoder.layer.norm1.gain");
  l.norm1_bias = g.parameter(p, "encoder.layer.norm1.bias");
  l.query = bind_linear(g, p, "encoder.layer.attention.query");
  l.key_weight = g.parameter(p, "encoder.layer.attention.key.weight");
  l.value = bind_linear(g, p, "encoder.layer.attention.value");
  l.output = bind_linear(g, p, "encoder.layer.attention.output");
  l.norm2_gain = g.parameter(p, "encoder.layer.norm2.gain");
  l.norm2_bias = g.parameter(p, "encoder.layer.norm2.bias");
  l.ffn_inner = bind_linear(g, p, "encoder.layer.ffn.inner");
  l.ffn_outer = bind_linear(g, p, "encoder.layer.ffn.outer");
  w.n_heads = c.n_heads;
  w.n_layers = c.n_layers;
  return w;
}

namespace {

template <typename T>
Tensor<T> self_attention(const Tensor<T>& x, const SharedLayer<T>& l, std::size_t n_heads) {
  const std::size_t width = x.dim(1);
  const std::size_t head = width / n_heads;
  const T inv_sqrt = T(1) / std::sqrt(static_cast<T>(head));
  const auto q = l.query(x);
  const auto k = ad::matmul(x, l.key_weight);
  const auto v = l.value(x);
  std::vector<Tensor<T>> heads;
  heads.reserve(n_heads);
  for (std::size_t h = 0; h < n_heads; ++h) {
    const auto qh = ad::slice(q, 1, h * head, (h + 1) * head);
    const auto kh = ad::slice(k, 1, h * head, (h + 1) * head);
    const auto vh = ad::slice(v, 1, h * head, (h + 1) * head);
    const auto scores = ad::scale(ad::matmul(qh, ad::transpose(kh)), inv_sqrt);
    heads.push_back(ad::matmul(ad::softmax(scores, 1), vh));
  }
  const auto merged = n_heads == 1 ? heads.front() : ad::concat<T>(heads, 1);
  return l.output(merged);
}

}  // namespace

template <typename T>
Tensor<T> transformer_encode(std::span<const text::TokenId> stream, const EncoderWeights<T>& w) {
  const std::size_t len = stream.size();
  if (len == 0) throw DimensionError("transformer_encode: empty token stream");
  if (len > w.position_embedding.dim(0)) {
    throw DimensionError("transformer_encode: stream of " + std::to_string(len) +
                         " tokens exceeds max_length " + std::to_string(w.position_embedding.dim(0)));
  }
  const auto tokens = ad::gather_rows(w.token_embedding, stream);
  const auto positions = ad::slice(w.position_embedding, 0, 0, len);
  auto hidden = w.input_projection(ad::add(tokens, positions));
  for (std::size_t depth = 0; depth < w.n_layers; ++depth) {
    const auto& l = w.layer;
    const auto attended = self_attention(ad::layer_norm(hidden, l.norm1_gain, l.norm1_bias), l, w.n_heads);
    hidden = ad::add(hidden, attended);
    const auto normed = ad::layer_norm(hidden, l.norm2_gain, l.norm2_bias);
    hidden = ad::add(hidden, l.ffn_outer(ad::relu(l.ffn_inner(normed))));
  }
  return hidden;
}

template <typename T>
Tensor<T> extract_sentence_embeddings(const Tensor<T>& encoded,
                                      std::span<const std::size_t> sep_positions) {
  for (auto pos : sep_positions) {
    if (pos >= encoded.dim(0)) {
      throw InternalError("separator position " + std::to_string(pos) + " outside stream of " +
                          std::to_string(encoded.dim(0)) + " tokens");
    }
  }
  return ad::gather_rows(encoded, sep_positions);
}

template <typename T>
Tensor<T> class_similarity(const Tensor<T>& x, const ReluFnn<T>& fnn, const Tensor<T>& class_matrix) {
  if (x.rank() != 2 || x.dim(1) != fnn.hidden.weight.dim(0)) {
    throw DimensionError("class_similarity: input " + ad::to_string(x.shape()) +
                         " does not match FNN input width " +
                         std::to_string(fnn.hidden.weight.dim(0)));
  }
  return ad::matmul(fnn(x), ad::transpose(class_matrix));
}

template <typename T>
Tensor<T> enrich(const Tensor<T>& embeddings, const Tensor<T>& similarities) {
  if (embeddings.rank() != 2 || similarities.rank() != 2 || embeddings.dim(0) != similarities.dim(0)) {
    throw DimensionError("enrich: row mismatch between " + ad::to_string(embeddings.shape()) +
                         " and " + ad::to_string(similarities.shape()));
  }
  return ad::concat(embeddings, similarities, 1);
}

#define GATEDOC_INSTANTIATE(T)                                                                      \
  template void register_sentence_encoder<T>(ParamBuilder<T>&, const ModelConfig&);                 \
  template EncoderWeights<T> bind_sentence_encoder<T>(Graph<T>&, const ParameterSet<T>&,            \
                                                      const ModelConfig&);                          \
  template Tensor<T> transformer_encode<T>(std::span<const text::TokenId>, const EncoderWeights<T>&); \
  template Tensor<T> extract_sentence_embeddings<T>(const Tensor<T>&, std::span<const std::size_t>); \
  template Tensor<T> class_similarity<T>(const Tensor<T>&, const ReluFnn<T>&, const Tensor<T>&);    \
  template Tensor<T> enrich<T>(const Tensor<T>&, const Tensor<T>&);

GATEDOC_INSTANTIATE(float)
GATEDOC_INSTANTIATE(double)
#undef GATEDOC_INSTANTIATE

}  // namespace gatedoc::model
