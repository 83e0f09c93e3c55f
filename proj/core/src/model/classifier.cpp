#include "gatedoc/model/classifier.hpp"

#include "gatedoc/errors.hpp"
#include "gatedoc/model/sentence_encoder.hpp"

namespace gatedoc::model {

template <typename T>
HeadResult<T> classify_head(const Tensor<T>& document_embedding,
                            const std::optional<DocumentClassSimilarity<T>>& class_sim,
                            const OutputHead<T>& head) {
  HeadResult<T> out;
  Tensor<T> features = document_embedding;
  if (class_sim) {
    out.class_similarity = class_similarity(document_embedding, class_sim->fnn, class_sim->class_matrix);
    features = ad::concat(document_embedding, out.class_similarity, 1);
  }
  if (features.dim(1) != head.hidden.weight.dim(0)) {
    throw DimensionError("classify_head: features " + ad::to_string(features.shape()) +
                         " vs head input " + ad::to_string(head.hidden.weight.shape()));
  }
  out.probabilities = ad::sigmoid(head.output(ad::relu(head.hidden(features))));
  return out;
}

template <typename T>
void register_classifier(ParamBuilder<T>& b, const ModelConfig& c) {
  if (c.variant.document_class_similarity) {
    b.relu_fnn("document_fnn", c.gru_dim, c.class_hidden_dim, c.class_dim);
  }
  b.linear("output.hidden", c.head_input_width(), c.resolved_output_hidden_dim());
  b.linear("output.output", c.resolved_output_hidden_dim(), c.n_classes);
}

template <typename T>
OutputHead<T> bind_output_head(Graph<T>& g, const ParameterSet<T>& p) {
  return {bind_linear(g, p, "output.hidden"), bind_linear(g, p, "output.output")};
}

#define GATEDOC_INSTANTIATE(T)                                                                 \
  template HeadResult<T> classify_head<T>(const Tensor<T>&,                                    \
                                          const std::optional<DocumentClassSimilarity<T>>&,    \
                                          const OutputHead<T>&);                               \
  template void register_classifier<T>(ParamBuilder<T>&, const ModelConfig&);                  \
  template OutputHead<T> bind_output_head<T>(Graph<T>&, const ParameterSet<T>&);

GATEDOC_INSTANTIATE(float)
GATEDOC_INSTANTIATE(double)
#undef GATEDOC_INSTANTIATE

}  // namespace gatedoc::model
