#include "gatedoc/model/model.hpp"

#include "gatedoc/errors.hpp"

namespace gatedoc::model {

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw InternalError("argmax of empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

namespace {

template <typename T>
void register_all(ParamBuilder<T>& b, const ModelConfig& c) {
  register_sentence_encoder(b, c);
  if (c.uses_class_matrix()) b.matrix("class_matrix", c.n_classes, c.class_dim);
  if (c.variant.sentence_class_similarity) {
    b.relu_fnn("sentence_fnn", c.hidden_dim, c.class_hidden_dim, c.class_dim);
  }
  register_document_encoder(b, c);
  register_classifier(b, c);
}

}  // namespace

std::vector<std::pair<std::string, ad::Shape>> parameter_layout(const ModelConfig& config) {
  config.validate();
  ParameterSet<float> scratch;
  Rng rng(0);
  ParamBuilder<float> builder(scratch, rng);
  register_all(builder, config);
  std::vector<std::pair<std::string, ad::Shape>> out;
  for (const auto& p : scratch) out.emplace_back(p.name, p.shape);
  return out;
}

template <typename T>
Model<T>::Model(ModelConfig config, ParameterSet<T> params)
    : config_(std::move(config)), params_(std::move(params)) {
  const auto layout = parameter_layout(config_);
  if (layout.size() != params_.size()) {
    throw CheckpointError("model expects " + std::to_string(layout.size()) + " parameters, got " +
                          std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].first != params_[i].name || layout[i].second != params_[i].shape) {
      throw CheckpointError("parameter " + std::to_string(i) + " is '" + params_[i].name + "' " +
                            ad::to_string(params_[i].shape) + ", expected '" + layout[i].first +
                            "' " + ad::to_string(layout[i].second));
    }
  }
}

template <typename T>
Model<T> Model<T>::initialize(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  ParameterSet<T> params;
  Rng rng(seed);
  ParamBuilder<T> builder(params, rng);
  register_all(builder, config);
  return Model(config, std::move(params));
}

template <typename T>
ForwardTrace<T> Model<T>::forward(Graph<T>& g, const text::TokenizedDocument& doc) const {
  const auto& c = config_;
  const auto& v = c.variant;
  ForwardTrace<T> trace;
  trace.has_gate = v.gate;

  const auto encoder = bind_sentence_encoder(g, params_, c);
  trace.encoded = transformer_encode<T>(doc.token_stream, encoder);
  trace.sentence_embeddings = extract_sentence_embeddings<T>(trace.encoded, doc.sep_positions);

  Tensor<T> class_matrix;
  if (c.uses_class_matrix()) class_matrix = g.parameter(params_, "class_matrix");

  if (v.sentence_class_similarity) {
    const auto fnn = bind_relu_fnn(g, params_, "sentence_fnn");
    trace.sentence_similarity = class_similarity(trace.sentence_embeddings, fnn, class_matrix);
    trace.enriched = enrich(trace.sentence_embeddings, trace.sentence_similarity);
  } else {
    trace.enriched = trace.sentence_embeddings;
  }

  if (v.gate) {
    auto gated = gate(trace.enriched, bind_gate(g, params_, c));
    trace.gated = gated.gated;
    trace.gate_scores = std::move(gated.scores);
  } else {
    trace.gated = trace.enriched;
    trace.gate_scores.assign(doc.sentence_count(), 0.5);
  }

  trace.encodings = encode_sequence(trace.gated, bind_gru_cell(g, params_, "encoder_gru"));
  trace.decode = decode_document(trace.encodings, bind_decoder(g, params_));

  std::optional<DocumentClassSimilarity<T>> doc_sim;
  if (v.document_class_similarity) {
    doc_sim = DocumentClassSimilarity<T>{bind_relu_fnn(g, params_, "document_fnn"), class_matrix};
  }
  trace.head = classify_head(trace.decode.document_embedding, doc_sim, bind_output_head(g, params_));
  return trace;
}

template <typename T>
Tensor<T> Model<T>::loss(const ForwardTrace<T>& trace, std::size_t label) const {
  const auto& probs = trace.probabilities();
  const std::size_t c = probs.numel();
  if (label >= c) {
    throw DataError("label " + std::to_string(label) + " outside " + std::to_string(c) + " classes");
  }
  std::vector<T> target(c, T(0));
  target[label] = T(1);
  const auto t = probs.graph().constant(probs.shape(), std::move(target));
  return ad::bce_loss(probs, t);
}

template <typename T>
Prediction Model<T>::predict(const text::TokenizedDocument& doc) const {
  Graph<T> g;
  const auto trace = forward(g, doc);
  Prediction p;
  for (T v : trace.probabilities().values()) p.probabilities.push_back(static_cast<double>(v));
  p.predicted = argmax(p.probabilities);
  if (doc.n_classes != 0) p.gold = doc.label;
  p.importance.document_id = doc.id;
  p.importance.scores = trace.gate_scores;
  p.importance.spans = doc.sentence_spans;
  p.importance.gated = trace.has_gate;
  p.importance.predicted = p.predicted;
  p.importance.gold = p.gold;
  return p;
}

template class Model<float>;
template class Model<double>;

}  // namespace gatedoc::model
