#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gatedoc/model/classifier.hpp"
#include "gatedoc/model/config.hpp"
#include "gatedoc/model/document_encoder.hpp"
#include "gatedoc/model/sentence_encoder.hpp"
#include "gatedoc/text/document.hpp"

namespace gatedoc::model {

/// Per-sentence gate scores of one document, aligned with sentence spans.
struct ImportanceProfile {
  std::string document_id;
  std::vector<double> scores;
  std::vector<text::Span> spans;
  /// False when the model has no gate; scores are then 0.5 placeholders.
  bool gated = true;
  std::optional<std::size_t> predicted;
  std::optional<std::size_t> gold;
};

struct Prediction {
  std::vector<double> probabilities;
  std::size_t predicted = 0;
  std::optional<std::size_t> gold;
  ImportanceProfile importance;

  bool correct() const { return gold && *gold == predicted; }
};

/// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

template <typename T>
struct ForwardTrace {
  Tensor<T> encoded;               // transformer output
  Tensor<T> sentence_embeddings;   // E
  Tensor<T> sentence_similarity;   // C (invalid when disabled)
  Tensor<T> enriched;              // E'
  Tensor<T> gated;                 // E''
  Tensor<T> encodings;             // enc_1..enc_n
  DecodeResult<T> decode;
  HeadResult<T> head;
  std::vector<double> gate_scores;
  bool has_gate = true;

  const Tensor<T>& probabilities() const { return head.probabilities; }
};

/// Names and shapes of every parameter a config implies, in registration order.
std::vector<std::pair<std::string, ad::Shape>> parameter_layout(const ModelConfig& config);

template <typename T>
class Model {
 public:
  /// Throws CheckpointError if `params` does not match the config's layout.
  Model(ModelConfig config, ParameterSet<T> params);

  static Model initialize(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParameterSet<T>& parameters() { return params_; }
  const ParameterSet<T>& parameters() const { return params_; }

  ForwardTrace<T> forward(Graph<T>& g, const text::TokenizedDocument& doc) const;
  /// Binary cross-entropy of the trace's probabilities against a one-hot label.
  Tensor<T> loss(const ForwardTrace<T>& trace, std::size_t label) const;
  Prediction predict(const text::TokenizedDocument& doc) const;

  template <typename U>
  Model<U> cast() const {
    return Model<U>(config_, params_.template cast<U>());
  }

 private:
  ModelConfig config_;
  ParameterSet<T> params_;
};

extern template class Model<float>;
extern template class Model<double>;

}  // namespace gatedoc::model
