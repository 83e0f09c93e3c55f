#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace gatedoc::model {

enum class GateMode { kScalar, kVector };

std::string_view to_string(GateMode mode);
GateMode parse_gate_mode(std::string_view name);

/// Which optional computations exist in the model. A disabled component has
/// no parameters at all.
struct Variant {
  bool sentence_class_similarity = true;
  bool gate = true;
  bool document_class_similarity = true;

  bool operator==(const Variant&) const = default;
};

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t n_classes = 2;
  std::size_t max_length = 512;

  std::size_t token_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t n_heads = 2;
  std::size_t n_layers = 2;

  std::size_t class_hidden_dim = 32;
  std::size_t class_dim = 32;
  std::size_t gru_dim = 64;
  /// 0 selects max(16, 8 * n_classes).
  std::size_t output_hidden_dim = 0;

  GateMode gate_mode = GateMode::kScalar;
  Variant variant;

  /// Width of a sentence row after (optional) class-similarity enrichment.
  std::size_t sentence_width() const {
    return hidden_dim + (variant.sentence_class_similarity ? n_classes : 0);
  }
  std::size_t head_input_width() const {
    return gru_dim + (variant.document_class_similarity ? n_classes : 0);
  }
  std::size_t resolved_output_hidden_dim() const {
    if (output_hidden_dim != 0) return output_hidden_dim;
    return n_classes * 8 < 16 ? 16 : n_classes * 8;
  }
  bool uses_class_matrix() const {
    return variant.sentence_class_similarity || variant.document_class_similarity;
  }

  /// Throws UsageError describing the first invalid field.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

}  // namespace gatedoc::model
