#include "gatedoc/model/config.hpp"

#include "gatedoc/errors.hpp"

namespace gatedoc::model {

std::string_view to_string(GateMode mode) { return mode == GateMode::kScalar ? "scalar" : "vector"; }

GateMode parse_gate_mode(std::string_view name) {
  if (name == "scalar") return GateMode::kScalar;
  if (name == "vector") return GateMode::kVector;
  throw UsageError("unknown gate mode '" + std::string(name) + "' (scalar|vector)");
}

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw UsageError(std::string(name) + " must be positive");
  };
  positive(vocab_size, "vocab_size");
  positive(n_classes, "n_classes");
  positive(token_dim, "token_dim");
  positive(hidden_dim, "hidden_dim");
  positive(n_heads, "n_heads");
  positive(class_hidden_dim, "class_hidden_dim");
  positive(class_dim, "class_dim");
  positive(gru_dim, "gru_dim");
  if (max_length < 3) throw UsageError("max_length must be at least 3");
  if (hidden_dim % n_heads != 0) {
    throw UsageError("hidden_dim (" + std::to_string(hidden_dim) + ") must be divisible by n_heads (" +
                     std::to_string(n_heads) + ")");
  }
}

}  // namespace gatedoc::model
