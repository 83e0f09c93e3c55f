#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gatedoc/model/config.hpp"
#include "gatedoc/text/document.hpp"

namespace gatedoc::train {

/// Everything that determines a training run. vocab_size and n_classes of
/// `model` are filled in from the data.
struct TrainConfig {
  text::LabelScheme scheme = text::LabelScheme::kThreeWay;
  text::DocumentLimits limits;
  std::size_t min_freq = 2;
  std::size_t max_vocab = 20000;

  model::ModelConfig model;

  double learning_rate = 1e-3;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  std::uint64_t seed = 1;

  /// Desk-scale defaults (the struct defaults).
  static TrainConfig desk();
  /// Full-scale sizes: 128-d tokens, 768 hidden, 300-wide class
  /// embedding, batch 64, learning rate 2e-5.
  static TrainConfig paper();

  /// Sets one field from its text form; throws UsageError for unknown keys
  /// or unparsable values.
  void set(std::string_view key, std::string_view value);
  /// Every field as key -> text, in a fixed order (see keys()).
  std::map<std::string, std::string> to_map() const;
  static const std::vector<std::string>& keys();
  static std::string describe(std::string_view key);

  /// Throws UsageError on non-positive sizes or rates.
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

/// splitmix64-style mixing to derive independent seeds from one base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace gatedoc::train
