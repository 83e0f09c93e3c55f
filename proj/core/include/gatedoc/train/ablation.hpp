#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gatedoc/analysis/stats.hpp"
#include "gatedoc/model/config.hpp"
#include "gatedoc/text/document.hpp"
#include "gatedoc/train/config.hpp"

namespace gatedoc::train {

struct AblationRow {
  std::string label;
  model::Variant variant;
  /// One entry per repeat (seed = base seed + repeat index).
  std::vector<double> dev_accuracies;
  std::vector<double> test_accuracies;
  /// Welch test of this row's test accuracies against the whole model's;
  /// present for the ablated rows when repeats >= 2.
  std::optional<analysis::WelchResult> versus_full;

  double dev_accuracy() const;
  double test_accuracy() const;
};

struct AblationTable {
  std::vector<AblationRow> rows;
};

/// Row labels, whole model first, then one component removed per row.
const std::vector<std::pair<std::string, model::Variant>>& ablation_variants();

/// Trains and scores the whole model and each single-component removal with
/// identical data and seeds. `base.model.variant` is ignored.
AblationTable ablation_run(const TrainConfig& base, std::size_t vocab_size, std::size_t n_classes,
                           std::span<const text::TokenizedDocument> train_set,
                           std::span<const text::TokenizedDocument> dev_set,
                           std::span<const text::TokenizedDocument> test_set, std::size_t repeats = 1);

}  // namespace gatedoc::train
