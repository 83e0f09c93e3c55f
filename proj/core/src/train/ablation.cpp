#include "gatedoc/train/ablation.hpp"

#include <numeric>

#include "gatedoc/errors.hpp"
#include "gatedoc/train/trainer.hpp"

namespace gatedoc::train {

namespace {
double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}
}  // namespace

double AblationRow::dev_accuracy() const { return mean(dev_accuracies); }
double AblationRow::test_accuracy() const { return mean(test_accuracies); }

const std::vector<std::pair<std::string, model::Variant>>& ablation_variants() {
  static const std::vector<std::pair<std::string, model::Variant>> rows = {
      {"The whole model", {true, true, true}},
      {"- Class similarity embedding for a sentence", {false, true, true}},
      {"- Gated sentence embedding", {true, false, true}},
      {"- Class similarity embedding for a document", {true, true, false}},
  };
  return rows;
}

AblationTable ablation_run(const TrainConfig& base, std::size_t vocab_size, std::size_t n_classes,
                           std::span<const text::TokenizedDocument> train_set,
                           std::span<const text::TokenizedDocument> dev_set,
                           std::span<const text::TokenizedDocument> test_set, std::size_t repeats) {
  if (repeats == 0) throw UsageError("ablation_run: repeats must be at least 1");
  if (test_set.empty()) throw UsageError("ablation_run: empty test split");
  AblationTable table;
  for (const auto& [label, variant] : ablation_variants()) {
    AblationRow row{label, variant, {}, {}, std::nullopt};
    for (std::size_t r = 0; r < repeats; ++r) {
      TrainConfig config = base;
      config.model.variant = variant;
      config.seed = base.seed + r;
      const auto model_config = resolve_model_config(config, vocab_size, n_classes);
      const auto result = train<float>(config, model_config, train_set, dev_set);
      row.dev_accuracies.push_back(result.best_dev_accuracy);
      row.test_accuracies.push_back(evaluate(result.model, test_set).accuracy);
    }
    table.rows.push_back(std::move(row));
  }
  if (repeats >= 2) {
    const auto& full = table.rows.front().test_accuracies;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      table.rows[i].versus_full = analysis::welch_ttest(full, table.rows[i].test_accuracies);
    }
  }
  return table;
}

}  // namespace gatedoc::train
