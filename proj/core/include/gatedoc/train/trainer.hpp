#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gatedoc/model/model.hpp"
#include "gatedoc/text/document.hpp"
#include "gatedoc/train/config.hpp"

namespace gatedoc::train {

/// The model config implied by a training config and the data's sizes.
model::ModelConfig resolve_model_config(const TrainConfig& config, std::size_t vocab_size,
                                        std::size_t n_classes);

struct Evaluation {
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<model::Prediction> predictions;
};

/// correct / total over labeled predictions. Throws UsageError when empty.
double accuracy(std::span<const model::Prediction> predictions);

template <typename T>
Evaluation evaluate(const model::Model<T>& model, std::span<const text::TokenizedDocument> documents);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_accuracy = 0.0;
};

/// One JSON object per line: {"dev_accuracy":..,"epoch":..,"train_loss":..}.
std::string metrics_jsonl(std::span<const EpochRecord> history);

template <typename T>
struct TrainResult {
  model::Model<T> model;  // parameters from the best dev epoch
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_dev_accuracy = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam on mean per-document BCE. After each epoch the dev set is
/// scored; the best epoch's parameters are kept and training stops after
/// `patience` epochs without improvement. Deterministic for a given config.
/// Throws TrainingError on a non-finite loss or gradient.
template <typename T>
TrainResult<T> train(const TrainConfig& config, const model::ModelConfig& model_config,
                     std::span<const text::TokenizedDocument> train_set,
                     std::span<const text::TokenizedDocument> dev_set, const EpochCallback& on_epoch = {});

/// Same, continuing from existing parameters.
template <typename T>
TrainResult<T> train(const TrainConfig& config, model::Model<T> initial,
                     std::span<const text::TokenizedDocument> train_set,
                     std::span<const text::TokenizedDocument> dev_set, const EpochCallback& on_epoch = {});

}  // namespace gatedoc::train
