#include "gatedoc/train/trainer.hpp"

#include <cmath>
#include <json.hpp>

#include "gatedoc/autodiff/optimizer.hpp"
#include "gatedoc/errors.hpp"
#include "gatedoc/text/dataset.hpp"

namespace gatedoc::train {

namespace {
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
}  // namespace

model::ModelConfig resolve_model_config(const TrainConfig& config, std::size_t vocab_size,
                                        std::size_t n_classes) {
  auto m = config.model;
  m.vocab_size = vocab_size;
  m.n_classes = n_classes;
  m.max_length = config.limits.max_length;
  m.validate();
  return m;
}

double accuracy(std::span<const model::Prediction> predictions) {
  std::size_t total = 0, correct = 0;
  for (const auto& p : predictions) {
    if (!p.gold) continue;
    ++total;
    if (p.correct()) ++correct;
  }
  if (total == 0) throw UsageError("accuracy: no labeled predictions");
  return static_cast<double>(correct) / static_cast<double>(total);
}

template <typename T>
Evaluation evaluate(const model::Model<T>& model, std::span<const text::TokenizedDocument> documents) {
  if (documents.empty()) throw UsageError("evaluate: empty dataset");
  Evaluation out;
  out.predictions.reserve(documents.size());
  for (const auto& doc : documents) {
    out.predictions.push_back(model.predict(doc));
    const auto& p = out.predictions.back();
    if (!p.gold) continue;
    ++out.total;
    if (p.correct()) ++out.correct;
  }
  if (out.total == 0) throw UsageError("evaluate: dataset has no labels");
  out.accuracy = static_cast<double>(out.correct) / static_cast<double>(out.total);
  return out;
}

std::string metrics_jsonl(std::span<const EpochRecord> history) {
  std::string out;
  for (const auto& r : history) {
    nlohmann::json j;
    j["epoch"] = r.epoch;
    j["train_loss"] = r.train_loss;
    j["dev_accuracy"] = r.dev_accuracy;
    out += j.dump();
    out += '\n';
  }
  return out;
}

template <typename T>
TrainResult<T> train(const TrainConfig& config, model::Model<T> initial,
                     std::span<const text::TokenizedDocument> train_set,
                     std::span<const text::TokenizedDocument> dev_set, const EpochCallback& on_epoch) {
  config.validate();
  if (train_set.empty() || dev_set.empty()) throw UsageError("train: empty train or dev split");

  model::Model<T> current = std::move(initial);
  TrainResult<T> result{current, {}, 0, -1.0};
  ad::Adam adam({.learning_rate = config.learning_rate});
  ad::Gradients<T> grads(current.parameters());
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto batches =
        text::make_batches(train_set.size(), config.batch_size, derive_seed(config.seed, kShuffleStream, epoch));
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      grads.zero();
      for (const auto index : batches[b]) {
        const auto& doc = train_set[index];
        ad::Graph<T> g;
        const auto trace = current.forward(g, doc);
        const auto loss = current.loss(trace, doc.label);
        const double value = static_cast<double>(loss.item());
        if (!std::isfinite(value)) {
          throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(b) + " (document '" + doc.id + "')");
        }
        epoch_loss += value;
        g.backward(loss);
        g.accumulate_parameter_grads(grads);
      }
      grads.scale(T(1) / static_cast<T>(batches[b].size()));
      try {
        adam.step(current.parameters(), grads);
      } catch (const TrainingError& e) {
        throw TrainingError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(b) + ")");
      }
    }

    EpochRecord record{epoch, epoch_loss / static_cast<double>(train_set.size()),
                       evaluate(current, dev_set).accuracy};
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);
    if (record.dev_accuracy > result.best_dev_accuracy) {
      result.best_dev_accuracy = record.dev_accuracy;
      result.best_epoch = epoch;
      result.model = current;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return result;
}

template <typename T>
TrainResult<T> train(const TrainConfig& config, const model::ModelConfig& model_config,
                     std::span<const text::TokenizedDocument> train_set,
                     std::span<const text::TokenizedDocument> dev_set, const EpochCallback& on_epoch) {
  auto initial = model::Model<T>::initialize(model_config, derive_seed(config.seed, kInitStream));
  return train<T>(config, std::move(initial), train_set, dev_set, on_epoch);
}

#define GATEDOC_INSTANTIATE(T)                                                                        \
  template Evaluation evaluate<T>(const model::Model<T>&, std::span<const text::TokenizedDocument>); \
  template TrainResult<T> train<T>(const TrainConfig&, const model::ModelConfig&,                     \
                                   std::span<const text::TokenizedDocument>,                          \
                                   std::span<const text::TokenizedDocument>, const EpochCallback&);   \
  template TrainResult<T> train<T>(const TrainConfig&, model::Model<T>,                               \
                                   std::span<const text::TokenizedDocument>,                          \
                                   std::span<const text::TokenizedDocument>, const EpochCallback&);

GATEDOC_INSTANTIATE(float)
GATEDOC_INSTANTIATE(double)
#undef GATEDOC_INSTANTIATE

}  // namespace gatedoc::train
