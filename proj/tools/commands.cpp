#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "gatedoc/analysis/checkpoint.hpp"
#include "gatedoc/analysis/explain.hpp"
#include "gatedoc/analysis/heatmap.hpp"
#include "gatedoc/analysis/stats.hpp"
#include "gatedoc/errors.hpp"
#include "gatedoc/model/toy.hpp"
#include "gatedoc/synthetic/key_sentence.hpp"
#include "gatedoc/text/dataset.hpp"
#include "gatedoc/train/ablation.hpp"
#include "gatedoc/train/trainer.hpp"

namespace gatedoc::cli {

using nlohmann::json;
namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw IoError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

constexpr std::uint64_t kSplitStream = 3;

struct Splits {
  text::Vocab vocab;
  std::vector<text::TokenizedDocument> train, dev, test;
};

void report_skips(const Context& ctx, const text::RawCorpus& corpus, const fs::path& path) {
  if (corpus.skipped == 0) return;
  ctx.log << path.string() << ": skipped " << corpus.skipped << " record(s)\n";
  for (const auto& w : corpus.warnings) ctx.log << "  " << w << '\n';
}

text::RawCorpus read_corpus(const Context& ctx, const fs::path& path) {
  auto corpus = text::read_jsonl(path, ctx.config.scheme);
  report_skips(ctx, corpus, path);
  if (corpus.documents.empty()) throw DataError(path.string() + ": no valid documents");
  return corpus;
}

std::vector<text::TokenizedDocument> tokenize(const Context& ctx, const std::vector<text::RawDocument>& docs,
                                              const text::Vocab& vocab) {
  text::RawCorpus corpus;
  corpus.documents = docs;
  auto ds = text::tokenize_corpus(corpus, ctx.config.scheme, vocab, ctx.config.limits);
  for (const auto& w : ds.warnings) ctx.log << w << '\n';
  return std::move(ds.documents);
}

Splits load_splits(const Context& ctx, const DataArgs& args, bool need_test) {
  std::vector<text::RawDocument> train, dev, test;
  if (!args.data.empty()) {
    if (!args.train.empty() || !args.dev.empty() || !args.test.empty()) {
      throw UsageError("give either --data or --train/--dev/--test, not both");
    }
    auto split = text::split_dataset(read_corpus(ctx, args.data).documents,
                                     train::derive_seed(ctx.config.seed, kSplitStream));
    train = std::move(split.train);
    dev = std::move(split.dev);
    test = std::move(split.test);
  } else {
    if (args.train.empty() || args.dev.empty()) throw UsageError("need --data, or --train and --dev");
    train = read_corpus(ctx, args.train).documents;
    dev = read_corpus(ctx, args.dev).documents;
    if (!args.test.empty()) test = read_corpus(ctx, args.test).documents;
  }
  if (train.empty() || dev.empty()) throw DataError("train and dev splits must both be non-empty");
  if (need_test && test.empty()) throw UsageError("this command needs a test split");

  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const auto& d : train) texts.push_back(d.text);
  Splits out;
  out.vocab = text::build_vocab(texts, ctx.config.min_freq, ctx.config.max_vocab);
  out.train = tokenize(ctx, train, out.vocab);
  out.dev = tokenize(ctx, dev, out.vocab);
  out.test = tokenize(ctx, test, out.vocab);
  if (out.train.empty() || out.dev.empty()) throw DataError("no tokenizable documents in train or dev");
  return out;
}

analysis::Checkpoint open_checkpoint(const fs::path& path) {
  if (path.empty()) throw UsageError("--checkpoint is required");
  return analysis::load_checkpoint(path);
}

json prediction_json(const model::Prediction& p) {
  json j;
  j["id"] = p.importance.document_id;
  j["predicted"] = p.predicted;
  j["gold"] = p.gold ? json(*p.gold) : json(nullptr);
  j["probabilities"] = p.probabilities;
  j["gate_scores"] = p.importance.scores;
  j["gated"] = p.importance.gated;
  json spans = json::array();
  for (const auto& s : p.importance.spans) spans.push_back({s.begin, s.end});
  j["spans"] = spans;
  return j;
}

void emit(const Context& ctx, const json& j, const fs::path& report) {
  const std::string text = j.dump(2) + "\n";
  ctx.out << text;
  if (!report.empty()) write_file_atomic(report, text);
}

}  // namespace

int run_train(const Context& ctx, const DataArgs& data, const fs::path& checkpoint, const fs::path& metrics) {
  ctx.config.validate();
  const auto splits = load_splits(ctx, data, false);
  const auto model_config =
      train::resolve_model_config(ctx.config, splits.vocab.size(), text::class_count(ctx.config.scheme));
  ctx.log << "train " << splits.train.size() << " / dev " << splits.dev.size() << " documents, vocab "
          << splits.vocab.size() << '\n';
  const auto result = train::train<float>(ctx.config, model_config, splits.train, splits.dev,
                                          [&](const train::EpochRecord& r) {
                                            ctx.log << "epoch " << r.epoch << " loss " << r.train_loss
                                                    << " dev " << r.dev_accuracy << '\n';
                                          });
  const std::string lines = train::metrics_jsonl(result.history);
  if (!metrics.empty()) write_file_atomic(metrics, lines);
  if (!checkpoint.empty()) analysis::save_checkpoint(checkpoint, result.model, ctx.config, splits.vocab);

  json summary;
  summary["best_epoch"] = result.best_epoch;
  summary["best_dev_accuracy"] = result.best_dev_accuracy;
  summary["epochs"] = result.history.size();
  if (!splits.test.empty()) summary["test_accuracy"] = train::evaluate(result.model, splits.test).accuracy;
  ctx.out << summary.dump(2) << '\n';
  return 0;
}

int run_eval(const Context& ctx, const fs::path& checkpoint, const fs::path& data, const fs::path& report) {
  const auto ckpt = open_checkpoint(checkpoint);
  if (data.empty()) throw UsageError("--data is required");
  Context inner{ckpt.config, ctx.out, ctx.log};
  const auto docs = tokenize(inner, read_corpus(inner, data).documents, ckpt.vocab);
  const auto ev = train::evaluate(ckpt.model, docs);
  json j;
  j["accuracy"] = ev.accuracy;
  j["correct"] = ev.correct;
  j["total"] = ev.total;
  emit(ctx, j, report);
  return 0;
}

int run_predict(const Context& ctx, const fs::path& checkpoint, const fs::path& data,
                const std::optional<std::string>& text, const fs::path& report) {
  const auto ckpt = open_checkpoint(checkpoint);
  json out = json::array();
  if (text) {
    out.push_back(prediction_json(analysis::explain(ckpt.model, ckpt.vocab, ckpt.config.limits, *text)));
  } else if (!data.empty()) {
    Context inner{ckpt.config, ctx.out, ctx.log};
    for (const auto& doc : tokenize(inner, read_corpus(inner, data).documents, ckpt.vocab)) {
      out.push_back(prediction_json(ckpt.model.predict(doc)));
    }
  } else {
    throw UsageError("predict needs --data or --text");
  }
  emit(ctx, out, report);
  return 0;
}

int run_explain(const Context& ctx, const fs::path& checkpoint, const std::string& text, const fs::path& html) {
  const auto ckpt = open_checkpoint(checkpoint);
  const auto p = analysis::explain(ckpt.model, ckpt.vocab, ckpt.config.limits, text);
  if (!html.empty()) write_file_atomic(html, analysis::render_heatmap(p.importance, text));
  ctx.out << prediction_json(p).dump(2) << '\n';
  return 0;
}

int run_ablate(const Context& ctx, const DataArgs& data, std::size_t repeats, const fs::path& report) {
  ctx.config.validate();
  const auto splits = load_splits(ctx, data, true);
  const auto table = train::ablation_run(ctx.config, splits.vocab.size(), text::class_count(ctx.config.scheme),
                                         splits.train, splits.dev, splits.test, repeats);
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row;
    row["label"] = r.label;
    row["dev_accuracy"] = r.dev_accuracy();
    row["test_accuracy"] = r.test_accuracy();
    row["dev_accuracies"] = r.dev_accuracies;
    row["test_accuracies"] = r.test_accuracies;
    if (r.versus_full) {
      row["t_test_vs_full"] = {{"t", r.versus_full->t},
                               {"p", r.versus_full->p},
                               {"df", r.versus_full->degrees_of_freedom}};
    }
    rows.push_back(row);
  }
  emit(ctx, json{{"repeats", repeats}, {"rows", rows}}, report);
  return 0;
}

int run_analyze(const Context& ctx, const fs::path& checkpoint, const fs::path& data, const fs::path& report) {
  const auto ckpt = open_checkpoint(checkpoint);
  if (data.empty()) throw UsageError("--data is required");
  Context inner{ckpt.config, ctx.out, ctx.log};
  const auto docs = tokenize(inner, read_corpus(inner, data).documents, ckpt.vocab);
  const auto ev = train::evaluate(ckpt.model, docs);
  std::vector<model::ImportanceProfile> profiles;
  for (const auto& p : ev.predictions) profiles.push_back(p.importance);
  const auto sd = analysis::stddev_report(profiles);
  const auto hist = analysis::error_histogram(ev.predictions);

  json j;
  j["accuracy"] = ev.accuracy;
  j["stddev_report"] = {{"documents", sd.documents},
                        {"threshold", sd.threshold},
                        {"fraction_above", sd.fraction_above},
                        {"stddevs", sd.stddevs}};
  json counts = json::object();
  for (const auto& [diff, n] : hist.counts) counts[std::to_string(diff)] = n;
  j["error_histogram"] = {{"counts", counts},
                          {"wrong", hist.wrong},
                          {"total", hist.total},
                          {"within_one", hist.within_one ? json(*hist.within_one) : json("n/a")},
                          {"within_two", hist.within_two ? json(*hist.within_two) : json("n/a")}};
  emit(ctx, j, report);
  return 0;
}

int run_gradcheck(const Context& ctx, std::size_t sentences, std::size_t width, const fs::path& report) {
  if (sentences == 0 || width == 0) throw UsageError("gradcheck needs at least one sentence and width >= 1");
  Rng rng(ctx.config.seed);
  const auto config = model::toy_config(width);
  const auto doc = model::random_document(rng, sentences, config.vocab_size, config.n_classes);
  const auto r = model::model_grad_check(config, doc, ctx.config.seed);
  constexpr double kTolerance = 1e-4;
  json j;
  j["max_relative_error"] = r.max_relative_error;
  j["worst_parameter"] = r.worst_parameter;
  j["worst_index"] = r.worst_index;
  j["entries_checked"] = r.entries_checked;
  j["tolerance"] = kTolerance;
  j["passed"] = r.passed(kTolerance);
  if (!r.failure.empty()) j["failure"] = r.failure;
  std::ostringstream line;
  line << std::setprecision(3) << std::scientific << r.max_relative_error;
  ctx.log << "max relative error " << line.str() << " (" << r.worst_parameter << "[" << r.worst_index << "])\n";
  emit(ctx, j, report);
  return r.passed(kTolerance) ? 0 : 3;
}

int run_synth(const Context& ctx, std::size_t documents, double distractor_noise, const fs::path& output) {
  if (output.empty()) throw UsageError("--out is required");
  synthetic::KeySentenceOptions opt;
  opt.documents = documents;
  opt.distractor_noise_rate = distractor_noise;
  opt.seed = ctx.config.seed;
  std::vector<text::RawDocument> raw;
  for (auto& d : synthetic::make_key_sentence_corpus(opt)) raw.push_back(std::move(d.raw));
  text::write_jsonl(output, raw);
  ctx.log << "wrote " << raw.size() << " documents to " << output.string() << '\n';
  return 0;
}

}  // namespace gatedoc::cli
