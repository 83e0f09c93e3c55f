// Acceptance runner: one PASS/FAIL line per criterion. With --only <name> a
// single criterion runs (ctest registers each separately); exit status is
// non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gatedoc/analysis/checkpoint.hpp"
#include "gatedoc/analysis/stats.hpp"
#include "gatedoc/errors.hpp"
#include "gatedoc/model/toy.hpp"
#include "gatedoc/synthetic/key_sentence.hpp"
#include "gatedoc/text/dataset.hpp"
#include "gatedoc/train/ablation.hpp"
#include "gatedoc/train/trainer.hpp"
#include "oracle/reference_model.hpp"
#include "support/gradient_cases.hpp"

namespace fs = std::filesystem;
using namespace gatedoc;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gatedoc-acceptance-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------

Outcome gradient_suite() {
  const auto t0 = Clock::now();
  double worst_unit = 0;
  std::string worst_name;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto cases = testing_support::op_cases(seed);
    auto cells = testing_support::cell_cases(seed);
    cases.insert(cases.end(), cells.begin(), cells.end());
    for (const auto& c : cases) {
      const double e = c.result.finite ? c.result.max_relative_error : INFINITY;
      if (e >= worst_unit) {
        worst_unit = e;
        worst_name = c.name;
      }
    }
  }
  Rng rng(1);
  const auto config = model::toy_config(4);
  const auto doc = model::random_document(rng, 2, config.vocab_size, config.n_classes);
  const auto e2e = model::model_grad_check(config, doc, 1);
  const double elapsed = seconds_since(t0);
  const bool ok = worst_unit < 1e-5 && e2e.passed(1e-4) && elapsed < 30.0;
  return {ok, fmt("ops/cells max rel err %.2e (%s) < 1e-5; end-to-end 2-sentence width-4 %.2e < 1e-4; %.1fs < 30s",
                  worst_unit, worst_name.c_str(), e2e.max_relative_error, elapsed)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::size_t cases = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (std::size_t sentences = 1; sentences <= 4; ++sentences) {
      auto config = model::toy_config(6, 14, 3);
      config.n_heads = 2 + (seed % 2);
      config.hidden_dim = config.token_dim = 6;
      config.gate_mode = seed % 3 == 0 ? model::GateMode::kVector : model::GateMode::kScalar;
      if (seed == 4) config.variant.sentence_class_similarity = false;
      if (seed == 5) config.variant.gate = false;
      if (seed == 6) config.variant.document_class_similarity = false;
      auto m = model::Model<double>::initialize(config, seed);
      Rng rng(seed * 1000 + sentences);
      model::randomize(m.parameters(), rng);
      const auto doc = model::random_document(rng, sentences, config.vocab_size, config.n_classes);

      ad::Graph<double> g;
      const auto trace = m.forward(g, doc);
      const double loss = m.loss(trace, doc.label).item();
      const auto ref = oracle::ReferenceModel(config, m.parameters()).run(doc);

      const auto probs = trace.probabilities().values();
      for (std::size_t k = 0; k < probs.size(); ++k) worst = std::max(worst, std::abs(probs[k] - ref.probabilities[k]));
      for (std::size_t s = 0; s < sentences; ++s) {
        worst = std::max(worst, std::abs(trace.gate_scores[s] - ref.gate_scores[s]));
      }
      worst = std::max(worst, std::abs(loss - ref.loss));
      ++cases;
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-8 && elapsed < 10.0,
          fmt("%zu documents (10 seeds x 1-4 sentences), max |engine - reference| %.2e < 1e-8; %.2fs < 10s", cases,
              worst, elapsed)};
}

struct SyntheticData {
  std::vector<synthetic::KeySentenceDocument> train_raw, dev_raw, test_raw;
  text::Vocab vocab;
  std::vector<text::TokenizedDocument> train, dev, test;
  train::TrainConfig config;
};

SyntheticData synthetic_data() {
  SyntheticData d;
  synthetic::KeySentenceOptions opt;
  opt.documents = 2000;
  opt.distractors = 5;
  opt.seed = 2024;
  auto split = text::split_dataset(synthetic::make_key_sentence_corpus(opt), 17);
  d.train_raw = std::move(split.train);
  d.dev_raw = std::move(split.dev);
  d.test_raw = std::move(split.test);
  std::vector<std::string> texts;
  for (const auto& doc : d.train_raw) texts.push_back(doc.raw.text);
  d.vocab = text::build_vocab(texts);
  d.config = train::TrainConfig::desk();  // d_h 64, L 2, d_g 64, batch 8, lr 1e-3, 30 epochs
  d.config.seed = 1;
  d.train = synthetic::tokenize_key_sentence_corpus(d.train_raw, d.vocab, d.config.limits);
  d.dev = synthetic::tokenize_key_sentence_corpus(d.dev_raw, d.vocab, d.config.limits);
  d.test = synthetic::tokenize_key_sentence_corpus(d.test_raw, d.vocab, d.config.limits);
  return d;
}

Outcome synthetic_key_sentence() {
  const auto t0 = Clock::now();
  const auto d = synthetic_data();
  const auto mc = train::resolve_model_config(d.config, d.vocab.size(), 2);
  const auto result = train::train<float>(d.config, mc, d.train, d.dev);
  const auto ev = train::evaluate(result.model, d.test);
  double key = 0, other = 0;
  std::size_t n_key = 0, n_other = 0;
  for (std::size_t i = 0; i < d.test.size(); ++i) {
    const auto& scores = ev.predictions[i].importance.scores;
    for (std::size_t s = 0; s < scores.size(); ++s) {
      if (s == d.test_raw[i].key_index) {
        key += scores[s];
        ++n_key;
      } else {
        other += scores[s];
        ++n_other;
      }
    }
  }
  const double key_mean = key / static_cast<double>(n_key);
  const double other_mean = other / static_cast<double>(n_other);
  const double elapsed = seconds_since(t0);
  const bool acc_ok = ev.accuracy >= 0.95 && result.history.size() <= 30;
  const bool gate_ok = key_mean - other_mean >= 0.2;
  return {acc_ok && gate_ok && elapsed < 300.0,
          fmt("test accuracy %.4f >= 0.95 [%s] after %zu epochs (best %zu); key-sentence gate mean %.4f vs "
              "distractor %.4f, gap %.4f >= 0.2 [%s]; %.1fs < 300s",
              ev.accuracy, acc_ok ? "ok" : "missed", result.history.size(), result.best_epoch, key_mean,
              other_mean, key_mean - other_mean, gate_ok ? "ok" : "missed", elapsed)};
}

Outcome ablation_directionality() {
  const auto t0 = Clock::now();
  const auto d = synthetic_data();
  const auto table = train::ablation_run(d.config, d.vocab.size(), 2, d.train, d.dev, d.test, 1);
  const std::vector<std::string> expected = {
      "The whole model",
      "- Class similarity embedding for a sentence",
      "- Gated sentence embedding",
      "- Class similarity embedding for a document",
  };
  std::vector<std::string> labels;
  for (const auto& r : table.rows) labels.push_back(r.label);
  const double full = table.rows.at(0).test_accuracy();
  double no_gate = -1;
  for (const auto& r : table.rows) {
    if (r.label == "- Gated sentence embedding") no_gate = r.test_accuracy();
  }
  std::string accs;
  for (const auto& r : table.rows) accs += fmt(" %.4f", r.test_accuracy());
  const bool ok = labels == expected && no_gate >= 0 && no_gate <= full + 0.02;
  return {ok, fmt("4 rows with the expected labels [%s]; no-gate %.4f <= full %.4f + 0.02; test accuracies:%s; %.1fs",
                  labels == expected ? "ok" : "mismatch", no_gate, full, accs.c_str(), seconds_since(t0))};
}

Outcome label_encoding() {
  // Expected classes written out independently of the implementation.
  const int three_way[5] = {0, 0, 1, 2, 2};
  std::size_t mismatches = 0;
  for (int s = 1; s <= 5; ++s) {
    if (text::bucket_label(s, text::LabelScheme::kThreeWay) != static_cast<std::size_t>(three_way[s - 1])) {
      ++mismatches;
    }
  }
  for (int s = 1; s <= 10; ++s) {
    if (text::bucket_label(s, text::LabelScheme::kTenScale) != static_cast<std::size_t>(s - 1)) ++mismatches;
  }
  std::size_t rejected = 0;
  for (auto [score, scheme] : {std::pair{0, text::LabelScheme::kThreeWay}, std::pair{6, text::LabelScheme::kThreeWay},
                               std::pair{0, text::LabelScheme::kTenScale}, std::pair{11, text::LabelScheme::kTenScale}}) {
    try {
      text::bucket_label(score, scheme);
    } catch (const DataError&) {
      ++rejected;
    }
  }
  return {mismatches == 0 && rejected == 4,
          fmt("three_way 1-5 and ten_scale 1-10: %zu mismatches; %zu/4 out-of-scale scores rejected", mismatches,
              rejected)};
}

Outcome accuracy_metric() {
  // All-zero parameters give every class probability 0.5, and the tie-break
  // predicts class 0. Six documents labeled 0 and two labeled 1 => 6/8.
  auto config = model::toy_config(4, 12, 2);
  auto m = model::Model<float>::initialize(config, 1);
  for (auto& p : m.parameters()) std::fill(p.value.begin(), p.value.end(), 0.0f);
  Rng rng(9);
  std::vector<text::TokenizedDocument> docs;
  for (int i = 0; i < 8; ++i) {
    auto doc = model::random_document(rng, 1 + i % 3, config.vocab_size, 2);
    doc.label = i < 6 ? 0 : 1;
    docs.push_back(doc);
  }
  const auto ev = train::evaluate(m, docs);
  return {ev.accuracy == 0.75 && ev.correct == 6 && ev.total == 8,
          fmt("8 documents, %zu correct, accuracy %.17g == 0.75", ev.correct, ev.accuracy)};
}

Outcome stddev_report_recount() {
  const auto dir = scratch_dir("stddev");
  auto config = model::toy_config(8, 40, 3);
  auto m = model::Model<float>::initialize(config, 3);
  Rng rng(3);
  model::randomize(m.parameters(), rng, 1.0);
  std::vector<std::string> words;
  for (int i = 0; i < 35; ++i) words.push_back("w" + std::to_string(i));
  text::Vocab vocab(words);
  train::TrainConfig tc;
  tc.model = config;
  analysis::save_checkpoint(dir / "toy.gdoc", m, tc, vocab);
  const auto ckpt = analysis::load_checkpoint(dir / "toy.gdoc");

  const char* texts[] = {"W1 w2 w3.", "W4 w5. W6 w7 w8. W9 w10.", "W11. W12 w13. W14 w15 w16. W17."};
  std::vector<model::ImportanceProfile> profiles;
  for (int i = 0; i < 3; ++i) {
    const auto doc = text::prepare_document("d" + std::to_string(i), texts[i], ckpt.vocab, ckpt.config.limits, 0, 3);
    profiles.push_back(ckpt.model.predict(doc).importance);
  }
  const auto report = analysis::stddev_report(profiles);

  // Independent recount.
  std::vector<double> expected;
  for (const auto& p : profiles) {
    const double lo = *std::min_element(p.scores.begin(), p.scores.end());
    const double hi = *std::max_element(p.scores.begin(), p.scores.end());
    std::vector<double> z;
    for (double s : p.scores) z.push_back(hi > lo ? (s - lo) / (hi - lo) : 0.0);
    double mean = 0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0;
    for (double v : z) var += (v - mean) * (v - mean);
    expected.push_back(std::sqrt(var / static_cast<double>(z.size())));
  }
  std::sort(expected.begin(), expected.end());
  const auto above = std::count_if(expected.begin(), expected.end(), [](double v) { return v > 0.2; });
  const double fraction = static_cast<double>(above) / 3.0;

  const bool sorted = std::is_sorted(report.stddevs.begin(), report.stddevs.end());
  const bool bounded = std::all_of(report.stddevs.begin(), report.stddevs.end(), [](double v) { return v >= 0 && v <= 0.5; });
  const bool ok = sorted && bounded && report.documents == 3 && report.stddevs == expected &&
                  report.fraction_above == fraction;
  std::string values;
  for (double v : report.stddevs) values += fmt(" %.6f", v);
  return {ok, fmt("stddevs [%s ] sorted=%d bounded=%d; fraction above 0.2 = %.4f (recount %.4f); exact match %s",
                  values.c_str(), sorted, bounded, report.fraction_above, fraction,
                  report.stddevs == expected ? "yes" : "no")};
}

Outcome welch_ttest() {
  // Reference: scipy.stats.ttest_ind([1..5], [6..10], equal_var=False).
  constexpr double kReferenceP = 0.001052825793366539;
  const std::vector<double> a = {1, 2, 3, 4, 5}, b = {6, 7, 8, 9, 10};
  const auto r = analysis::welch_ttest(a, b);
  const auto same = analysis::welch_ttest(a, a);
  const bool ok = std::abs(std::abs(r.t) - 5.0) < 1e-6 && std::abs(r.p - kReferenceP) < 1e-5 && same.t == 0.0 &&
                  same.p == 1.0;
  return {ok, fmt("t = %.9f (|t| within 1e-6 of 5), p = %.12f (reference %.12f, tol 1e-5); welch(x,x) = (%g, %g)",
                  r.t, r.p, kReferenceP, same.t, same.p)};
}

std::string cli_path;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + cli_path + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism() {
  if (cli_path.empty()) return {false, "CLI path not provided (--cli)"};
  const auto dir = scratch_dir("determinism");
  if (run_cli("synth --documents 300 --seed 5 --out \"" + (dir / "corpus.jsonl").string() + "\"", dir / "synth.log") != 0) {
    return {false, "synth failed: " + slurp(dir / "synth.log")};
  }
  {
    std::ofstream cfg(dir / "train.cfg");
    cfg << "# small run for the determinism check\nmax_epochs = 3\nhidden_dim = 32\ngru_dim = 32\n";
  }
  for (int run = 1; run <= 2; ++run) {
    const std::string r = std::to_string(run);
    const int rc = run_cli("train --config \"" + (dir / "train.cfg").string() + "\" --seed 7 --data \"" +
                               (dir / "corpus.jsonl").string() + "\" --checkpoint \"" + (dir / ("m" + r + ".gdoc")).string() +
                               "\" --out \"" + (dir / ("metrics" + r + ".jsonl")).string() + "\"",
                           dir / ("train" + r + ".log"));
    if (rc != 0) return {false, "train run " + r + " failed: " + slurp(dir / ("train" + r + ".log"))};
  }
  const auto m1 = slurp(dir / "metrics1.jsonl"), m2 = slurp(dir / "metrics2.jsonl");
  const auto c1 = slurp(dir / "m1.gdoc"), c2 = slurp(dir / "m2.gdoc");
  const bool ok = !m1.empty() && m1 == m2 && !c1.empty() && c1 == c2;
  return {ok, fmt("two `gatedoc train --seed 7` runs: metrics %zu bytes %s, checkpoints %zu bytes %s", m1.size(),
                  m1 == m2 ? "identical" : "differ", c1.size(), c1 == c2 ? "identical" : "differ")};
}

Outcome checkpoint_roundtrip() {
  const auto dir = scratch_dir("checkpoint");
  auto config = model::toy_config(8, 30, 3);
  auto m = model::Model<float>::initialize(config, 11);
  Rng rng(11);
  model::randomize(m.parameters(), rng);
  std::vector<std::string> words;
  for (int i = 0; i < 25; ++i) words.push_back("t" + std::to_string(i));
  text::Vocab vocab(words);
  train::TrainConfig tc;
  tc.model = config;
  const auto path = dir / "m.gdoc";
  analysis::save_checkpoint(path, m, tc, vocab);
  const auto back = analysis::load_checkpoint(path);

  bool bit_exact = back.config == tc && back.vocab.size() == vocab.size();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto doc = model::random_document(rng, 1 + s % 4, config.vocab_size, 3);
    const auto a = m.predict(doc), b = back.model.predict(doc);
    bit_exact = bit_exact && a.probabilities.size() == b.probabilities.size() &&
                std::memcmp(a.probabilities.data(), b.probabilities.data(), a.probabilities.size() * sizeof(double)) == 0 &&
                a.importance.scores == b.importance.scores;
  }

  // Flip one byte inside the parameter arrays (just before the checksum).
  std::string bytes = slurp(path);
  bytes[bytes.size() - 10] ^= 0x01;
  const auto corrupt = dir / "corrupt.gdoc";
  std::ofstream(corrupt, std::ios::binary) << bytes;
  std::string refusal;
  try {
    analysis::load_checkpoint(corrupt);
  } catch (const CheckpointError& e) {
    refusal = e.what();
  }
  return {bit_exact && !refusal.empty(),
          fmt("save -> load -> forward bit-exact on 5 documents: %s; corrupted byte refused: %s", bit_exact ? "yes" : "no",
              refusal.empty() ? "NO" : refusal.c_str())};
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"gradient_suite", gradient_suite},
    {"oracle_equivalence", oracle_equivalence},
    {"synthetic_key_sentence", synthetic_key_sentence},
    {"ablation_directionality", ablation_directionality},
    {"label_encoding", label_encoding},
    {"accuracy_metric", accuracy_metric},
    {"stddev_report", stddev_report_recount},
    {"welch_ttest", welch_ttest},
    {"determinism", determinism},
    {"checkpoint_roundtrip", checkpoint_roundtrip},
};

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else if (arg == "--cli" && i + 1 < argc) {
      cli_path = argv[++i];
    } else if (arg == "--list") {
      for (const auto& c : kCriteria) std::cout << c.name << '\n';
      return 0;
    } else {
      std::cerr << "usage: gatedoc_acceptance [--only NAME] [--cli PATH] [--list]\n";
      return 1;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    if (!o.passed) ++failures;
  }
  if (ran == 0) {
    std::cerr << "no criterion named '" << only << "'\n";
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
