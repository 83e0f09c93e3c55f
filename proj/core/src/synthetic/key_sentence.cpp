#include "gatedoc/synthetic/key_sentence.hpp"

#include <array>
#include <cctype>
#include <span>
#include <string>
#include <string_view>

#include "gatedoc/errors.hpp"
#include "gatedoc/random.hpp"

namespace gatedoc::synthetic {

namespace {

constexpr std::array<std::string_view, 12> kClassWords[2] = {
    {"awful", "dreadful", "tedious", "clumsy", "boring", "painful", "sloppy", "dull", "horrible",
     "lifeless", "terrible", "bland"},
    {"superb", "wonderful", "brilliant", "delightful", "stunning", "masterful", "charming",
     "excellent", "moving", "flawless", "gripping", "splendid"},
};

constexpr std::array<std::string_view, 40> kNeutralWords = {
    "the",    "film",   "camera", "scene",  "actor",   "street", "city",   "music",
    "story",  "night",  "window", "train",  "house",   "river",  "table",  "letter",
    "wall",   "garden", "road",   "coffee", "morning", "office", "dog",    "car",
    "shows",  "opens",  "walks",  "meets",  "reads",   "moves",  "then",   "later",
    "and",    "with",   "near",   "under",  "during",  "after",  "a",      "old"};

/// Words come from `pool` with probability `pool_rate`, otherwise from the
/// neutral pool; a non-empty pool always contributes at least one word.
std::string make_sentence(Rng& rng, const KeySentenceOptions& options,
                          std::span<const std::string_view> pool, double pool_rate) {
  const std::size_t span = options.max_words - options.min_words + 1;
  const std::size_t n = options.min_words + rng.below(span);
  std::vector<std::string_view> words(n);
  bool placed = pool.empty();
  for (auto& w : words) {
    if (!pool.empty() && rng.uniform() < pool_rate) {
      w = pool[rng.below(pool.size())];
      placed = true;
    } else {
      w = kNeutralWords[rng.below(kNeutralWords.size())];
    }
  }
  if (!placed) words[rng.below(n)] = pool[rng.below(pool.size())];
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  out += '.';
  return out;
}

}  // namespace

std::vector<KeySentenceDocument> make_key_sentence_corpus(const KeySentenceOptions& options) {
  if (options.min_words == 0 || options.max_words < options.min_words) {
    throw UsageError("make_key_sentence_corpus: invalid word-count range");
  }
  Rng rng(options.seed);
  std::vector<KeySentenceDocument> corpus;
  corpus.reserve(options.documents);
  const std::size_t n_sentences = options.distractors + 1;
  for (std::size_t d = 0; d < options.documents; ++d) {
    KeySentenceDocument doc;
    doc.label = rng.below(2);
    doc.key_index = rng.below(n_sentences);
    std::string body;
    for (std::size_t s = 0; s < n_sentences; ++s) {
      if (s > 0) body += ' ';
      if (s == doc.key_index) {
        body += make_sentence(rng, options, kClassWords[doc.label], options.class_word_rate);
      } else if (rng.uniform() < options.distractor_noise_rate) {
        body += make_sentence(rng, options, kClassWords[rng.below(2)], 0.0);
      } else {
        body += make_sentence(rng, options, {}, 0.0);
      }
    }
    doc.raw = text::RawDocument{"syn-" + std::to_string(d), std::move(body), doc.label == 0 ? 1 : 5};
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<text::TokenizedDocument> tokenize_key_sentence_corpus(
    const std::vector<KeySentenceDocument>& corpus, const text::Vocab& vocab,
    const text::DocumentLimits& limits) {
  std::vector<text::TokenizedDocument> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    out.push_back(text::prepare_document(doc.raw.id, doc.raw.text, vocab, limits, doc.label, 2));
  }
  return out;
}

}  // namespace gatedoc::synthetic
