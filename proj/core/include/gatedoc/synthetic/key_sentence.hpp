#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gatedoc/text/dataset.hpp"

namespace gatedoc::synthetic {

/// Two-class corpus in which exactly one sentence per document carries the
/// label and every other sentence is drawn from a label-neutral pool.
struct KeySentenceOptions {
  std::size_t documents = 2000;
  std::size_t distractors = 5;
  std::size_t min_words = 4;
  std::size_t max_words = 7;
  /// Chance that a key-sentence word comes from its class pool rather than the
  /// neutral pool; at least one class word is always placed.
  double class_word_rate = 0.6;
  /// Chance that a distractor carries one class word of a uniformly random
  /// class. Such words are independent of the label, so distractors stay
  /// label-neutral while looking locally like evidence.
  double distractor_noise_rate = 0.0;
  std::uint64_t seed = 1;
};

struct KeySentenceDocument {
  text::RawDocument raw;  // score 1 for class 0, 5 for class 1
  std::size_t label = 0;
  std::size_t key_index = 0;  // position of the key sentence in the document
};

std::vector<KeySentenceDocument> make_key_sentence_corpus(const KeySentenceOptions& options);

/// Tokenizes a generated corpus as a 2-class problem (labels taken from the
/// generator, not from a rating scheme).
std::vector<text::TokenizedDocument> tokenize_key_sentence_corpus(
    const std::vector<KeySentenceDocument>& corpus, const text::Vocab& vocab,
    const text::DocumentLimits& limits);

}  // namespace gatedoc::synthetic
