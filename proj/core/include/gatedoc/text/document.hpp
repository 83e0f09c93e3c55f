#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gatedoc/text/segmenter.hpp"
#include "gatedoc/text/vocab.hpp"

namespace gatedoc::text {

struct DocumentLimits {
  std::size_t max_length = 512;  // whole stream, specials included
  std::size_t max_sentences = 50;

  bool operator==(const DocumentLimits&) const = default;
};

enum class LabelScheme { kTenScale, kThreeWay };

std::string_view to_string(LabelScheme scheme);
LabelScheme parse_label_scheme(std::string_view name);
std::size_t class_count(LabelScheme scheme);
/// Inclusive score range of the scheme's rating scale.
std::pair<int, int> score_range(LabelScheme scheme);

/// ten_scale: class = score - 1. three_way: <3 negative (0), 3 neutral (1),
/// >3 positive (2). Throws DataError (mentioning `doc_id`) outside the scale.
std::size_t bucket_label(int score, LabelScheme scheme, std::string_view doc_id = {});

struct TokenizedDocument {
  std::string id;
  std::string text;
  std::vector<std::vector<TokenId>> sentences;
  std::vector<TokenId> token_stream;
  std::vector<std::size_t> sep_positions;
  std::vector<Span> sentence_spans;
  std::size_t label = 0;
  std::size_t n_classes = 0;
  /// True when the last kept sentence lost tokens to the length limit.
  bool truncated = false;

  std::size_t sentence_count() const { return sentences.size(); }
};

/// Lays out [CLS] s_1 [SEP] s_2 [SEP] ... Empty sentences are skipped. Extra
/// sentences past max_sentences are dropped, then trailing sentences are
/// dropped until the stream fits; a lone remaining sentence that is still too
/// long is cut so that its [SEP] is the last position. Throws DataError when
/// no sentence has tokens.
TokenizedDocument assemble_document(std::span<const std::vector<TokenId>> sentences,
                                    std::span<const Span> spans, const DocumentLimits& limits);

/// Segment + tokenize + assemble. `label`/`n_classes` are copied through.
TokenizedDocument prepare_document(std::string_view id, std::string_view text, const Vocab& vocab,
                                   const DocumentLimits& limits, std::size_t label,
                                   std::size_t n_classes);

}  // namespace gatedoc::text
