#include "gatedoc/text/document.hpp"

#include "gatedoc/errors.hpp"

namespace gatedoc::text {

std::string_view to_string(LabelScheme scheme) {
  return scheme == LabelScheme::kTenScale ? "ten_scale" : "three_way";
}

LabelScheme parse_label_scheme(std::string_view name) {
  if (name == "ten_scale") return LabelScheme::kTenScale;
  if (name == "three_way") return LabelScheme::kThreeWay;
  throw UsageError("unknown label scheme '" + std::string(name) + "' (ten_scale|three_way)");
}

std::size_t class_count(LabelScheme scheme) { return scheme == LabelScheme::kTenScale ? 10 : 3; }

std::pair<int, int> score_range(LabelScheme scheme) {
  return scheme == LabelScheme::kTenScale ? std::pair{1, 10} : std::pair{1, 5};
}

std::size_t bucket_label(int score, LabelScheme scheme, std::string_view doc_id) {
  const auto [lo, hi] = score_range(scheme);
  if (score < lo || score > hi) {
    throw DataError("document '" + std::string(doc_id) + "': score " + std::to_string(score) +
                    " outside " + std::string(to_string(scheme)) + " range " + std::to_string(lo) +
                    ".." + std::to_string(hi));
  }
  if (scheme == LabelScheme::kTenScale) return static_cast<std::size_t>(score - 1);
  if (score < 3) return 0;
  if (score == 3) return 1;
  return 2;
}

TokenizedDocument assemble_document(std::span<const std::vector<TokenId>> sentences,
                                    std::span<const Span> spans, const DocumentLimits& limits) {
  if (limits.max_length < 3 || limits.max_sentences == 0) {
    throw UsageError("document limits must allow at least one token and one sentence");
  }
  if (!spans.empty() && spans.size() != sentences.size()) {
    throw InternalError("assemble_document: span count differs from sentence count");
  }
  TokenizedDocument doc;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].empty()) continue;
    if (doc.sentences.size() == limits.max_sentences) break;
    doc.sentences.push_back(sentences[i]);
    doc.sentence_spans.push_back(spans.empty() ? Span{} : spans[i]);
  }
  if (doc.sentences.empty()) throw DataError("document has no tokens");

  auto stream_length = [&] {
    std::size_t len = 1;
    for (const auto& s : doc.sentences) len += s.size() + 1;
    return len;
  };
  while (doc.sentences.size() > 1 && stream_length() > limits.max_length) {
    doc.sentences.pop_back();
    doc.sentence_spans.pop_back();
  }
  if (stream_length() > limits.max_length) {
    doc.sentences.front().resize(limits.max_length - 2);
    doc.truncated = true;
  }

  doc.token_stream.reserve(stream_length());
  doc.token_stream.push_back(kClsId);
  for (const auto& s : doc.sentences) {
    doc.token_stream.insert(doc.token_stream.end(), s.begin(), s.end());
    doc.sep_positions.push_back(doc.token_stream.size());
    doc.token_stream.push_back(kSepId);
  }
  return doc;
}

TokenizedDocument prepare_document(std::string_view id, std::string_view text, const Vocab& vocab,
                                   const DocumentLimits& limits, std::size_t label,
                                   std::size_t n_classes) {
  const auto segmented = segment_sentences(text);
  std::vector<std::vector<TokenId>> ids;
  std::vector<Span> spans;
  ids.reserve(segmented.size());
  for (const auto& s : segmented) {
    ids.push_back(tokenize(s.text, vocab));
    spans.push_back(s.span);
  }
  auto doc = assemble_document(ids, spans, limits);
  doc.id = std::string(id);
  doc.text = std::string(text);
  doc.label = label;
  doc.n_classes = n_classes;
  return doc;
}

}  // namespace gatedoc::text
