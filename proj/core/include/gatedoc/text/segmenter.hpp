#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gatedoc::text {

/// Half-open byte range [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct Sentence {
  std::string text;
  Span span;
};

/// Abbreviations whose trailing period never ends a sentence (compared
/// case-insensitively against the whitespace-delimited word).
inline constexpr std::string_view kAbbreviations[] = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.", "e.g.", "i.e.", "etc.", "u.s.",
};

/// Rule-based sentence splitter.
///
/// A sentence ends after a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets) when followed by whitespace and then an uppercase letter, a quote
/// or a digit. A period is never a boundary inside a number ("3.50") or at the
/// end of a listed abbreviation. Spans are trimmed of surrounding whitespace,
/// ordered and disjoint; text without a terminator is one sentence.
std::vector<Sentence> segment_sentences(std::string_view text);

}  // namespace gatedoc::text
