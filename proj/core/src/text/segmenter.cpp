#include "gatedoc/text/segmenter.hpp"

#include <algorithm>
#include <cctype>

namespace gatedoc::text {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool starts_sentence(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'';
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// The whitespace-delimited word ending at `end` (exclusive), with leading
// opening punctuation removed.
std::string_view word_before(std::string_view text, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < end && (text[begin] == '(' || text[begin] == '"' || text[begin] == '\'')) ++begin;
  return text.substr(begin, end - begin);
}

bool is_abbreviation(std::string_view word) {
  const std::string w = lower(word);
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), w) !=
         std::end(kAbbreviations);
}

}  // namespace

std::vector<Sentence> segment_sentences(std::string_view text) {
  std::vector<Sentence> out;
  const std::size_t n = text.size();
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    if (begin < end) out.push_back({std::string(text.substr(begin, end - begin)), {begin, end}});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t first_term = i;
    std::size_t j = i;
    while (j < n && is_terminator(text[j])) ++j;
    while (j < n && is_closer(text[j])) ++j;
    // j is one past the candidate sentence end. Requiring whitespace here is
    // what protects decimals such as "3.50".
    bool boundary = j < n && is_space(text[j]);
    if (boundary) {
      std::size_t k = j;
      while (k < n && is_space(text[k])) ++k;
      boundary = k < n && starts_sentence(text[k]);
    }
    if (boundary && j == first_term + 1 && text[first_term] == '.') {
      if (is_abbreviation(word_before(text, first_term + 1))) boundary = false;
    }
    if (boundary) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  emit(start, n);
  return out;
}

}  // namespace gatedoc::text
