#include "gatedoc/text/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "gatedoc/errors.hpp"

namespace gatedoc::text {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

Vocab::Vocab() : Vocab(std::vector<std::string>{}) {}

Vocab::Vocab(std::vector<std::string> tokens) {
  id_to_token_.reserve(kReservedCount + tokens.size());
  for (auto t : kReservedTokens) id_to_token_.emplace_back(t);
  for (auto& t : tokens) id_to_token_.push_back(std::move(t));
  for (TokenId i = 0; i < id_to_token_.size(); ++i) {
    if (!token_to_id_.emplace(id_to_token_[i], i).second) {
      throw DataError("duplicate vocabulary entry '" + id_to_token_[i] + "'");
    }
  }
}

TokenId Vocab::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocab::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

void Vocab::write(std::ostream& out) const {
  for (const auto& t : id_to_token_) out << t << '\n';
}

Vocab Vocab::read(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (lines.size() < kReservedCount) throw DataError("vocabulary is missing reserved tokens");
  for (std::size_t i = 0; i < kReservedCount; ++i) {
    if (lines[i] != kReservedTokens[i]) {
      throw DataError("vocabulary line " + std::to_string(i + 1) + " should be " +
                      std::string(kReservedTokens[i]));
    }
  }
  return Vocab(std::vector<std::string>(lines.begin() + kReservedCount, lines.end()));
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vocabulary " + path.string());
  write(out);
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vocabulary " + path.string());
  return read(in);
}

Vocab build_vocab(std::span<const std::string> texts, std::size_t min_freq, std::size_t max_size) {
  if (texts.empty()) throw UsageError("build_vocab: empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& text : texts) {
    for (auto& w : split_words(text)) ++counts[std::move(w)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [token, count] : counts) {
    // Reserved tokens contain brackets, which split_words never produces.
    if (count >= min_freq) ranked.emplace_back(token, count);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& r : ranked) tokens.push_back(std::move(r.first));
  return Vocab(std::move(tokens));
}

std::vector<TokenId> tokenize(std::string_view sentence, const Vocab& vocab) {
  std::vector<TokenId> ids;
  for (const auto& w : split_words(sentence)) ids.push_back(vocab.id(w));
  return ids;
}

}  // namespace gatedoc::text
