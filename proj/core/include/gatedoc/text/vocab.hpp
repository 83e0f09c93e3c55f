#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gatedoc::text {

using TokenId = std::size_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kClsId = 2;
inline constexpr TokenId kSepId = 3;
inline constexpr TokenId kStartId = 4;
inline constexpr std::size_t kReservedCount = 5;
inline constexpr std::string_view kReservedTokens[kReservedCount] = {"[PAD]", "[UNK]", "[CLS]",
                                                                     "[SEP]", "[S]"};

/// Lowercased word/punctuation tokens. Every ASCII punctuation character is
/// its own token; whitespace separates; bytes >= 0x80 stay inside words.
std::vector<std::string> split_words(std::string_view text);

class Vocab {
 public:
  /// Only the reserved tokens.
  Vocab();
  /// Reserved tokens followed by `tokens` in order (ids 5, 6, ...).
  explicit Vocab(std::vector<std::string> tokens);

  std::size_t size() const { return id_to_token_.size(); }
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const { return id_to_token_.at(id); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  /// One token per line, line number = id, reserved tokens first.
  void write(std::ostream& out) const;
  static Vocab read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Vocab load(const std::filesystem::path& path);

  bool operator==(const Vocab& other) const { return id_to_token_ == other.id_to_token_; }

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

/// Keeps tokens with count >= min_freq, at most max_size of them, ranked by
/// descending count then ascending token. Throws UsageError on an empty corpus.
Vocab build_vocab(std::span<const std::string> texts, std::size_t min_freq = 2,
                  std::size_t max_size = 20000);

std::vector<TokenId> tokenize(std::string_view sentence, const Vocab& vocab);

}  // namespace gatedoc::text
