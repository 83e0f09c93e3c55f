#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gatedoc/random.hpp"
#include "gatedoc/text/document.hpp"
#include "gatedoc/text/vocab.hpp"

namespace gatedoc::text {

struct RawDocument {
  std::string id;
  std::string text;
  int score = 0;
};

struct RawCorpus {
  std::vector<RawDocument> documents;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Parses JSON lines with "id" (string), "text" (string), "score" (integer).
/// Malformed lines, empty texts and out-of-scale scores are skipped and
/// counted. Throws IoError when the file cannot be read.
RawCorpus read_jsonl(const std::filesystem::path& path, LabelScheme scheme);

struct Dataset {
  std::vector<TokenizedDocument> documents;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Tokenizes an already-read corpus; documents with no tokens are skipped.
Dataset tokenize_corpus(const RawCorpus& corpus, LabelScheme scheme, const Vocab& vocab,
                        const DocumentLimits& limits);

/// read_jsonl + tokenize_corpus. Throws DataError when nothing valid remains.
Dataset load_dataset(const std::filesystem::path& path, LabelScheme scheme, const Vocab& vocab,
                     const DocumentLimits& limits);

void write_jsonl(const std::filesystem::path& path, std::span<const RawDocument> documents);

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
};

template <typename D>
struct Splits {
  std::vector<D> train;
  std::vector<D> dev;
  std::vector<D> test;
};

/// Seeded shuffle, then contiguous train/dev/test cuts (remainder to test).
template <typename D>
Splits<D> split_dataset(std::vector<D> items, std::uint64_t seed, SplitRatios ratios = {}) {
  Rng rng(seed);
  rng.shuffle(std::span<D>(items));
  const auto n = items.size();
  const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * static_cast<double>(n)));
  const auto n_dev = std::min(
      n - n_train, static_cast<std::size_t>(std::floor(ratios.dev * static_cast<double>(n))));
  Splits<D> out;
  auto it = std::make_move_iterator(items.begin());
  out.train.assign(it, it + n_train);
  out.dev.assign(it + n_train, it + n_train + n_dev);
  out.test.assign(it + n_train + n_dev, std::make_move_iterator(items.end()));
  return out;
}

/// Seeded permutation of [0, count) cut into batches of `batch_size` (last
/// batch may be short).
std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size,
                                                   std::uint64_t seed);

}  // namespace gatedoc::text
