#include "gatedoc/text/dataset.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>

#include "gatedoc/errors.hpp"
#include "gatedoc/random.hpp"

namespace gatedoc::text {

RawCorpus read_jsonl(const std::filesystem::path& path, LabelScheme scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read dataset " + path.string());
  RawCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  auto skip = [&](const std::string& why) {
    ++corpus.skipped;
    corpus.warnings.push_back(path.filename().string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      skip("malformed JSON");
      continue;
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text") || !j.contains("score") ||
        !j["id"].is_string() || !j["text"].is_string() || !j["score"].is_number_integer()) {
      skip("expected string id, string text, integer score");
      continue;
    }
    RawDocument doc{j["id"].get<std::string>(), j["text"].get<std::string>(), j["score"].get<int>()};
    if (doc.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      skip("empty text in '" + doc.id + "'");
      continue;
    }
    try {
      bucket_label(doc.score, scheme, doc.id);
    } catch (const DataError& e) {
      skip(e.what());
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Dataset tokenize_corpus(const RawCorpus& corpus, LabelScheme scheme, const Vocab& vocab,
                        const DocumentLimits& limits) {
  Dataset out;
  out.skipped = corpus.skipped;
  out.warnings = corpus.warnings;
  const std::size_t n_classes = class_count(scheme);
  for (const auto& raw : corpus.documents) {
    try {
      out.documents.push_back(prepare_document(raw.id, raw.text, vocab, limits,
                                               bucket_label(raw.score, scheme, raw.id), n_classes));
    } catch (const DataError& e) {
      ++out.skipped;
      out.warnings.push_back("'" + raw.id + "': " + e.what());
    }
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, LabelScheme scheme, const Vocab& vocab,
                     const DocumentLimits& limits) {
  auto out = tokenize_corpus(read_jsonl(path, scheme), scheme, vocab, limits);
  if (out.documents.empty()) throw DataError("no valid documents in " + path.string());
  return out;
}

void write_jsonl(const std::filesystem::path& path, std::span<const RawDocument> documents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& d : documents) {
    nlohmann::json j;
    j["id"] = d.id;
    j["text"] = d.text;
    j["score"] = d.score;
    out << j.dump() << '\n';
  }
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size,
                                                   std::uint64_t seed) {
  if (batch_size == 0) throw UsageError("batch size must be at least 1");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < count; i += batch_size) {
    batches.emplace_back(order.begin() + i, order.begin() + std::min(count, i + batch_size));
  }
  return batches;
}

}  // namespace gatedoc::text
