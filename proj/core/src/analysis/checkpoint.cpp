#include "gatedoc/analysis/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <vector>

#include "gatedoc/errors.hpp"

namespace gatedoc::analysis {
namespace {

using nlohmann::json;

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename U>
U get_le(const unsigned char* p) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(p[i]) << (8 * i);
  return value;
}

json model_config_json(const model::ModelConfig& c) {
  return json{{"vocab_size", c.vocab_size},
              {"n_classes", c.n_classes},
              {"max_length", c.max_length},
              {"token_dim", c.token_dim},
              {"hidden_dim", c.hidden_dim},
              {"n_heads", c.n_heads},
              {"n_layers", c.n_layers},
              {"class_hidden_dim", c.class_hidden_dim},
              {"class_dim", c.class_dim},
              {"gru_dim", c.gru_dim},
              {"output_hidden_dim", c.output_hidden_dim},
              {"gate_mode", std::string(model::to_string(c.gate_mode))},
              {"use_sentence_class_sim", c.variant.sentence_class_similarity},
              {"use_gate", c.variant.gate},
              {"use_document_class_sim", c.variant.document_class_similarity}};
}

model::ModelConfig model_config_from_json(const json& j) {
  model::ModelConfig c;
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.n_classes = j.at("n_classes").get<std::size_t>();
  c.max_length = j.at("max_length").get<std::size_t>();
  c.token_dim = j.at("token_dim").get<std::size_t>();
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.n_heads = j.at("n_heads").get<std::size_t>();
  c.n_layers = j.at("n_layers").get<std::size_t>();
  c.class_hidden_dim = j.at("class_hidden_dim").get<std::size_t>();
  c.class_dim = j.at("class_dim").get<std::size_t>();
  c.gru_dim = j.at("gru_dim").get<std::size_t>();
  c.output_hidden_dim = j.at("output_hidden_dim").get<std::size_t>();
  c.gate_mode = model::parse_gate_mode(j.at("gate_mode").get<std::string>());
  c.variant.sentence_class_similarity = j.at("use_sentence_class_sim").get<bool>();
  c.variant.gate = j.at("use_gate").get<bool>();
  c.variant.document_class_similarity = j.at("use_document_class_sim").get<bool>();
  return c;
}

std::uint32_t crc32_of(const unsigned char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (size > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const model::Model<float>& model,
                     const train::TrainConfig& config, const text::Vocab& vocab) {
  json header;
  header["format"] = "gatedoc-checkpoint";
  header["config"] = config.to_map();
  header["model"] = model_config_json(model.config());
  header["vocab"] = std::vector<std::string>(vocab.tokens().begin() + text::kReservedCount, vocab.tokens().end());
  json params = json::array();
  for (const auto& p : model.parameters()) params.push_back(json{{"name", p.name}, {"shape", p.shape}});
  header["parameters"] = std::move(params);
  const std::string header_text = header.dump();

  std::string arrays;
  arrays.reserve(model.parameters().scalar_count() * 4);
  for (const auto& p : model.parameters()) {
    for (float v : p.value) put_le(arrays, std::bit_cast<std::uint32_t>(v));
  }

  std::string out;
  out.append(kCheckpointMagic, 4);
  put_le(out, kCheckpointVersion);
  put_le(out, static_cast<std::uint64_t>(header_text.size()));
  out += header_text;
  out += arrays;
  put_le(out, crc32_of(reinterpret_cast<const unsigned char*>(arrays.data()), arrays.size()));

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write checkpoint " + tmp.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot read checkpoint " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  const std::string name = path.filename().string();

  if (bytes.size() < 16) throw CheckpointError(name + ": truncated (no header)");
  if (std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) throw CheckpointError(name + ": not a gatedoc checkpoint");
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kCheckpointVersion) {
    throw CheckpointError(name + ": unsupported version " + std::to_string(version));
  }
  const auto header_size = get_le<std::uint64_t>(bytes.data() + 8);
  if (header_size > bytes.size() - 16) throw CheckpointError(name + ": truncated header");
  const std::size_t array_begin = 16 + header_size;
  if (bytes.size() < array_begin + 4) throw CheckpointError(name + ": truncated (no checksum)");
  const std::size_t array_bytes = bytes.size() - array_begin - 4;

  json header;
  try {
    header = json::parse(bytes.begin() + 16, bytes.begin() + static_cast<std::ptrdiff_t>(array_begin));
  } catch (const json::exception& e) {
    throw CheckpointError(name + ": unreadable header: " + e.what());
  }

  try {
    std::size_t expected_bytes = 0;
    for (const auto& p : header.at("parameters")) {
      expected_bytes += ad::numel(p.at("shape").get<ad::Shape>()) * 4;
    }
    if (expected_bytes != array_bytes) {
      throw CheckpointError(name + (array_bytes < expected_bytes ? ": truncated; " : ": ") + "header shapes describe " + std::to_string(expected_bytes) +
                            " array bytes but the file holds " + std::to_string(array_bytes));
    }
    const auto stored_crc = get_le<std::uint32_t>(bytes.data() + array_begin + array_bytes);
    if (crc32_of(bytes.data() + array_begin, array_bytes) != stored_crc) {
      throw CheckpointError(name + ": checksum mismatch in parameter arrays");
    }

    train::TrainConfig config;
    for (const auto& [key, value] : header.at("config").items()) config.set(key, value.get<std::string>());

    ad::ParameterSet<float> params;
    std::size_t offset = array_begin;
    for (const auto& p : header.at("parameters")) {
      auto shape = p.at("shape").get<ad::Shape>();
      std::vector<float> values(ad::numel(shape));
      for (auto& v : values) {
        v = std::bit_cast<float>(get_le<std::uint32_t>(bytes.data() + offset));
        offset += 4;
      }
      params.add(p.at("name").get<std::string>(), std::move(shape), std::move(values));
    }
    text::Vocab vocab(header.at("vocab").get<std::vector<std::string>>());
    model::Model<float> model(model_config_from_json(header.at("model")), std::move(params));
    if (model.config().vocab_size != vocab.size()) {
      throw CheckpointError(name + ": vocabulary size disagrees with the model");
    }
    config.model = model.config();
    return Checkpoint{std::move(config), std::move(vocab), std::move(model)};
  } catch (const json::exception& e) {
    throw CheckpointError(name + ": malformed header: " + e.what());
  } catch (const UsageError& e) {
    throw CheckpointError(name + ": invalid stored config: " + e.what());
  } catch (const DimensionError& e) {
    throw CheckpointError(name + ": " + e.what());
  }
}

}  // namespace gatedoc::analysis
