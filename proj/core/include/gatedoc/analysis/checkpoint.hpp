#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "gatedoc/model/model.hpp"
#include "gatedoc/text/vocab.hpp"
#include "gatedoc/train/config.hpp"

namespace gatedoc::analysis {

inline constexpr char kCheckpointMagic[4] = {'G', 'D', 'O', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout:
///   "GDOC" | u32 version | u64 header_bytes | header (JSON, UTF-8)
///   | f32 arrays, little endian, in header order | u32 CRC-32 of the array bytes
/// The header carries the training config, the model config, the vocabulary
/// and one {name, shape} entry per parameter.
struct Checkpoint {
  train::TrainConfig config;
  text::Vocab vocab;
  model::Model<float> model;
};

/// Writes to a temporary sibling and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const model::Model<float>& model,
                     const train::TrainConfig& config, const text::Vocab& vocab);

/// Throws CheckpointError naming the cause (magic, version, truncation,
/// shape/byte mismatch, checksum).
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gatedoc::analysis
