#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "gatedoc/train/config.hpp"

namespace gatedoc::cli {

/// Where labeled documents come from: one file split 80/10/10, or explicit
/// split files.
struct DataArgs {
  std::filesystem::path data;
  std::filesystem::path train;
  std::filesystem::path dev;
  std::filesystem::path test;
};

struct Context {
  train::TrainConfig config;
  std::ostream& out;  // human/JSON summary stream
  std::ostream& log;  // progress and warnings
};

int run_train(const Context& ctx, const DataArgs& data, const std::filesystem::path& checkpoint,
              const std::filesystem::path& metrics);
int run_eval(const Context& ctx, const std::filesystem::path& checkpoint, const std::filesystem::path& data,
             const std::filesystem::path& report);
int run_predict(const Context& ctx, const std::filesystem::path& checkpoint, const std::filesystem::path& data,
                const std::optional<std::string>& text, const std::filesystem::path& report);
int run_explain(const Context& ctx, const std::filesystem::path& checkpoint, const std::string& text,
                const std::filesystem::path& html);
int run_ablate(const Context& ctx, const DataArgs& data, std::size_t repeats,
               const std::filesystem::path& report);
int run_analyze(const Context& ctx, const std::filesystem::path& checkpoint, const std::filesystem::path& data,
                const std::filesystem::path& report);
int run_gradcheck(const Context& ctx, std::size_t sentences, std::size_t width,
                  const std::filesystem::path& report);
int run_synth(const Context& ctx, std::size_t documents, double distractor_noise,
              const std::filesystem::path& output);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gatedoc::cli
