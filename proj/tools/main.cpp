#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gatedoc/errors.hpp"

namespace {

constexpr int kUsageExit = 1;
constexpr int kDataExit = 2;
constexpr int kInternalExit = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace gatedoc;
  namespace fs = std::filesystem;

  CLI::App app{"Gated sentence-importance document classifier"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key = value file with # comments");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // Every training-config key is also a flag; the config file fills the same
  // options, and explicit flags win over the file.
  std::string preset = "desk";
  app.add_option("--preset", preset, "base hyperparameters before overrides")
      ->check(CLI::IsMember({"desk", "paper"}));
  std::map<std::string, std::string> overrides;
  for (const auto& key : train::TrainConfig::keys()) {
    app.add_option("--" + key, overrides[key], train::TrainConfig::describe(key));
  }

  cli::DataArgs data;
  fs::path checkpoint, out;
  std::optional<std::string> text;
  std::size_t repeats = 1, sentences = 2, width = 4, documents = 2000;
  double noise = 0.0;

  auto add_data = [&](CLI::App* cmd) {
    cmd->add_option("--data", data.data, "labeled JSONL, split 80/10/10 by seed");
    cmd->add_option("--train", data.train, "training split JSONL");
    cmd->add_option("--dev", data.dev, "development split JSONL");
    cmd->add_option("--test", data.test, "test split JSONL");
  };

  auto* train_cmd = app.add_subcommand("train", "train a model and save a checkpoint");
  add_data(train_cmd);
  train_cmd->add_option("--checkpoint", checkpoint, "checkpoint to write");
  train_cmd->add_option("--out", out, "per-epoch metrics (JSON lines)");

  auto* eval_cmd = app.add_subcommand("eval", "accuracy of a checkpoint on labeled data");
  eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint to load")->required();
  eval_cmd->add_option("--data", data.data, "labeled JSONL")->required();
  eval_cmd->add_option("--out", out, "report JSON");

  auto* predict_cmd = app.add_subcommand("predict", "class probabilities and gate scores");
  predict_cmd->add_option("--checkpoint", checkpoint, "checkpoint to load")->required();
  predict_cmd->add_option("--data", data.data, "JSONL documents");
  predict_cmd->add_option("--text", text, "raw document text");
  predict_cmd->add_option("--out", out, "predictions JSON");

  auto* explain_cmd = app.add_subcommand("explain", "sentence importance heatmap for a text");
  explain_cmd->add_option("--checkpoint", checkpoint, "checkpoint to load")->required();
  explain_cmd->add_option("--text", text, "raw document text")->required();
  explain_cmd->add_option("--out", out, "heatmap HTML");

  auto* ablate_cmd = app.add_subcommand("ablate", "whole model versus single-component removals");
  add_data(ablate_cmd);
  ablate_cmd->add_option("--repeats", repeats, "seeds per variant (t-tests need >= 2)")->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--out", out, "table JSON");

  auto* analyze_cmd = app.add_subcommand("analyze", "importance spread and error-distance histogram");
  analyze_cmd->add_option("--checkpoint", checkpoint, "checkpoint to load")->required();
  analyze_cmd->add_option("--data", data.data, "labeled JSONL")->required();
  analyze_cmd->add_option("--out", out, "report JSON");

  auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference check of a small random model");
  grad_cmd->add_option("--sentences", sentences, "sentences in the random document");
  grad_cmd->add_option("--width", width, "every layer width");
  grad_cmd->add_option("--out", out, "report JSON");

  auto* synth_cmd = app.add_subcommand("synth", "write the synthetic key-sentence corpus");
  synth_cmd->add_option("--documents", documents, "number of documents");
  synth_cmd->add_option("--noise", noise, "chance a distractor holds one random-class word")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--out", out, "JSONL file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    train::TrainConfig config =
        preset == "paper" ? train::TrainConfig::paper() : train::TrainConfig::desk();
    for (const auto& key : train::TrainConfig::keys()) {
      if (app.count("--" + key) > 0) config.set(key, overrides[key]);
    }
    const cli::Context ctx{config, std::cout, std::cerr};

    if (*train_cmd) return cli::run_train(ctx, data, checkpoint, out);
    if (*eval_cmd) return cli::run_eval(ctx, checkpoint, data.data, out);
    if (*predict_cmd) return cli::run_predict(ctx, checkpoint, data.data, text, out);
    if (*explain_cmd) return cli::run_explain(ctx, checkpoint, *text, out);
    if (*ablate_cmd) return cli::run_ablate(ctx, data, repeats, out);
    if (*analyze_cmd) return cli::run_analyze(ctx, checkpoint, data.data, out);
    if (*grad_cmd) return cli::run_gradcheck(ctx, sentences, width, out);
    if (*synth_cmd) return cli::run_synth(ctx, documents, noise, out);
    return kUsageExit;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageExit;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalExit;
  }
}
