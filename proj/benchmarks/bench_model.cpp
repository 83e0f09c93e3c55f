#include <benchmark/benchmark.h>

#include <vector>

#include "gatedoc/autodiff/ops.hpp"
#include "gatedoc/model/toy.hpp"
#include "gatedoc/random.hpp"
#include "gatedoc/train/config.hpp"
#include "gatedoc/train/trainer.hpp"

using namespace gatedoc;

namespace {

// Desk-scale model on a document shaped like the synthetic task (6 sentences
// of about 7 tokens).
struct DeskCase {
  model::Model<float> model;
  text::TokenizedDocument doc;

  DeskCase()
      : model(model::Model<float>::initialize(train::resolve_model_config(train::TrainConfig::desk(), 80, 2), 1)) {
    Rng rng(1);
    std::vector<std::vector<text::TokenId>> sentences(6);
    std::vector<text::Span> spans;
    for (std::size_t s = 0; s < 6; ++s) {
      for (int t = 0; t < 7; ++t) sentences[s].push_back(text::kReservedCount + rng.below(75));
      spans.push_back({s * 40, s * 40 + 39});
    }
    doc = text::assemble_document(sentences, spans, {});
    doc.n_classes = 2;
  }
};

void BM_ForwardDocument(benchmark::State& state) {
  DeskCase c;
  for (auto _ : state) {
    ad::Graph<float> g;
    auto trace = c.model.forward(g, c.doc);
    benchmark::DoNotOptimize(trace.probabilities().values().data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForwardDocument);

void BM_ForwardBackwardDocument(benchmark::State& state) {
  DeskCase c;
  ad::Gradients<float> grads(c.model.parameters());
  for (auto _ : state) {
    ad::Graph<float> g;
    g.backward(c.model.loss(c.model.forward(g, c.doc), 1));
    g.accumulate_parameter_grads(grads);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForwardBackwardDocument);

void BM_MatMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<float> a(n * n), b(n * n);
  for (auto& v : a) v = static_cast<float>(rng.uniform(-1, 1));
  for (auto& v : b) v = static_cast<float>(rng.uniform(-1, 1));
  for (auto _ : state) {
    ad::Graph<float> g;
    auto c = ad::matmul(g.constant({n, n}, a), g.constant({n, n}, b));
    benchmark::DoNotOptimize(c.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_MatMul)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
BENCHMARK_MAIN();
