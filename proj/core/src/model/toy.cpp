#include "gatedoc/model/toy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gatedoc::model {

ModelConfig toy_config(std::size_t width, std::size_t vocab_size, std::size_t n_classes) {
  ModelConfig c;
  c.vocab_size = vocab_size;
  c.n_classes = n_classes;
  c.max_length = 32;
  c.token_dim = width;
  c.hidden_dim = width;
  c.n_heads = width % 2 == 0 ? 2 : 1;
  c.n_layers = 2;
  c.class_hidden_dim = width;
  c.class_dim = width;
  c.gru_dim = width;
  c.output_hidden_dim = width;
  return c;
}

text::TokenizedDocument random_document(Rng& rng, std::size_t sentences, std::size_t vocab_size,
                                        std::size_t n_classes) {
  std::vector<std::vector<text::TokenId>> ids(sentences);
  std::vector<text::Span> spans(sentences);
  const auto first = static_cast<text::TokenId>(text::kReservedCount);
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t n = 1 + rng.below(4);
    for (std::size_t t = 0; t < n; ++t) {
      ids[s].push_back(first + static_cast<text::TokenId>(rng.below(vocab_size - text::kReservedCount)));
    }
    spans[s] = {s * 10, s * 10 + 9};
  }
  auto doc = text::assemble_document(ids, spans, {32, 8});
  doc.id = "toy";
  doc.n_classes = n_classes;
  doc.label = rng.below(n_classes);
  return doc;
}

template <typename T>
void randomize(ParameterSet<T>& params, Rng& rng, double scale) {
  for (auto& p : params) {
    for (auto& v : p.value) v = static_cast<T>(rng.uniform(-scale, scale));
  }
}

template void randomize<float>(ParameterSet<float>&, Rng&, double);
template void randomize<double>(ParameterSet<double>&, Rng&, double);

ad::GradCheckResult model_grad_check(const ModelConfig& config, const text::TokenizedDocument& doc,
                                     std::uint64_t seed, double eps) {
  auto model = Model<double>::initialize(config, seed);
  // The graph keeps pointers into the model's parameters, so the model must
  // outlive the graph that grad_check builds and differentiates.
  std::optional<Model<double>> view;
  const auto build = [&](Graph<double>& g, const ParameterSet<double>& params) {
    view.emplace(config, params);
    return view->loss(view->forward(g, doc), doc.label);
  };
  return ad::grad_check(build, model.parameters(), eps);
}

}  // namespace gatedoc::model
