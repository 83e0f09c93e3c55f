#include "gatedoc/analysis/explain.hpp"

#include "gatedoc/errors.hpp"

namespace gatedoc::analysis {

template <typename T>
model::Prediction explain(const model::Model<T>& model, const text::Vocab& vocab,
                          const text::DocumentLimits& limits, std::string_view raw_text, std::string_view id) {
  text::TokenizedDocument doc;
  try {
    doc = text::prepare_document(id, raw_text, vocab, limits, 0, 0);
  } catch (const DataError&) {
    throw UsageError("explain: text contains no sentences");
  }
  return model.predict(doc);
}

template model::Prediction explain<float>(const model::Model<float>&, const text::Vocab&,
                                          const text::DocumentLimits&, std::string_view, std::string_view);
template model::Prediction explain<double>(const model::Model<double>&, const text::Vocab&,
                                           const text::DocumentLimits&, std::string_view, std::string_view);

}  // namespace gatedoc::analysis
