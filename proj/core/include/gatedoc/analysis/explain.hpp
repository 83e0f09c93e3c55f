#pragma once

#include <string_view>

#include "gatedoc/model/model.hpp"
#include "gatedoc/text/document.hpp"
#include "gatedoc/text/vocab.hpp"

namespace gatedoc::analysis {

/// Segments and tokenizes raw text, runs the model and returns the
/// prediction with per-sentence gate scores aligned to character spans.
/// Throws UsageError when the text has no tokens.
template <typename T>
model::Prediction explain(const model::Model<T>& model, const text::Vocab& vocab,
                          const text::DocumentLimits& limits, std::string_view raw_text,
                          std::string_view id = "input");

}  // namespace gatedoc::analysis
