#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gatedoc/model/model.hpp"

namespace gatedoc::analysis {

/// Background for a normalized score in [0,1]: white at 0, pure blue at 1.
struct Rgb {
  int r = 255, g = 255, b = 255;
};
Rgb heat_color(double normalized);

std::string html_escape(std::string_view text);

/// Self-contained HTML page: each sentence of `text` (located by the
/// profile's spans) on a blue background proportional to its min-max
/// normalized gate score, with the raw score beside it, plus an inline SVG
/// bar strip of the scores. No external resources.
std::string render_heatmap(const model::ImportanceProfile& profile, std::string_view text,
                           std::string_view title = "Sentence importance");

}  // namespace gatedoc::analysis
