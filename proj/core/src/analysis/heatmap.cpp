#include "gatedoc/analysis/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gatedoc/analysis/stats.hpp"
#include "gatedoc/errors.hpp"

namespace gatedoc::analysis {

Rgb heat_color(double normalized) {
  const double n = std::clamp(normalized, 0.0, 1.0);
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - n)));
  return {fade, fade, 255};
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string css_color(const Rgb& c) {
  return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) + ")";
}

}  // namespace

std::string render_heatmap(const model::ImportanceProfile& profile, std::string_view text,
                           std::string_view title) {
  if (profile.scores.empty()) throw UsageError("render_heatmap: empty importance profile");
  if (profile.spans.size() != profile.scores.size()) {
    throw InternalError("render_heatmap: span count differs from score count");
  }
  const auto normalized = min_max_normalize(profile.scores);

  std::string html;
  html += "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>";
  html += html_escape(title);
  html += "</title>\n<style>\n"
          "body{font-family:sans-serif;max-width:52em;margin:2em auto;line-height:1.8}\n"
          ".s{padding:0.1em 0.25em;border-radius:3px}\n"
          ".score{font-size:0.7em;color:#555;margin:0 0.4em 0 0.15em}\n"
          "</style></head><body>\n<h1>";
  html += html_escape(title);
  html += "</h1>\n";
  if (!profile.document_id.empty()) html += "<p>document: " + html_escape(profile.document_id) + "</p>\n";
  if (profile.predicted) {
    html += "<p>predicted class: " + std::to_string(*profile.predicted);
    if (profile.gold) html += ", gold class: " + std::to_string(*profile.gold);
    html += "</p>\n";
  }
  if (!profile.gated) html += "<p>model has no sentence gate; scores are placeholders</p>\n";

  // Bars: height = raw score, fill = normalized intensity.
  const int bar = 24, height = 80;
  const auto width = static_cast<int>(profile.scores.size()) * bar;
  html += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
          std::to_string(height) + "\">\n";
  for (std::size_t i = 0; i < profile.scores.size(); ++i) {
    const int h = static_cast<int>(std::lround(profile.scores[i] * height));
    html += "<rect x=\"" + std::to_string(static_cast<int>(i) * bar + 2) + "\" y=\"" +
            std::to_string(height - h) + "\" width=\"" + std::to_string(bar - 4) + "\" height=\"" +
            std::to_string(h) + "\" fill=\"" + css_color(heat_color(normalized[i])) +
            "\" stroke=\"#336\"><title>sentence " + std::to_string(i + 1) + ": " +
            fixed(profile.scores[i], 4) + "</title></rect>\n";
  }
  html += "</svg>\n<p>\n";

  for (std::size_t i = 0; i < profile.scores.size(); ++i) {
    const auto& span = profile.spans[i];
    if (span.end > text.size() || span.begin > span.end) {
      throw InternalError("render_heatmap: sentence span outside the text");
    }
    const auto color = heat_color(normalized[i]);
    const char* ink = normalized[i] > 0.5 ? "#fff" : "#000";
    html += "<span class=\"s\" data-score=\"" + fixed(profile.scores[i], 6) + "\" style=\"background:" +
            css_color(color) + ";color:" + ink + "\">";
    html += html_escape(text.substr(span.begin, span.size()));
    html += "</span><span class=\"score\">" + fixed(profile.scores[i], 3) + "</span>\n";
  }
  html += "</p>\n</body></html>\n";
  return html;
}

}  // namespace gatedoc::analysis
