#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <regex>
#include <string>
#include <vector>

#include "gatedoc/analysis/checkpoint.hpp"
#include "gatedoc/analysis/explain.hpp"
#include "gatedoc/analysis/heatmap.hpp"
#include "gatedoc/analysis/stats.hpp"
#include "gatedoc/errors.hpp"
#include "gatedoc/model/toy.hpp"
#include "gatedoc/random.hpp"

using namespace gatedoc;
using namespace gatedoc::analysis;
namespace fs = std::filesystem;

namespace {

model::ImportanceProfile profile_of(std::vector<double> scores) {
  model::ImportanceProfile p;
  p.scores = std::move(scores);
  for (std::size_t i = 0; i < p.scores.size(); ++i) p.spans.push_back({i * 4, i * 4 + 3});
  return p;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& bytes) { std::ofstream(p, std::ios::binary) << bytes; }

// Blue intensity of each sentence background, in order.
std::vector<int> sentence_intensities(const std::string& html) {
  std::vector<int> out;
  const std::regex bg("class=\"s\"[^>]*background:rgb\\((\\d+),(\\d+),(\\d+)\\)");
  for (auto it = std::sregex_iterator(html.begin(), html.end(), bg); it != std::sregex_iterator(); ++it) {
    out.push_back(255 - std::stoi((*it)[1]));
  }
  return out;
}

struct ToyCheckpoint {
  fs::path path;
  model::Model<float> model;
  train::TrainConfig config;
  text::Vocab vocab;
};

ToyCheckpoint toy_checkpoint(const std::string& name) {
  auto c = model::toy_config(6, 25, 3);
  auto m = model::Model<float>::initialize(c, 2);
  Rng rng(2);
  model::randomize(m.parameters(), rng);
  std::vector<std::string> words;
  for (int i = 0; i < 20; ++i) words.push_back("w" + std::to_string(i));
  train::TrainConfig tc;
  tc.model = c;
  tc.limits = {32, 8};
  const auto path = fs::temp_directory_path() / ("gatedoc-unit-" + name + ".gdoc");
  text::Vocab vocab(words);
  save_checkpoint(path, m, tc, vocab);
  return {path, m, tc, vocab};
}

}  // namespace

TEST_CASE("min-max normalization and its degenerate cases") {
  CHECK(min_max_normalize(std::vector<double>{0.2, 0.8}) == std::vector<double>{0.0, 1.0});
  CHECK(min_max_normalize(std::vector<double>{0.3, 0.3, 0.3}) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(min_max_normalize(std::vector<double>{0.7}) == std::vector<double>{0.0});
  const auto mid = min_max_normalize(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(mid[1] == 0.5);
}

TEST_CASE("stddev report examples") {
  const std::vector<model::ImportanceProfile> flat = {profile_of({0.3, 0.3, 0.3})};
  CHECK(stddev_report(flat).stddevs == std::vector<double>{0.0});
  const std::vector<model::ImportanceProfile> two = {profile_of({0.2, 0.8})};
  const auto r = stddev_report(two);
  CHECK(r.stddevs == std::vector<double>{0.5});
  CHECK(r.fraction_above == 1.0);
  CHECK(population_stddev(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}) == 2.0);
}

TEST_CASE("stddev report is sorted, bounded and counts the threshold strictly") {
  Rng rng(31);
  std::vector<model::ImportanceProfile> profiles;
  for (int d = 0; d < 200; ++d) {
    std::vector<double> s(1 + rng.below(8));
    for (auto& v : s) v = rng.uniform();
    profiles.push_back(profile_of(s));
  }
  const auto r = stddev_report(profiles);
  CHECK(r.documents == 200);
  CHECK(std::is_sorted(r.stddevs.begin(), r.stddevs.end()));
  CHECK(r.stddevs.front() >= 0.0);
  CHECK(r.stddevs.back() <= 0.5);
  const auto above = std::count_if(r.stddevs.begin(), r.stddevs.end(), [](double v) { return v > 0.2; });
  CHECK(r.fraction_above == static_cast<double>(above) / 200.0);
}

TEST_CASE("stddev report rejects empty input and ungated profiles") {
  CHECK_THROWS_AS(stddev_report({}), UsageError);
  auto p = profile_of({0.5, 0.5});
  p.gated = false;
  const std::vector<model::ImportanceProfile> ungated = {p};
  CHECK_THROWS_AS(stddev_report(ungated), UsageError);
}

TEST_CASE("error histogram buckets by ordinal distance") {
  auto pred = [](std::size_t predicted, std::size_t gold) {
    model::Prediction p;
    p.predicted = predicted;
    p.gold = gold;
    return p;
  };
  const std::vector<model::Prediction> correct = {pred(3, 3), pred(0, 0)};
  const auto none = error_histogram(correct);
  CHECK(none.counts.empty());
  CHECK_FALSE(none.within_one.has_value());
  CHECK_FALSE(none.within_two.has_value());

  const std::vector<model::Prediction> mixed = {pred(5, 6), pred(6, 6), pred(2, 4), pred(9, 1), pred(3, 2)};
  const auto h = error_histogram(mixed);
  CHECK(h.counts.at(1) == 2);
  CHECK(h.counts.at(2) == 1);
  CHECK(h.counts.at(8) == 1);
  CHECK_FALSE(h.counts.contains(0));
  CHECK(h.wrong == 4);
  CHECK(h.total == 5);
  CHECK(*h.within_one == 0.5);
  CHECK(*h.within_two == 0.75);
}

TEST_CASE("welch t-test reference values, antisymmetry and range") {
  const std::vector<double> a = {1, 2, 3, 4, 5}, b = {6, 7, 8, 9, 10};
  const auto r = welch_ttest(a, b);
  CHECK(r.t == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(0.001052825793366539).epsilon(1e-9));
  CHECK(r.degrees_of_freedom == doctest::Approx(8.0));
  const auto swapped = welch_ttest(b, a);
  CHECK(swapped.t == -r.t);
  CHECK(swapped.p == r.p);
  const auto same = welch_ttest(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(welch_ttest(one, a), UsageError);

  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(2 + rng.below(6)), y(2 + rng.below(6));
    for (auto& v : x) v = rng.uniform(0.4, 0.9);
    for (auto& v : y) v = rng.uniform(0.4, 0.9);
    const auto w = welch_ttest(x, y);
    CHECK(w.p >= 0.0);
    CHECK(w.p <= 1.0);
  }
}

TEST_CASE("heat colors run from white to full blue") {
  CHECK(heat_color(0.0).r == 255);
  CHECK(heat_color(0.0).b == 255);
  CHECK(heat_color(1.0).r == 0);
  CHECK(heat_color(1.0).g == 0);
  CHECK(heat_color(1.0).b == 255);
  CHECK(heat_color(0.5).r == 128);
  CHECK(html_escape("<a href=\"x\">&'") == "&lt;a href=&quot;x&quot;&gt;&amp;&#39;");
}

TEST_CASE("heatmap endpoints, degenerate scores and sentence text") {
  const std::string text = "One. Two. Six.";
  model::ImportanceProfile p;
  p.scores = {0.1, 0.9};
  p.spans = {{0, 4}, {5, 9}};
  auto html = render_heatmap(p, text);
  CHECK(sentence_intensities(html) == std::vector<int>{0, 255});
  CHECK(count_of(html, "One.") == 1);
  CHECK(count_of(html, "Two.") == 1);
  CHECK(html.find("http://") == html.find("http://www.w3.org/2000/svg"));
  CHECK(html.find("<script") == std::string::npos);

  p.scores = {0.4, 0.4, 0.4};
  p.spans = {{0, 4}, {5, 9}, {10, 14}};
  html = render_heatmap(p, text);
  CHECK(sentence_intensities(html) == std::vector<int>{0, 0, 0});

  const std::string risky = "a<b & \"c\".";
  model::ImportanceProfile q;
  q.scores = {0.5};
  q.spans = {{0, risky.size()}};
  CHECK(render_heatmap(q, risky).find("a&lt;b &amp; &quot;c&quot;.") != std::string::npos);
  CHECK_THROWS_AS(render_heatmap(model::ImportanceProfile{}, text), UsageError);
}

TEST_CASE("brightest heatmap sentence is the highest-scoring one") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(2 + rng.below(7));
    for (auto& v : s) v = rng.uniform();
    const auto p = profile_of(s);
    std::string text(s.size() * 4, 'x');
    const auto intensities = sentence_intensities(render_heatmap(p, text));
    REQUIRE(intensities.size() == s.size());
    const auto top = std::max_element(s.begin(), s.end()) - s.begin();
    CHECK(intensities[top] == 255);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[i] < s[j]) CHECK(intensities[i] <= intensities[j]);
      }
    }
  }
}

TEST_CASE("checkpoint round trip is bit exact") {
  const auto toy = toy_checkpoint("roundtrip");
  const auto back = load_checkpoint(toy.path);
  CHECK(back.config == toy.config);
  CHECK(back.vocab == toy.vocab);
  for (std::size_t i = 0; i < toy.model.parameters().size(); ++i) {
    CHECK(back.model.parameters()[i].name == toy.model.parameters()[i].name);
    CHECK(back.model.parameters()[i].value == toy.model.parameters()[i].value);
  }
  const auto bytes = slurp(toy.path);
  CHECK(bytes.substr(0, 4) == "GDOC");
}

TEST_CASE("damaged checkpoints are refused with the cause") {
  const auto toy = toy_checkpoint("damaged");
  const auto good = slurp(toy.path);
  const auto bad = fs::temp_directory_path() / "gatedoc-unit-bad.gdoc";
  auto refusal = [&](const std::string& bytes) -> std::string {
    spit(bad, bytes);
    try {
      load_checkpoint(bad);
    } catch (const CheckpointError& e) {
      return e.what();
    }
    return "";
  };

  auto flipped = good;
  flipped[flipped.size() - 40] ^= 0x10;
  CHECK(refusal(flipped).find("checksum") != std::string::npos);

  CHECK(refusal(good.substr(0, good.size() - 7)).find("trunc") != std::string::npos);

  auto magic = good;
  magic[0] = 'X';
  CHECK(refusal(magic).find("not a gatedoc checkpoint") != std::string::npos);

  auto version = good;
  version[4] = 9;
  CHECK(refusal(version).find("version") != std::string::npos);

  // Edit a shape in the header without changing its length.
  auto shape = good;
  const auto at = shape.find("\"shape\":[25,6]");
  REQUIRE(at != std::string::npos);
  shape.replace(at, 14, "\"shape\":[25,5]");
  CHECK_FALSE(refusal(shape).empty());

  CHECK_THROWS_AS(load_checkpoint("/nonexistent/x.gdoc"), IoError);
}

TEST_CASE("explain returns the forward pass's gate scores") {
  const auto toy = toy_checkpoint("explain");
  const std::string text = "W1 w2 w3. W4 w5! W6?";
  const auto p = explain(toy.model, toy.vocab, toy.config.limits, text);
  REQUIRE(p.importance.scores.size() == 3);
  CHECK(text.substr(p.importance.spans[1].begin, p.importance.spans[1].size()) == "W4 w5!");

  const auto doc = text::prepare_document("input", text, toy.vocab, toy.config.limits, 0, 0);
  ad::Graph<float> g;
  const auto trace = toy.model.forward(g, doc);
  CHECK(p.importance.scores == trace.gate_scores);

  CHECK(explain(toy.model, toy.vocab, toy.config.limits, "Only one").importance.scores.size() == 1);
  CHECK_THROWS_AS(explain(toy.model, toy.vocab, toy.config.limits, "   "), UsageError);

  auto zero = toy.model;
  for (auto& prm : zero.parameters()) std::fill(prm.value.begin(), prm.value.end(), 0.0f);
  const auto z = explain(zero, toy.vocab, toy.config.limits, text);
  CHECK(z.importance.scores == std::vector<double>(3, 0.5));
}
