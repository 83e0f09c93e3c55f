#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gatedoc/model/model.hpp"

namespace gatedoc::analysis {

/// Maps min -> 0 and max -> 1. All-equal input (including a single value)
/// maps to all zeros.
std::vector<double> min_max_normalize(std::span<const double> values);

double population_stddev(std::span<const double> values);

struct StddevReport {
  std::vector<double> stddevs;  // ascending
  double threshold = 0.2;
  double fraction_above = 0.0;  // share of documents with stddev > threshold
  std::size_t documents = 0;
};

/// Population stddev of min-max-normalized gate scores per document. Throws
/// UsageError for an empty input or an ungated profile.
StddevReport stddev_report(std::span<const model::ImportanceProfile> profiles, double threshold = 0.2);

struct ScoreDiffHistogram {
  std::map<std::size_t, std::size_t> counts;  // |predicted - gold| -> wrong predictions
  std::size_t wrong = 0;
  std::size_t total = 0;
  /// Shares of wrong predictions off by exactly one / by at most two; empty
  /// when every prediction is correct.
  std::optional<double> within_one;
  std::optional<double> within_two;
};

/// Buckets wrong predictions by the ordinal distance between class indices
/// (score points on ten_scale).
ScoreDiffHistogram error_histogram(std::span<const model::Prediction> predictions);

struct WelchResult {
  double t = 0.0;
  double p = 1.0;
  double degrees_of_freedom = 0.0;
};

/// Two-sided Welch unequal-variance t-test. Each sample needs >= 2 values.
WelchResult welch_ttest(std::span<const double> a, std::span<const double> b);

}  // namespace gatedoc::analysis
