#include "gatedoc/analysis/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "gatedoc/errors.hpp"

namespace gatedoc::analysis {

std::vector<double> min_max_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

double population_stddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

StddevReport stddev_report(std::span<const model::ImportanceProfile> profiles, double threshold) {
  if (profiles.empty()) throw UsageError("stddev_report: no documents");
  StddevReport report;
  report.threshold = threshold;
  report.documents = profiles.size();
  std::size_t above = 0;
  for (const auto& p : profiles) {
    if (!p.gated) throw UsageError("stddev_report: model has no sentence gate");
    const double sd = population_stddev(min_max_normalize(p.scores));
    report.stddevs.push_back(sd);
    if (sd > threshold) ++above;
  }
  std::sort(report.stddevs.begin(), report.stddevs.end());
  report.fraction_above = static_cast<double>(above) / static_cast<double>(profiles.size());
  return report;
}

ScoreDiffHistogram error_histogram(std::span<const model::Prediction> predictions) {
  ScoreDiffHistogram h;
  std::size_t one = 0, two = 0;
  for (const auto& p : predictions) {
    if (!p.gold) continue;
    ++h.total;
    if (p.correct()) continue;
    const std::size_t diff = p.predicted > *p.gold ? p.predicted - *p.gold : *p.gold - p.predicted;
    ++h.counts[diff];
    ++h.wrong;
    if (diff == 1) ++one;
    if (diff <= 2) ++two;
  }
  if (h.wrong > 0) {
    h.within_one = static_cast<double>(one) / static_cast<double>(h.wrong);
    h.within_two = static_cast<double>(two) / static_cast<double>(h.wrong);
  }
  return h;
}

WelchResult welch_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw UsageError("welch_ttest: each sample needs at least 2 values");
  auto moments = [](std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / static_cast<double>(x.size() - 1)};
  };
  const auto [mean_a, var_a] = moments(a);
  const auto [mean_b, var_b] = moments(b);
  const double se_a = var_a / static_cast<double>(a.size());
  const double se_b = var_b / static_cast<double>(b.size());
  const double se = se_a + se_b;

  WelchResult r;
  if (se == 0.0) {
    if (mean_a == mean_b) return r;
    r.t = mean_a > mean_b ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.degrees_of_freedom = static_cast<double>(a.size() + b.size() - 2);
    return r;
  }
  r.t = (mean_a - mean_b) / std::sqrt(se);
  r.degrees_of_freedom = se * se / (se_a * se_a / static_cast<double>(a.size() - 1) +
                                    se_b * se_b / static_cast<double>(b.size() - 1));
  if (r.t == 0.0) return r;
  const boost::math::students_t dist(r.degrees_of_freedom);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

}  // namespace gatedoc::analysis
