#include "tubelink/scores.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubelink {

AggregationMode parse_aggregation_mode(const std::string& name) {
  if (name == "mean") return AggregationMode::kMean;
  if (name == "max") return AggregationMode::kMax;
  if (name == "mean_max") return AggregationMode::kMeanMax;
  throw std::invalid_argument("unknown aggregation mode: " + name);
}

std::string to_string(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::kMean: return "mean";
    case AggregationMode::kMax: return "max";
    case AggregationMode::kMeanMax: return "mean_max";
  }
  throw std::invalid_argument("unknown aggregation mode value");
}

ScoreVector::ScoreVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument(
        "score vector needs background plus at least one class");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("score entries must lie in [0, 1]");
    }
  }
}

double ScoreVector::max_foreground() const {
  double best = 0.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    best = std::max(best, values_[i]);
  }
  return best;
}

ScoreVector aggregate_scores(std::span<const ScoreVector> vectors,
                             AggregationMode mode) {
  if (vectors.empty()) {
    throw std::invalid_argument("aggregate_scores requires at least one vector");
  }
  const std::size_t n = vectors[0].size();
  for (const ScoreVector& v : vectors) {
    if (v.size() != n) {
      throw std::invalid_argument("aggregate_scores: mismatched vector lengths");
    }
  }

  std::vector<double> mean(n, 0.0), mx(n, 0.0);
  for (const ScoreVector& v : vectors) {
    for (std::size_t i = 0; i < n; ++i) {
      mean[i] += v[i];
      mx[i] = std::max(mx[i], v[i]);
    }
  }
  const double inv = 1.0 / static_cast<double>(vectors.size());
  for (double& m : mean) m *= inv;

  std::vector<double> out(n);
  switch (mode) {
    case AggregationMode::kMean:
      out = mean;
      break;
    case AggregationMode::kMax:
      out = mx;
      break;
    case AggregationMode::kMeanMax:
      for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (mean[i] + mx[i]);
      break;
  }
  return ScoreVector(std::move(out));
}

}  // namespace tubelink
