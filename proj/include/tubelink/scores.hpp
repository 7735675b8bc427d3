#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tubelink {

// How per-frame classification vectors are combined into a single vector
// for a whole tubelet. The mean/max blend is the production default: the
// mean term rewards consistent evidence while the max term rescues frames
// where the detector momentarily lost the object.
enum class AggregationMode { kMean, kMax, kMeanMax };

AggregationMode parse_aggregation_mode(const std::string& name);
std::string to_string(AggregationMode mode);

// (C+1)-way classification distribution for one box; index 0 is the
// background class, indices 1..C are foreground categories. Entries must
// lie in [0, 1]; they need not sum to one (detectors are not calibrated).
class ScoreVector {
 public:
  explicit ScoreVector(std::vector<double> values);

  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  int num_classes() const { return static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const { return values_; }

  // Largest entry over foreground classes only.
  double max_foreground() const;

  bool operator==(const ScoreVector&) const = default;

 private:
  std::vector<double> values_;
};

// Elementwise aggregation over one or more vectors of equal length.
ScoreVector aggregate_scores(std::span<const ScoreVector> vectors,
                             AggregationMode mode);

}  // namespace tubelink
