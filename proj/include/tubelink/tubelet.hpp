#pragma once

#include <cstdint>
#include <vector>

#include "tubelink/detections.hpp"

namespace tubelink {

// A run of scored boxes over consecutive frames together with the
// aggregated classification vector for the whole run. Covers both
// short (single-segment) tubelets and the long tubelets produced by
// linking; a single-frame tubelet is legal (one-frame videos).
class Tubelet {
 public:
  Tubelet(int start_frame, std::vector<Detection> boxes, AggregationMode mode,
          std::uint32_t uid = 0);

  int start_frame() const { return start_frame_; }
  int end_frame() const {
    return start_frame_ + static_cast<int>(boxes_.size()) - 1;
  }
  int length() const { return static_cast<int>(boxes_.size()); }

  const std::vector<Detection>& boxes() const { return boxes_; }
  const Detection& front() const { return boxes_.front(); }
  const Detection& back() const { return boxes_.back(); }

  // Box at an absolute 1-based frame index within the span.
  const Detection& at_frame(int frame) const {
    return boxes_[static_cast<std::size_t>(frame - start_frame_)];
  }

  const ScoreVector& aggregated() const { return aggregated_; }

  // Creation order; the deterministic tie-break key for pool operations.
  std::uint32_t uid() const { return uid_; }

 private:
  int start_frame_;
  std::vector<Detection> boxes_;
  ScoreVector aggregated_;
  std::uint32_t uid_;
};

// Spatial overlap of two tubelets covering the same frame span: the
// minimum per-frame IoU over the span. Throws if the spans differ.
double tubelet_overlap(const Tubelet& a, const Tubelet& b);

// Greedy suppression among tubelets of one segment for one foreground
// class: repeatedly keep the highest-scoring remaining tubelet (ties go
// to the earlier list position) and drop every remaining tubelet whose
// overlap with it exceeds the threshold. Returns kept tubelets in keep
// order. All inputs must share one frame span.
std::vector<Tubelet> tubelet_nms(const std::vector<Tubelet>& tubelets,
                                 int class_id, double threshold);

}  // namespace tubelink
