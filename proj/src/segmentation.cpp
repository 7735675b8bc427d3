#include "tubelink/segmentation.hpp"

#include <algorithm>
#include <stdexcept>

namespace tubelink {

SegmentPlan plan_segments(int n_frames, int segment_length) {
  if (n_frames < 1) {
    throw std::invalid_argument("plan_segments: video must have >= 1 frame");
  }
  if (segment_length < 2) {
    throw std::invalid_argument("plan_segments: segment length must be >= 2");
  }

  SegmentPlan plan;
  plan.n_frames = n_frames;
  plan.segment_length = segment_length;

  const int stride = segment_length - 1;
  // ceil((n_frames - 1) / stride) segments; a one-frame video still gets
  // one (fully padded) segment.
  const int count = n_frames == 1 ? 1 : (n_frames - 1 + stride - 1) / stride;
  plan.segments.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    std::vector<int> frames(static_cast<std::size_t>(segment_length));
    const int first = m * stride + 1;
    for (int k = 0; k < segment_length; ++k) {
      frames[static_cast<std::size_t>(k)] = std::min(first + k, n_frames);
    }
    plan.segments.push_back(std::move(frames));
  }
  return plan;
}

}  // namespace tubelink
