#pragma once

#include <vector>

namespace tubelink {

// Frame index lists for overlapping segments of one video. Consecutive
// segments share exactly one frame (the last frame of one is the first
// frame of the next); that shared frame is where tubelets are linked.
// When the video length does not fill the final segment, its index list
// is padded by repeating the last frame.
struct SegmentPlan {
  int n_frames = 0;
  int segment_length = 0;
  std::vector<std::vector<int>> segments;  // 1-based frame indices

  // First and last distinct frame of a segment (padding collapsed).
  int span_first(std::size_t seg) const { return segments[seg].front(); }
  int span_last(std::size_t seg) const { return segments[seg].back(); }
};

// Decompose a video of n_frames into segments of segment_length with
// stride segment_length - 1. segment_length must be >= 2 (a segment of
// one frame cannot express motion; callers treat that case as a purely
// per-frame pipeline and never build a plan for it).
SegmentPlan plan_segments(int n_frames, int segment_length);

}  // namespace tubelink
