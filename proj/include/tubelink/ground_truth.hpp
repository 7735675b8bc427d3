#pragma once

#include <vector>

#include "tubelink/box.hpp"

namespace tubelink {

// One annotated object track: a box per frame over one contiguous frame
// interval, plus per-frame occlusion flags.
struct GroundTruthTrack {
  int track_id = 0;
  int class_id = 0;
  int start_frame = 1;  // 1-based
  std::vector<Box> boxes;
  std::vector<bool> occluded;  // parallel to boxes; empty means none flagged

  int end_frame() const {
    return start_frame + static_cast<int>(boxes.size()) - 1;
  }
  int length() const { return static_cast<int>(boxes.size()); }
  bool alive(int frame) const {
    return frame >= start_frame && frame <= end_frame();
  }
  const Box& box_at(int frame) const {
    return boxes[static_cast<std::size_t>(frame - start_frame)];
  }
  bool occluded_at(int frame) const {
    return !occluded.empty() &&
           occluded[static_cast<std::size_t>(frame - start_frame)];
  }
};

}  // namespace tubelink
