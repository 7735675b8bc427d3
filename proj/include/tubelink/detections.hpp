#pragma once

#include <vector>

#include "tubelink/box.hpp"
#include "tubelink/scores.hpp"

namespace tubelink {

// One detector output: a box plus its full classification vector.
struct Detection {
  Box box;
  ScoreVector scores;
};

struct FrameDetections {
  int frame = 0;  // 1-based frame index
  std::vector<Detection> dets;
};

// All detections of one video: entry f-1 holds frame f. Frames with no
// detections are present as empty entries so indexing stays positional.
using VideoDetections = std::vector<FrameDetections>;

}  // namespace tubelink
