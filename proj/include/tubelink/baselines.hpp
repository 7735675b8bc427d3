#pragma once

#include <utility>
#include <vector>

#include "tubelink/detections.hpp"

namespace tubelink {

// Greedy per-frame suppression for one foreground class: keep the
// highest-scoring remaining detection (ties keep the earlier index),
// drop remaining detections whose IoU with it exceeds the threshold.
// Returns kept indices in keep order. This is the static, per-frame
// baseline the video-level methods are measured against.
std::vector<int> frame_nms(const std::vector<Detection>& dets, int class_id,
                           double threshold);

// One class-scored box inside a frame list; src_index preserves the
// caller's identity for the box across rescoring.
struct ScoredBox {
  Box box;
  double score;
  int src_index = -1;
};

enum class SeqRescore { kAvg, kMax };

struct SeqNmsParams {
  double link_iou = 0.5;       // consecutive-frame association gate
  double suppress_iou = 0.4;   // per-frame suppression after rescoring
  SeqRescore rescore = SeqRescore::kAvg;
};

struct SeqPath {
  std::vector<std::pair<int, int>> nodes;  // (frame offset, box index)
  double total = 0.0;
};

// Highest-total-score path through boxes still alive, where consecutive
// path boxes must overlap with IoU >= link_iou in consecutive frames.
// Single-box paths are allowed. Ties prefer the path found at the
// earlier end frame, then the lower box index.
SeqPath seq_nms_best_path(const std::vector<std::vector<ScoredBox>>& frames,
                          const std::vector<std::vector<char>>& alive,
                          double link_iou);

// Association across neighboring frames: repeatedly select the best
// path, replace each member's score with the path average (or maximum),
// suppress overlapping boxes inside each member's frame, and continue
// until every box was either selected or suppressed. Returns surviving
// boxes per frame with their final scores, ordered by descending score.
std::vector<std::vector<ScoredBox>> seq_nms_link(
    std::vector<std::vector<ScoredBox>> frames, const SeqNmsParams& params);

}  // namespace tubelink
