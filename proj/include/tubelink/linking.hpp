#pragma once

#include <vector>

#include "tubelink/segmentation.hpp"
#include "tubelink/tubelet.hpp"

namespace tubelink {

struct LinkResult {
  std::vector<Tubelet> finalized;  // in finalize order
  int merges = 0;                  // number of pairwise merges performed
};

// Link short tubelets from overlapping segments into long tubelets.
//
// All short tubelets enter one pool ordered by descending aggregated
// foreground score (ties: earlier start frame, then earlier creation).
// Repeatedly the best tubelet is popped and compared against pool
// tubelets adjacent in time, i.e. ending on its first frame or starting
// on its last frame. If the best adjacent candidate overlaps with IoU of
// at least link_iou_threshold at the shared frame (highest IoU wins,
// ties: earlier pool position, i.e. higher score, then earlier start,
// then earlier creation), the two are merged: the
// shared frame keeps the box whose class_id score is higher (ties keep
// the popped tubelet's box), scores are re-aggregated over the merged
// run, and the merged tubelet re-enters the pool. Otherwise the popped
// tubelet is finalized and never reconsidered. A chain may therefore end
// up split into several finalized tubelets when no adjacent pair clears
// the threshold.
//
// per_segment[i] must hold tubelets whose span equals the distinct span
// of plan.segments[i]. The result is independent of the order of the
// tubelets inside each per_segment list.
LinkResult link_short_tubelets(const SegmentPlan& plan,
                               const std::vector<std::vector<Tubelet>>& per_segment,
                               int class_id, double link_iou_threshold,
                               AggregationMode mode);

struct EmittedBox {
  int frame;
  Box box;
  ScoreVector scores;  // the owning tubelet's aggregated vector
  int tubelet_index;   // position in the finalized list
};

// Expand finalized tubelets into per-frame boxes, each carrying the
// tubelet-level aggregated scores (every box inherits its tubelet's
// quality). Ordered by (tubelet_index, frame).
std::vector<EmittedBox> emit_frame_detections(const std::vector<Tubelet>& tubelets);

}  // namespace tubelink
