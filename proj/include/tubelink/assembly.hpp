#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tubelink/detections.hpp"
#include "tubelink/ground_truth.hpp"
#include "tubelink/tubelet.hpp"

namespace tubelink {

// Spatial extent of an object over a short frame span: the bounding box
// of its per-frame boxes (the 2D simplification of a space-time cuboid).
struct Cuboid {
  Box box;
  int start_frame;
  int end_frame;
};

// Reference to one detection inside a frame window.
struct BoxRef {
  int frame;      // 1-based
  int det_index;  // position within that frame's detection list

  bool operator==(const BoxRef&) const = default;
};

// A chain of matched boxes covering every frame of a segment, plus the
// bounding cuboid of its members.
struct ChainProposal {
  Cuboid cuboid;
  std::vector<BoxRef> members;  // one per frame, in frame order
};

struct UnionProposals {
  int start_frame = 0;
  int end_frame = 0;
  std::vector<ChainProposal> chains;
  // Boxes not claimed by any full-span chain, in (frame, index) order.
  // They are ineligible for tubelet linking but still reach the final
  // per-frame outputs with their raw scores.
  std::vector<BoxRef> leftovers;
};

// Greedy matching of boxes between consecutive frames of one segment:
// candidate pairs with IoU >= pair_iou_threshold are accepted in order of
// descending IoU, one-to-one per frame pair (ties prefer the earlier box
// in each frame). Accepted pairs are stitched into chains; only chains
// covering the full span become proposals. The segment must hold its
// distinct frames in consecutive ascending order.
UnionProposals pair_union_proposals(std::span<const FrameDetections> segment,
                                    double pair_iou_threshold);

// Turn each full-span chain into a short tubelet carrying its member
// detections; uids are assigned from next_uid in chain order.
std::vector<Tubelet> assemble_short_tubelets(
    const UnionProposals& proposals, std::span<const FrameDetections> segment,
    AggregationMode mode, std::uint32_t& next_uid);

// Perturbation applied by the ground-truth cuboid oracle, expressed as
// fractions of each box's own size.
struct CuboidJitter {
  double translate_sigma = 0.0;
  double scale_sigma = 0.0;
};

// Idealized proposal source for experiments: one cuboid per ground-truth
// track alive over the whole [start_frame, end_frame] span, bounding its
// true boxes, optionally jittered. Deterministic in (tracks, span, seed).
std::vector<Cuboid> oracle_cuboids(std::span<const GroundTruthTrack> tracks,
                                   int start_frame, int end_frame,
                                   const CuboidJitter& jitter,
                                   std::uint64_t seed);

}  // namespace tubelink
