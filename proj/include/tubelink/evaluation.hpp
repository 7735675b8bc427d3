#pragma once

#include <string>
#include <vector>

#include "tubelink/box.hpp"
#include "tubelink/ground_truth.hpp"

namespace tubelink {

// One class-scored detection prepared for matching; video is an index
// into the corpus video list.
struct EvalBox {
  int video = 0;
  int frame = 0;  // 1-based
  Box box;
  double score = 0.0;
};

// One ground-truth box of the class under evaluation. in_subset marks
// membership in the current evaluation subset: detections matched to an
// out-of-subset ground truth are ignored (neither hit nor false alarm),
// which is how per-subset scores avoid punishing correct detections of
// objects outside the subset.
struct GtEvalBox {
  int video = 0;
  int frame = 0;
  Box box;
  bool in_subset = true;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct ApResult {
  double ap = 0.0;  // NaN when the subset holds no ground truth
  int n_gt = 0;     // in-subset ground-truth count
  std::vector<PrPoint> pr;
};

// Average precision with greedy confidence-ordered matching: detections
// are processed by descending score (ties: video, frame, input order),
// each matching the highest-IoU unmatched ground truth of its frame at
// IoU >= match_iou; duplicates count as false positives. The summary is
// the exact area under the interpolated precision envelope over all
// observed recall points.
ApResult compute_ap(std::vector<EvalBox> dets, const std::vector<GtEvalBox>& gt,
                    double match_iou);

// Mean IoU between a track's box at `frame` and the same track's boxes in
// surrounding frames (frame +/- window, clipped to the track, the frame
// itself excluded). A box with no surviving neighbors scores 1.0 (an
// object seen for a single frame cannot exhibit motion). Low values mean
// fast motion relative to object size.
double motion_iou(const GroundTruthTrack& track, int frame, int window);

enum class SpeedBand { kSlow, kMedium, kFast };

// slow above slow_iou, fast below fast_iou, medium in between
// (inclusive at both boundaries).
SpeedBand speed_band(double miou, double slow_iou, double fast_iou);

// A finalized tubelet of one class prepared for track-level matching.
struct EvalTubelet {
  int video = 0;
  int start_frame = 1;
  std::vector<Box> boxes;
  double score = 0.0;
};

// Track-aware average precision. A tubelet counts as a true positive
// only if every one of its boxes matches a ground-truth box (IoU >=
// match_iou) and all those matches belong to one track; each track can
// be claimed by one tubelet (the highest-scoring one — tubelets are
// processed by descending score). Positives are whole tracks, so recall
// is measured against the track count. This is deliberately stricter
// than box-level AP: identity switches and partial coverage turn an
// otherwise well-scored tubelet into a false positive.
ApResult strict_tubelet_ap(
    std::vector<EvalTubelet> tubelets,
    const std::vector<std::pair<int, const GroundTruthTrack*>>& tracks,
    double match_iou);

struct EvalOptions {
  double match_iou = 0.5;
  int speed_window = 10;
  double speed_slow_iou = 0.9;
  double speed_fast_iou = 0.7;
};

struct ClassEval {
  int class_id = 0;
  ApResult overall;
  double ap_slow = 0.0;
  double ap_medium = 0.0;
  double ap_fast = 0.0;
  double ap_occluded = 0.0;
  double strict_ap = 0.0;  // NaN unless tubelets were supplied
};

struct EvalReport {
  std::vector<ClassEval> per_class;
  double map = 0.0;
  double map_slow = 0.0;
  double map_medium = 0.0;
  double map_fast = 0.0;
  double map_occluded = 0.0;
  double strict_map = 0.0;
};

// Corpus-level evaluation. dets_per_class[c] holds class c detections
// (index 0 unused); gt_by_video[v] the annotated tracks of video v.
// tubelets_per_class may be null when the method under evaluation does
// not produce tubelets. Classes absent from the ground truth are skipped
// in every mean. Subset membership:
//   speed:    each ground-truth box is banded by its motion IoU;
//   occluded: frames where more than half of the objects present are
//             flagged occluded, evaluated by restricting both sides to
//             those frames.
EvalReport evaluate_corpus(
    const std::vector<std::vector<EvalBox>>& dets_per_class,
    const std::vector<std::vector<GroundTruthTrack>>& gt_by_video,
    const std::vector<std::vector<EvalTubelet>>* tubelets_per_class,
    int num_classes, const EvalOptions& options);

// Mean that skips NaN entries; NaN when every entry is NaN.
double nan_mean(const std::vector<double>& values);

std::string format_report(const EvalReport& report);

// Per-class precision/recall points as tab-separated rows.
std::string format_pr_table(const EvalReport& report);

}  // namespace tubelink
