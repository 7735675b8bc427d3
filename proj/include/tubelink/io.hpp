#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tubelink/detections.hpp"
#include "tubelink/ground_truth.hpp"
#include "tubelink/synth.hpp"

namespace tubelink {

// Detector outputs for a whole corpus, aligned by position with
// video_ids (which are sorted ascending).
struct LoadedDetections {
  std::vector<std::string> video_ids;
  std::vector<VideoDetections> videos;
  int num_classes = 0;
};

// Reads detection records, one JSON object per line:
//   {"video_id": "...", "frame": 3, "bbox": [x1, y1, x2, y2],
//    "scores": [bg, c1, ...]}        full classification vector, or
//   {..., "label": 2, "score": 0.9}  single-class form; expanded into a
//                                    vector with every other entry zero.
// An optional "gt_track_id" field is accepted and ignored here. Frames
// are 1-based; malformed rows raise errors naming the offending line.
// num_classes_hint widens the class count when only single-class rows
// are present (otherwise the maximum label seen decides).
LoadedDetections load_detections_jsonl(const std::string& path,
                                       int num_classes_hint = 0);

struct LoadedGroundTruth {
  std::vector<std::string> video_ids;
  std::vector<std::vector<GroundTruthTrack>> tracks;
};

// Reads ground-truth records:
//   {"video_id": "...", "frame": 3, "bbox": [...], "track_id": 1,
//    "class_id": 2, "occluded": false}
// Rows of one track must cover a contiguous frame interval; a missing
// frame raises an error naming the track and the gap.
LoadedGroundTruth load_ground_truth_jsonl(const std::string& path);

// One class-labelled output row; the form written by the pipeline and
// accepted back by the evaluation command.
struct ScoredRecord {
  std::string video_id;
  int frame = 0;
  Box box{0.0, 0.0, 1.0, 1.0};
  int label = 0;
  double score = 0.0;
  int tubelet_id = -1;  // -1: not part of a tubelet
};

std::vector<ScoredRecord> load_scored_detections_jsonl(const std::string& path);

struct TubeletRecord {
  std::string video_id;
  int tubelet_id = 0;
  int label = 0;
  double score = 0.0;
  int start_frame = 1;
  std::vector<Box> boxes;
};

void write_detections_jsonl(const std::string& path, const Corpus& corpus);
void write_ground_truth_jsonl(const std::string& path, const Corpus& corpus);
void write_scored_jsonl(const std::string& path,
                        const std::vector<ScoredRecord>& records);
void write_tubelets_jsonl(const std::string& path,
                          const std::vector<TubeletRecord>& records);

void write_text_file(const std::string& path, const std::string& content);

// Joins detections with optional ground truth into one positional view:
// the union of both video id sets, sorted; videos missing on either side
// get empty entries. Detection frame counts are extended to cover the
// ground-truth span of the same video.
struct AlignedCorpus {
  std::vector<std::string> video_ids;
  std::vector<VideoDetections> videos;
  std::vector<std::vector<GroundTruthTrack>> gt;  // empty when absent
  int num_classes = 0;
  bool has_gt = false;
};

AlignedCorpus align_corpus(const LoadedDetections& dets,
                           const std::optional<LoadedGroundTruth>& gt);

}  // namespace tubelink
