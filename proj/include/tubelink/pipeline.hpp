#pragma once

#include <string>
#include <vector>

#include "tubelink/config.hpp"
#include "tubelink/detections.hpp"
#include "tubelink/evaluation.hpp"
#include "tubelink/ground_truth.hpp"

namespace tubelink {

// The processing variants the toolkit can run over one detection set.
// kFull is the production path: union proposals per segment, tubelet
// suppression, cross-segment linking, score propagation, and a final
// per-frame cleanup. The others are ablations and baselines.
enum class Method {
  kStatic,          // per-frame suppression only
  kSeqNms,          // neighboring-frame association baseline
  kTubeletsNoLink,  // short tubelets, aggregated scores, no suppression/linking
  kTubeletsTnms,    // short tubelets with tubelet suppression, no linking
  kUnionSeqNms,     // union proposals rescored, then neighboring-frame linking
  kFull,
};

std::string to_string(Method method);

// Method selected by a configuration: an explicit baseline wins; with
// baseline "none", segment_len 1 collapses to the static path (a single
// frame cannot form motion-consistent tubelets), otherwise the full
// pipeline runs.
Method method_for(const PipelineConfig& config);

struct OutBox {
  int frame = 0;
  Box box{0.0, 0.0, 1.0, 1.0};
  int label = 0;
  double score = 0.0;
  int tubelet_id = -1;
};

struct OutTubelet {
  int tubelet_id = 0;
  int label = 0;
  double score = 0.0;  // aggregated score of its own class
  int start_frame = 1;
  std::vector<Box> boxes;
};

struct VideoOutput {
  std::vector<OutBox> boxes;        // canonical (frame, label, rank) order
  std::vector<OutTubelet> tubelets; // empty for non-tubelet methods
};

// Runs one method over one video. num_classes must match the score
// vectors in the input.
VideoOutput run_video(Method method, const PipelineConfig& config,
                      const VideoDetections& video, int num_classes);

// Runs one method over every video, parallelized over videos with the
// requested worker count (0: one per core). Workers only partition work;
// outputs are identical for every worker count, and process_corpus with
// workers=1 is the serial reference the parallel path is tested against.
std::vector<VideoOutput> process_corpus(Method method,
                                        const PipelineConfig& config,
                                        const std::vector<VideoDetections>& videos,
                                        int num_classes, int workers);

// Bundles per-class evaluation inputs extracted from method outputs.
EvalReport evaluate_outputs(const std::vector<VideoOutput>& outputs,
                            const std::vector<std::vector<GroundTruthTrack>>& gt_by_video,
                            int num_classes, const EvalOptions& options);

struct AblationRow {
  Method method;
  double map = 0.0;
  double map_slow = 0.0;
  double map_medium = 0.0;
  double map_fast = 0.0;
  double map_occluded = 0.0;
};

// Runs the method ladder (static, seqnms, tubelets without and with
// suppression, union-seqnms, full) over one detection set.
std::vector<AblationRow> run_ablation(const PipelineConfig& config,
                                      const std::vector<VideoDetections>& videos,
                                      const std::vector<std::vector<GroundTruthTrack>>& gt_by_video,
                                      int num_classes);

// Tab-separated ablation table, percentages with two decimals.
std::string format_ablation_table(const std::vector<AblationRow>& rows);

}  // namespace tubelink
