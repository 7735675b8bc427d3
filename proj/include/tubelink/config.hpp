#pragma once

#include <cstdint>
#include <string>

#include "tubelink/baselines.hpp"
#include "tubelink/evaluation.hpp"
#include "tubelink/scores.hpp"
#include "tubelink/synth.hpp"

namespace tubelink {

enum class BaselineKind { kNone, kStatic, kSeqNms, kUnionSeqNms };

BaselineKind parse_baseline_kind(const std::string& name);
std::string to_string(BaselineKind kind);

// Every knob of the toolkit in one place. A run's resolved configuration
// is echoed verbatim into its output directory so any result can be
// reproduced from the echo alone.
struct PipelineConfig {
  int segment_len = 2;
  double tnms_thresh = 0.4;
  double link_thresh = 0.4;
  double pair_iou_thresh = 0.3;
  double nms_thresh = 0.4;
  AggregationMode agg = AggregationMode::kMeanMax;
  BaselineKind baseline = BaselineKind::kNone;
  double seqnms_link_iou = 0.5;
  SeqRescore seqnms_rescore = SeqRescore::kAvg;
  EvalOptions eval;
  int workers = 0;  // 0: one per core
  std::uint64_t seed = 42;
  int num_classes = 0;  // 0: inferred from the detection file
  CorpusSpec corpus;

  // Throws std::invalid_argument naming the offending key.
  void validate() const;
};

// Parses a flat "key = value" file ('#' starts a comment) on top of
// `base`. Unknown keys and malformed values raise errors naming the key.
PipelineConfig load_config_file(const std::string& path, PipelineConfig base);

// Applies one "key=value" assignment (same key set as the file).
void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value);

// Full sorted key=value snapshot of a configuration.
std::string resolved_config_text(const PipelineConfig& config);

std::string to_string(SeqRescore rescore);
SeqRescore parse_seq_rescore(const std::string& name);

}  // namespace tubelink
