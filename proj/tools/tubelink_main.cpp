// Command-line front end: corpus synthesis, pipeline runs, the ablation
// ladder, and standalone evaluation of detection files.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tubelink/config.hpp"
#include "tubelink/io.hpp"
#include "tubelink/pipeline.hpp"
#include "tubelink/synth.hpp"

namespace {

using namespace tubelink;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int segment_len = 0;
  double tnms_thresh = 0.0;
  double link_thresh = 0.0;
  double pair_iou_thresh = 0.0;
  double nms_thresh = 0.0;
  double match_iou = 0.0;
  std::string agg;
  std::string baseline;
  std::uint64_t seed = 0;
  int workers = -1;

  CLI::Option* segment_len_opt = nullptr;
  CLI::Option* tnms_opt = nullptr;
  CLI::Option* link_opt = nullptr;
  CLI::Option* pair_opt = nullptr;
  CLI::Option* nms_opt = nullptr;
  CLI::Option* match_opt = nullptr;
  CLI::Option* agg_opt = nullptr;
  CLI::Option* baseline_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "configuration file (key = value lines)");
  cmd->add_option("--out-dir", args.out_dir, "output directory")->required();
  args.segment_len_opt =
      cmd->add_option("--segment-len", args.segment_len, "segment length");
  args.tnms_opt = cmd->add_option("--tnms-thresh", args.tnms_thresh,
                                  "tubelet suppression IoU threshold");
  args.link_opt = cmd->add_option("--link-thresh", args.link_thresh,
                                  "tubelet linking IoU threshold");
  args.pair_opt = cmd->add_option("--pair-iou-thresh", args.pair_iou_thresh,
                                  "pairwise proposal matching threshold");
  args.nms_opt = cmd->add_option("--nms-thresh", args.nms_thresh,
                                 "per-frame suppression threshold");
  args.match_opt = cmd->add_option("--match-iou", args.match_iou,
                                   "evaluation matching threshold");
  args.agg_opt = cmd->add_option("--agg", args.agg,
                                 "score aggregation: mean, max, mean_max");
  args.baseline_opt =
      cmd->add_option("--baseline", args.baseline,
                      "baseline: none, static, seqnms, union-seqnms");
  args.seed_opt = cmd->add_option("--seed", args.seed, "corpus seed");
  args.workers_opt =
      cmd->add_option("--workers", args.workers, "worker threads (0: all cores)");
}

// Defaults, then the configuration file, then explicit flags.
PipelineConfig resolve_config(const CommonArgs& args) {
  PipelineConfig config;
  if (!args.config_path.empty()) {
    config = load_config_file(args.config_path, config);
  }
  if (args.segment_len_opt->count() > 0) config.segment_len = args.segment_len;
  if (args.tnms_opt->count() > 0) config.tnms_thresh = args.tnms_thresh;
  if (args.link_opt->count() > 0) config.link_thresh = args.link_thresh;
  if (args.pair_opt->count() > 0) config.pair_iou_thresh = args.pair_iou_thresh;
  if (args.nms_opt->count() > 0) config.nms_thresh = args.nms_thresh;
  if (args.match_opt->count() > 0) config.eval.match_iou = args.match_iou;
  if (args.agg_opt->count() > 0) config.agg = parse_aggregation_mode(args.agg);
  if (args.baseline_opt->count() > 0) {
    config.baseline = parse_baseline_kind(args.baseline);
  }
  if (args.seed_opt->count() > 0) config.seed = args.seed;
  if (args.workers_opt->count() > 0) config.workers = args.workers;
  config.validate();
  return config;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

void write_config_echo(const CommonArgs& args, const PipelineConfig& config) {
  write_text_file(out_path(args, "config.txt"), resolved_config_text(config));
}

int cmd_synth(const CommonArgs& args) {
  PipelineConfig config = resolve_config(args);
  CorpusSpec spec = config.corpus;
  spec.seed = config.seed;
  const Corpus corpus = generate_corpus(spec, config.workers);

  write_detections_jsonl(out_path(args, "detections.jsonl"), corpus);
  write_ground_truth_jsonl(out_path(args, "ground_truth.jsonl"), corpus);
  write_config_echo(args, config);

  std::size_t boxes = 0;
  for (const SyntheticVideo& video : corpus.videos) {
    for (const FrameDetections& frame : video.detections) {
      boxes += frame.dets.size();
    }
  }
  std::cout << "synthesized " << corpus.videos.size() << " videos, " << boxes
            << " detections -> " << args.out_dir << "\n";
  return 0;
}

struct RunInputs {
  AlignedCorpus corpus;
};

RunInputs load_inputs(const std::string& detections_path,
                      const std::string& gt_path, int num_classes_hint) {
  const LoadedDetections dets =
      load_detections_jsonl(detections_path, num_classes_hint);
  std::optional<LoadedGroundTruth> gt;
  if (!gt_path.empty()) gt = load_ground_truth_jsonl(gt_path);
  RunInputs inputs{align_corpus(dets, gt)};
  if (inputs.corpus.num_classes < 1) {
    throw std::runtime_error("no foreground classes in " + detections_path);
  }
  return inputs;
}

int cmd_run(const CommonArgs& args, const std::string& detections_path,
            const std::string& gt_path) {
  const PipelineConfig config = resolve_config(args);
  const RunInputs inputs = load_inputs(detections_path, gt_path, config.num_classes);
  const AlignedCorpus& corpus = inputs.corpus;

  const Method method = method_for(config);
  const std::vector<VideoOutput> outputs = process_corpus(
      method, config, corpus.videos, corpus.num_classes, config.workers);

  std::vector<ScoredRecord> records;
  std::vector<TubeletRecord> tubelets;
  for (std::size_t v = 0; v < outputs.size(); ++v) {
    for (const OutBox& box : outputs[v].boxes) {
      records.push_back({corpus.video_ids[v], box.frame, box.box, box.label,
                         box.score, box.tubelet_id});
    }
    for (const OutTubelet& t : outputs[v].tubelets) {
      tubelets.push_back({corpus.video_ids[v], t.tubelet_id, t.label, t.score,
                          t.start_frame, t.boxes});
    }
  }
  write_scored_jsonl(out_path(args, "detections.jsonl"), records);
  write_tubelets_jsonl(out_path(args, "tubelets.jsonl"), tubelets);
  write_config_echo(args, config);

  std::cout << "method " << to_string(method) << ": " << records.size()
            << " boxes, " << tubelets.size() << " tubelets\n";

  if (corpus.has_gt) {
    const EvalReport report = evaluate_outputs(outputs, corpus.gt,
                                               corpus.num_classes, config.eval);
    std::string text = "method " + to_string(method) + "\n\n";
    text += format_report(report);
    write_text_file(out_path(args, "report.txt"), text);
    write_text_file(out_path(args, "pr.tsv"), format_pr_table(report));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mAP %.2f\n", 100.0 * report.map);
    std::cout << buf;
  }
  return 0;
}

int cmd_ablate(const CommonArgs& args, const std::string& detections_path,
               const std::string& gt_path) {
  const PipelineConfig config = resolve_config(args);
  const RunInputs inputs = load_inputs(detections_path, gt_path, config.num_classes);
  const AlignedCorpus& corpus = inputs.corpus;
  if (!corpus.has_gt) throw std::runtime_error("ablation requires ground truth");

  const std::vector<AblationRow> rows =
      run_ablation(config, corpus.videos, corpus.gt, corpus.num_classes);
  const std::string table = format_ablation_table(rows);
  write_text_file(out_path(args, "ablation.tsv"), table);
  write_config_echo(args, config);
  std::cout << table;
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& detections_path,
             const std::string& gt_path) {
  const PipelineConfig config = resolve_config(args);
  const std::vector<ScoredRecord> records =
      load_scored_detections_jsonl(detections_path);
  const LoadedGroundTruth gt = load_ground_truth_jsonl(gt_path);

  // Positional video view over the union of both id sets.
  std::vector<std::string> ids = gt.video_ids;
  for (const ScoredRecord& r : records) ids.push_back(r.video_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    index[ids[i]] = static_cast<int>(i);
  }

  int num_classes = config.num_classes;
  for (const ScoredRecord& r : records) num_classes = std::max(num_classes, r.label);
  std::vector<std::vector<GroundTruthTrack>> gt_by_video(ids.size());
  for (std::size_t i = 0; i < gt.video_ids.size(); ++i) {
    for (const GroundTruthTrack& track : gt.tracks[i]) {
      num_classes = std::max(num_classes, track.class_id);
    }
    gt_by_video[static_cast<std::size_t>(index.at(gt.video_ids[i]))] = gt.tracks[i];
  }
  if (num_classes < 1) throw std::runtime_error("no classes to evaluate");

  std::vector<std::vector<EvalBox>> dets(static_cast<std::size_t>(num_classes) + 1);
  for (const ScoredRecord& r : records) {
    dets[static_cast<std::size_t>(r.label)].push_back(
        {index.at(r.video_id), r.frame, r.box, r.score});
  }

  const EvalReport report =
      evaluate_corpus(dets, gt_by_video, nullptr, num_classes, config.eval);
  write_text_file(out_path(args, "report.txt"), format_report(report));
  write_text_file(out_path(args, "pr.tsv"), format_pr_table(report));
  write_config_echo(args, config);

  char buf[64];
  std::snprintf(buf, sizeof(buf), "mAP %.2f\n", 100.0 * report.map);
  std::cout << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"video object detection post-processing toolkit"};
  app.require_subcommand(1);

  CommonArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  add_common_options(synth, synth_args);

  CommonArgs run_args;
  std::string run_dets, run_gt;
  CLI::App* run = app.add_subcommand("run", "run post-processing over detections");
  add_common_options(run, run_args);
  run->add_option("--detections", run_dets, "detection JSONL")->required();
  run->add_option("--gt", run_gt, "ground-truth JSONL (enables the report)");

  CommonArgs ablate_args;
  std::string ablate_dets, ablate_gt;
  CLI::App* ablate = app.add_subcommand("ablate", "run the method ladder");
  add_common_options(ablate, ablate_args);
  ablate->add_option("--detections", ablate_dets, "detection JSONL")->required();
  ablate->add_option("--gt", ablate_gt, "ground-truth JSONL")->required();

  CommonArgs eval_args;
  std::string eval_dets, eval_gt;
  CLI::App* eval = app.add_subcommand("eval", "evaluate labelled detections");
  add_common_options(eval, eval_args);
  eval->add_option("--detections", eval_dets, "label/score detection JSONL")
      ->required();
  eval->add_option("--gt", eval_gt, "ground-truth JSONL")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_args);
    if (run->parsed()) return cmd_run(run_args, run_dets, run_gt);
    if (ablate->parsed()) return cmd_ablate(ablate_args, ablate_dets, ablate_gt);
    if (eval->parsed()) return cmd_eval(eval_args, eval_dets, eval_gt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
