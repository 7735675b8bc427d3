#include "tubelink/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>

#include "tubelink/assembly.hpp"
#include "tubelink/baselines.hpp"
#include "tubelink/linking.hpp"
#include "tubelink/segmentation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tubelink {

std::string to_string(Method method) {
  switch (method) {
    case Method::kStatic: return "static";
    case Method::kSeqNms: return "seqnms";
    case Method::kTubeletsNoLink: return "tubelets";
    case Method::kTubeletsTnms: return "tubelets+tnms";
    case Method::kUnionSeqNms: return "union-seqnms";
    case Method::kFull: return "full";
  }
  throw std::invalid_argument("unknown method value");
}

Method method_for(const PipelineConfig& config) {
  switch (config.baseline) {
    case BaselineKind::kStatic: return Method::kStatic;
    case BaselineKind::kSeqNms: return Method::kSeqNms;
    case BaselineKind::kUnionSeqNms: return Method::kUnionSeqNms;
    case BaselineKind::kNone: break;
  }
  return config.segment_len == 1 ? Method::kStatic : Method::kFull;
}

namespace {

struct Candidate {
  Box box;
  double score;
  int tubelet_id;  // -1 for raw passthrough boxes
};

// Same greedy rule as the per-frame baseline, over already-scored boxes.
void append_nms_survivors(int frame, int label, std::vector<Candidate> candidates,
                          double threshold, std::vector<OutBox>& out) {
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });
  std::vector<char> suppressed(candidates.size(), 0);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    if (suppressed[i]) continue;
    out.push_back({frame, candidates[i].box, label, candidates[i].score,
                   candidates[i].tubelet_id});
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (!suppressed[j] && iou(candidates[i].box, candidates[j].box) > threshold) {
        suppressed[j] = 1;
      }
    }
  }
}

void sort_canonical(std::vector<OutBox>& boxes) {
  std::sort(boxes.begin(), boxes.end(), [](const OutBox& a, const OutBox& b) {
    const auto ka = std::make_tuple(a.frame, a.label, -a.score, a.box.x1(),
                                    a.box.y1(), a.box.x2(), a.box.y2(),
                                    a.tubelet_id);
    const auto kb = std::make_tuple(b.frame, b.label, -b.score, b.box.x1(),
                                    b.box.y1(), b.box.x2(), b.box.y2(),
                                    b.tubelet_id);
    return ka < kb;
  });
}

VideoOutput run_static(const PipelineConfig& config, const VideoDetections& video,
                       int num_classes) {
  VideoOutput out;
  for (const FrameDetections& frame : video) {
    for (int c = 1; c <= num_classes; ++c) {
      for (int idx : frame_nms(frame.dets, c, config.nms_thresh)) {
        const Detection& det = frame.dets[static_cast<std::size_t>(idx)];
        out.boxes.push_back({frame.frame, det.box, c,
                             det.scores[static_cast<std::size_t>(c)], -1});
      }
    }
  }
  return out;
}

VideoOutput run_seq_nms(const PipelineConfig& config, const VideoDetections& video,
                        int num_classes) {
  VideoOutput out;
  SeqNmsParams params{config.seqnms_link_iou, config.nms_thresh,
                      config.seqnms_rescore};
  for (int c = 1; c <= num_classes; ++c) {
    std::vector<std::vector<ScoredBox>> frames(video.size());
    for (std::size_t f = 0; f < video.size(); ++f) {
      for (std::size_t i = 0; i < video[f].dets.size(); ++i) {
        const Detection& det = video[f].dets[i];
        frames[f].push_back({det.box, det.scores[static_cast<std::size_t>(c)],
                             static_cast<int>(i)});
      }
    }
    const auto kept = seq_nms_link(std::move(frames), params);
    for (std::size_t f = 0; f < kept.size(); ++f) {
      for (const ScoredBox& sb : kept[f]) {
        out.boxes.push_back({video[f].frame, sb.box, c, sb.score, -1});
      }
    }
  }
  return out;
}

VideoOutput run_tubelet_method(Method method, const PipelineConfig& config,
                               const VideoDetections& video, int num_classes) {
  const int n = static_cast<int>(video.size());
  const SegmentPlan plan = plan_segments(n, config.segment_len);
  const std::size_t n_segments = plan.segments.size();

  std::vector<UnionProposals> proposals(n_segments);
  std::vector<std::vector<Tubelet>> short_tubelets(n_segments);
  std::uint32_t next_uid = 0;
  for (std::size_t s = 0; s < n_segments; ++s) {
    const int first = plan.span_first(s);
    const int last = plan.span_last(s);
    const std::span<const FrameDetections> segment(
        video.data() + (first - 1), static_cast<std::size_t>(last - first + 1));
    proposals[s] = pair_union_proposals(segment, config.pair_iou_thresh);
    short_tubelets[s] =
        assemble_short_tubelets(proposals[s], segment, config.agg, next_uid);
  }

  // Boxes no full chain claimed; interior frames belong to two segments,
  // so the same box can be leftover twice — deduplicate.
  std::set<std::pair<int, int>> leftover_refs;
  for (const UnionProposals& p : proposals) {
    for (const BoxRef& ref : p.leftovers) {
      leftover_refs.insert({ref.frame, ref.det_index});
    }
  }
  std::vector<std::vector<int>> leftovers_by_frame(video.size());
  for (const auto& [frame, det] : leftover_refs) {
    leftovers_by_frame[static_cast<std::size_t>(frame - 1)].push_back(det);
  }

  VideoOutput out;
  int next_tubelet_id = 0;
  for (int c = 1; c <= num_classes; ++c) {
    std::vector<std::vector<Tubelet>> stage = short_tubelets;
    if (method == Method::kFull || method == Method::kTubeletsTnms) {
      for (std::vector<Tubelet>& list : stage) {
        list = tubelet_nms(list, c, config.tnms_thresh);
      }
    }

    std::vector<Tubelet> finalized;
    if (method == Method::kFull) {
      finalized = link_short_tubelets(plan, stage, c, config.link_thresh,
                                      config.agg)
                      .finalized;
    } else {
      for (std::vector<Tubelet>& list : stage) {
        finalized.insert(finalized.end(), list.begin(), list.end());
      }
    }

    if (method == Method::kUnionSeqNms) {
      // Aggregated tubelet boxes and raw leftovers compete under the
      // neighboring-frame association of the baseline.
      std::vector<std::vector<ScoredBox>> frames(video.size());
      int src = 0;
      for (const Tubelet& t : finalized) {
        for (int k = 0; k < t.length(); ++k) {
          frames[static_cast<std::size_t>(t.start_frame() + k - 1)].push_back(
              {t.boxes()[static_cast<std::size_t>(k)].box,
               t.aggregated()[static_cast<std::size_t>(c)], src++});
        }
      }
      for (std::size_t f = 0; f < video.size(); ++f) {
        for (int det : leftovers_by_frame[f]) {
          frames[f].push_back(
              {video[f].dets[static_cast<std::size_t>(det)].box,
               video[f].dets[static_cast<std::size_t>(det)]
                   .scores[static_cast<std::size_t>(c)],
               src++});
        }
      }
      SeqNmsParams params{config.seqnms_link_iou, config.nms_thresh,
                          config.seqnms_rescore};
      const auto kept = seq_nms_link(std::move(frames), params);
      for (std::size_t f = 0; f < kept.size(); ++f) {
        for (const ScoredBox& sb : kept[f]) {
          out.boxes.push_back({video[f].frame, sb.box, c, sb.score, -1});
        }
      }
      continue;
    }

    // Emit tubelet boxes with their aggregated class score, raw leftovers
    // with theirs, and clean up per frame: segment overlap means interior
    // frames arrive with near-duplicates.
    std::vector<std::vector<Candidate>> candidates(video.size());
    for (const Tubelet& t : finalized) {
      const int id = next_tubelet_id++;
      const double score = t.aggregated()[static_cast<std::size_t>(c)];
      OutTubelet record{id, c, score, t.start_frame(), {}};
      for (int k = 0; k < t.length(); ++k) {
        const Box& box = t.boxes()[static_cast<std::size_t>(k)].box;
        record.boxes.push_back(box);
        candidates[static_cast<std::size_t>(t.start_frame() + k - 1)].push_back(
            {box, score, id});
      }
      out.tubelets.push_back(std::move(record));
    }
    for (std::size_t f = 0; f < video.size(); ++f) {
      for (int det : leftovers_by_frame[f]) {
        const Detection& d = video[f].dets[static_cast<std::size_t>(det)];
        candidates[f].push_back(
            {d.box, d.scores[static_cast<std::size_t>(c)], -1});
      }
    }
    for (std::size_t f = 0; f < video.size(); ++f) {
      append_nms_survivors(video[f].frame, c, std::move(candidates[f]),
                           config.nms_thresh, out.boxes);
    }
  }
  return out;
}

}  // namespace

VideoOutput run_video(Method method, const PipelineConfig& config,
                      const VideoDetections& video, int num_classes) {
  if (num_classes < 1) {
    throw std::invalid_argument("run_video: num_classes must be >= 1");
  }
  for (std::size_t f = 0; f < video.size(); ++f) {
    if (video[f].frame != static_cast<int>(f) + 1) {
      throw std::invalid_argument("run_video: frames must be positional 1..N");
    }
    for (const Detection& det : video[f].dets) {
      if (det.scores.num_classes() != num_classes) {
        throw std::invalid_argument("run_video: score vector length mismatch");
      }
    }
  }
  if (video.empty()) return {};

  VideoOutput out;
  switch (method) {
    case Method::kStatic:
      out = run_static(config, video, num_classes);
      break;
    case Method::kSeqNms:
      out = run_seq_nms(config, video, num_classes);
      break;
    default:
      out = run_tubelet_method(method, config, video, num_classes);
      break;
  }
  sort_canonical(out.boxes);
  return out;
}

std::vector<VideoOutput> process_corpus(Method method,
                                        const PipelineConfig& config,
                                        const std::vector<VideoDetections>& videos,
                                        int num_classes, int workers) {
  std::vector<VideoOutput> outputs(videos.size());
  std::vector<std::string> errors(videos.size());

#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t v = 0; v < videos.size(); ++v) {
    try {
      outputs[v] = run_video(method, config, videos[v], num_classes);
    } catch (const std::exception& e) {
      errors[v] = e.what();
    }
  }
#else
  (void)workers;
  for (std::size_t v = 0; v < videos.size(); ++v) {
    try {
      outputs[v] = run_video(method, config, videos[v], num_classes);
    } catch (const std::exception& e) {
      errors[v] = e.what();
    }
  }
#endif

  for (std::size_t v = 0; v < videos.size(); ++v) {
    if (!errors[v].empty()) {
      throw std::runtime_error("video " + std::to_string(v) + ": " + errors[v]);
    }
  }
  return outputs;
}

EvalReport evaluate_outputs(const std::vector<VideoOutput>& outputs,
                            const std::vector<std::vector<GroundTruthTrack>>& gt_by_video,
                            int num_classes, const EvalOptions& options) {
  std::vector<std::vector<EvalBox>> dets(static_cast<std::size_t>(num_classes) + 1);
  std::vector<std::vector<EvalTubelet>> tubelets(
      static_cast<std::size_t>(num_classes) + 1);
  bool any_tubelets = false;
  for (std::size_t v = 0; v < outputs.size(); ++v) {
    for (const OutBox& box : outputs[v].boxes) {
      dets[static_cast<std::size_t>(box.label)].push_back(
          {static_cast<int>(v), box.frame, box.box, box.score});
    }
    for (const OutTubelet& t : outputs[v].tubelets) {
      any_tubelets = true;
      tubelets[static_cast<std::size_t>(t.label)].push_back(
          {static_cast<int>(v), t.start_frame, t.boxes, t.score});
    }
  }
  return evaluate_corpus(dets, gt_by_video, any_tubelets ? &tubelets : nullptr,
                         num_classes, options);
}

std::vector<AblationRow> run_ablation(const PipelineConfig& config,
                                      const std::vector<VideoDetections>& videos,
                                      const std::vector<std::vector<GroundTruthTrack>>& gt_by_video,
                                      int num_classes) {
  const Method ladder[] = {Method::kStatic,       Method::kSeqNms,
                           Method::kTubeletsNoLink, Method::kTubeletsTnms,
                           Method::kUnionSeqNms,  Method::kFull};
  std::vector<AblationRow> rows;
  for (Method method : ladder) {
    const auto outputs =
        process_corpus(method, config, videos, num_classes, config.workers);
    const EvalReport report =
        evaluate_outputs(outputs, gt_by_video, num_classes, config.eval);
    rows.push_back({method, report.map, report.map_slow, report.map_medium,
                    report.map_fast, report.map_occluded});
  }
  return rows;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  auto cell = [](double v) {
    if (std::isnan(v)) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
    return std::string(buf);
  };
  std::string out = "method\tmap\tslow\tmedium\tfast\toccluded\n";
  for (const AblationRow& row : rows) {
    out += to_string(row.method) + "\t" + cell(row.map) + "\t" +
           cell(row.map_slow) + "\t" + cell(row.map_medium) + "\t" +
           cell(row.map_fast) + "\t" + cell(row.map_occluded) + "\n";
  }
  return out;
}

}  // namespace tubelink
