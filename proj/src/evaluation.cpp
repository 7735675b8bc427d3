#include "tubelink/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace tubelink {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Turn an ordered TP/FP event sequence into the PR curve and the exact
// area under its interpolated precision envelope.
ApResult finish_ap(const std::vector<char>& tp_events, int n_gt) {
  ApResult result;
  result.n_gt = n_gt;
  if (n_gt == 0) {
    result.ap = kNan;
    return result;
  }

  int tp = 0, fp = 0;
  result.pr.reserve(tp_events.size());
  for (char is_tp : tp_events) {
    if (is_tp) ++tp; else ++fp;
    result.pr.push_back({static_cast<double>(tp) / n_gt,
                         static_cast<double>(tp) / (tp + fp)});
  }

  // Walk the curve backwards keeping the running precision maximum; sum
  // rectangle areas between successive recall values.
  double ap = 0.0;
  double max_prec = 0.0;
  for (std::size_t i = result.pr.size(); i-- > 0;) {
    max_prec = std::max(max_prec, result.pr[i].precision);
    const double prev_recall = i == 0 ? 0.0 : result.pr[i - 1].recall;
    ap += (result.pr[i].recall - prev_recall) * max_prec;
  }
  result.ap = ap;
  return result;
}

}  // namespace

ApResult compute_ap(std::vector<EvalBox> dets, const std::vector<GtEvalBox>& gt,
                    double match_iou) {
  if (!(match_iou > 0.0 && match_iou < 1.0)) {
    throw std::invalid_argument("compute_ap: match IoU must be in (0, 1)");
  }

  std::map<std::pair<int, int>, std::vector<std::size_t>> gt_index;
  for (std::size_t g = 0; g < gt.size(); ++g) {
    gt_index[{gt[g].video, gt[g].frame}].push_back(g);
  }
  int n_gt = 0;
  for (const GtEvalBox& g : gt) n_gt += g.in_subset ? 1 : 0;

  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    if (dets[a].video != dets[b].video) return dets[a].video < dets[b].video;
    return dets[a].frame < dets[b].frame;
  });

  std::vector<char> gt_matched(gt.size(), 0);
  std::vector<char> tp_events;
  tp_events.reserve(dets.size());
  for (std::size_t oi : order) {
    const EvalBox& det = dets[oi];
    const auto it = gt_index.find({det.video, det.frame});
    std::size_t best_g = gt.size();
    double best_iou = 0.0;
    if (it != gt_index.end()) {
      for (std::size_t g : it->second) {
        if (gt_matched[g]) continue;
        const double ov = iou(det.box, gt[g].box);
        if (ov > best_iou) {
          best_iou = ov;
          best_g = g;
        }
      }
    }
    if (best_g < gt.size() && best_iou >= match_iou) {
      gt_matched[best_g] = 1;
      if (gt[best_g].in_subset) {
        tp_events.push_back(1);
      }
      // Matches to out-of-subset ground truth are ignored entirely.
    } else {
      tp_events.push_back(0);
    }
  }
  return finish_ap(tp_events, n_gt);
}

double motion_iou(const GroundTruthTrack& track, int frame, int window) {
  if (window < 1) {
    throw std::invalid_argument("motion_iou: window must be >= 1");
  }
  if (!track.alive(frame)) {
    throw std::invalid_argument("motion_iou: frame outside track span");
  }
  const Box& ref = track.box_at(frame);
  double sum = 0.0;
  int count = 0;
  for (int d = -window; d <= window; ++d) {
    if (d == 0) continue;
    const int f = frame + d;
    if (!track.alive(f)) continue;
    sum += iou(ref, track.box_at(f));
    ++count;
  }
  return count == 0 ? 1.0 : sum / count;
}

SpeedBand speed_band(double miou, double slow_iou, double fast_iou) {
  if (miou > slow_iou) return SpeedBand::kSlow;
  if (miou < fast_iou) return SpeedBand::kFast;
  return SpeedBand::kMedium;
}

ApResult strict_tubelet_ap(
    std::vector<EvalTubelet> tubelets,
    const std::vector<std::pair<int, const GroundTruthTrack*>>& tracks,
    double match_iou) {
  if (!(match_iou > 0.0 && match_iou < 1.0)) {
    throw std::invalid_argument("strict_tubelet_ap: match IoU must be in (0, 1)");
  }

  std::vector<std::size_t> order(tubelets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tubelets[a].score != tubelets[b].score)
      return tubelets[a].score > tubelets[b].score;
    if (tubelets[a].video != tubelets[b].video)
      return tubelets[a].video < tubelets[b].video;
    return tubelets[a].start_frame < tubelets[b].start_frame;
  });

  std::vector<char> claimed(tracks.size(), 0);
  std::vector<char> tp_events;
  tp_events.reserve(tubelets.size());
  for (std::size_t oi : order) {
    const EvalTubelet& tub = tubelets[oi];
    // Every box must match a ground-truth box, and all matches must land
    // on one and the same track.
    int matched_track = -1;
    bool consistent = true;
    for (std::size_t k = 0; k < tub.boxes.size() && consistent; ++k) {
      const int frame = tub.start_frame + static_cast<int>(k);
      int best_track = -1;
      double best_iou = 0.0;
      for (std::size_t t = 0; t < tracks.size(); ++t) {
        if (tracks[t].first != tub.video || !tracks[t].second->alive(frame)) {
          continue;
        }
        const double ov = iou(tub.boxes[k], tracks[t].second->box_at(frame));
        if (ov > best_iou) {
          best_iou = ov;
          best_track = static_cast<int>(t);
        }
      }
      if (best_track < 0 || best_iou < match_iou) {
        consistent = false;
      } else if (matched_track < 0) {
        matched_track = best_track;
      } else if (matched_track != best_track) {
        consistent = false;
      }
    }
    const bool is_tp = consistent && matched_track >= 0 &&
                       !claimed[static_cast<std::size_t>(matched_track)];
    if (is_tp) claimed[static_cast<std::size_t>(matched_track)] = 1;
    tp_events.push_back(is_tp ? 1 : 0);
  }
  return finish_ap(tp_events, static_cast<int>(tracks.size()));
}

double nan_mean(const std::vector<double>& values) {
  double sum = 0.0;
  int count = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++count;
  }
  return count == 0 ? kNan : sum / count;
}

EvalReport evaluate_corpus(
    const std::vector<std::vector<EvalBox>>& dets_per_class,
    const std::vector<std::vector<GroundTruthTrack>>& gt_by_video,
    const std::vector<std::vector<EvalTubelet>>* tubelets_per_class,
    int num_classes, const EvalOptions& options) {
  if (static_cast<int>(dets_per_class.size()) != num_classes + 1) {
    throw std::invalid_argument(
        "evaluate_corpus: expected one detection list per foreground class");
  }

  // Frames where more than half of the objects present are occluded.
  std::map<std::pair<int, int>, std::pair<int, int>> frame_counts;  // alive, occluded
  for (std::size_t v = 0; v < gt_by_video.size(); ++v) {
    for (const GroundTruthTrack& track : gt_by_video[v]) {
      for (int f = track.start_frame; f <= track.end_frame(); ++f) {
        auto& [alive, occl] = frame_counts[{static_cast<int>(v), f}];
        ++alive;
        if (track.occluded_at(f)) ++occl;
      }
    }
  }
  auto occluded_frame = [&](int video, int frame) {
    const auto it = frame_counts.find({video, frame});
    return it != frame_counts.end() && 2 * it->second.second > it->second.first;
  };

  EvalReport report;
  for (int c = 1; c <= num_classes; ++c) {
    ClassEval ce;
    ce.class_id = c;

    std::vector<GtEvalBox> gt_all;
    std::vector<SpeedBand> gt_band;
    std::vector<std::pair<int, const GroundTruthTrack*>> class_tracks;
    for (std::size_t v = 0; v < gt_by_video.size(); ++v) {
      for (const GroundTruthTrack& track : gt_by_video[v]) {
        if (track.class_id != c) continue;
        class_tracks.emplace_back(static_cast<int>(v), &track);
        for (int f = track.start_frame; f <= track.end_frame(); ++f) {
          gt_all.push_back({static_cast<int>(v), f, track.box_at(f), true});
          gt_band.push_back(speed_band(
              motion_iou(track, f, options.speed_window),
              options.speed_slow_iou, options.speed_fast_iou));
        }
      }
    }

    const auto& dets = dets_per_class[static_cast<std::size_t>(c)];
    ce.overall = compute_ap(dets, gt_all, options.match_iou);

    for (SpeedBand band :
         {SpeedBand::kSlow, SpeedBand::kMedium, SpeedBand::kFast}) {
      std::vector<GtEvalBox> gt_subset = gt_all;
      for (std::size_t g = 0; g < gt_subset.size(); ++g) {
        gt_subset[g].in_subset = gt_band[g] == band;
      }
      const ApResult r = compute_ap(dets, gt_subset, options.match_iou);
      (band == SpeedBand::kSlow
           ? ce.ap_slow
           : band == SpeedBand::kMedium ? ce.ap_medium : ce.ap_fast) = r.ap;
    }

    std::vector<EvalBox> dets_occ;
    for (const EvalBox& d : dets) {
      if (occluded_frame(d.video, d.frame)) dets_occ.push_back(d);
    }
    std::vector<GtEvalBox> gt_occ;
    for (const GtEvalBox& g : gt_all) {
      if (occluded_frame(g.video, g.frame)) gt_occ.push_back(g);
    }
    ce.ap_occluded = compute_ap(dets_occ, gt_occ, options.match_iou).ap;

    if (tubelets_per_class != nullptr) {
      ce.strict_ap = strict_tubelet_ap(
                         (*tubelets_per_class)[static_cast<std::size_t>(c)],
                         class_tracks, options.match_iou)
                         .ap;
    } else {
      ce.strict_ap = kNan;
    }

    report.per_class.push_back(std::move(ce));
  }

  std::vector<double> ap, slow, medium, fast, occ, strict;
  for (const ClassEval& ce : report.per_class) {
    ap.push_back(ce.overall.ap);
    slow.push_back(ce.ap_slow);
    medium.push_back(ce.ap_medium);
    fast.push_back(ce.ap_fast);
    occ.push_back(ce.ap_occluded);
    strict.push_back(ce.strict_ap);
  }
  report.map = nan_mean(ap);
  report.map_slow = nan_mean(slow);
  report.map_medium = nan_mean(medium);
  report.map_fast = nan_mean(fast);
  report.map_occluded = nan_mean(occ);
  report.strict_map = nan_mean(strict);
  return report;
}

namespace {

std::string percent(double value) {
  if (std::isnan(value)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * value);
  return buf;
}

}  // namespace

std::string format_report(const EvalReport& report) {
  std::string out;
  out += "mAP           " + percent(report.map) + "\n";
  out += "mAP slow      " + percent(report.map_slow) + "\n";
  out += "mAP medium    " + percent(report.map_medium) + "\n";
  out += "mAP fast      " + percent(report.map_fast) + "\n";
  out += "mAP occluded  " + percent(report.map_occluded) + "\n";
  out += "mAP strict    " + percent(report.strict_map) + "\n";
  out += "\nclass\tn_gt\tap\tslow\tmedium\tfast\toccluded\tstrict\n";
  for (const ClassEval& ce : report.per_class) {
    char head[32];
    std::snprintf(head, sizeof(head), "%d\t%d\t", ce.class_id, ce.overall.n_gt);
    out += head;
    out += percent(ce.overall.ap) + "\t" + percent(ce.ap_slow) + "\t" +
           percent(ce.ap_medium) + "\t" + percent(ce.ap_fast) + "\t" +
           percent(ce.ap_occluded) + "\t" + percent(ce.strict_ap) + "\n";
  }
  return out;
}

std::string format_pr_table(const EvalReport& report) {
  std::string out = "class\trecall\tprecision\n";
  char buf[64];
  for (const ClassEval& ce : report.per_class) {
    for (const PrPoint& p : ce.overall.pr) {
      std::snprintf(buf, sizeof(buf), "%d\t%.6f\t%.6f\n", ce.class_id, p.recall,
                    p.precision);
      out += buf;
    }
  }
  return out;
}

}  // namespace tubelink
