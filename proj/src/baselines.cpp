#include "tubelink/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace tubelink {

std::vector<int> frame_nms(const std::vector<Detection>& dets, int class_id,
                           double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("frame_nms threshold must be in (0, 1)");
  }
  if (dets.empty()) return {};
  if (class_id < 1 || class_id > dets[0].scores.num_classes()) {
    throw std::invalid_argument("frame_nms: class id out of range");
  }

  std::vector<int> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dets[static_cast<std::size_t>(a)].scores[static_cast<std::size_t>(class_id)] >
           dets[static_cast<std::size_t>(b)].scores[static_cast<std::size_t>(class_id)];
  });

  std::vector<char> suppressed(dets.size(), 0);
  std::vector<int> kept;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const int i = order[oi];
    if (suppressed[static_cast<std::size_t>(i)]) continue;
    kept.push_back(i);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const int j = order[oj];
      if (suppressed[static_cast<std::size_t>(j)]) continue;
      if (iou(dets[static_cast<std::size_t>(i)].box,
              dets[static_cast<std::size_t>(j)].box) > threshold) {
        suppressed[static_cast<std::size_t>(j)] = 1;
      }
    }
  }
  return kept;
}

SeqPath seq_nms_best_path(const std::vector<std::vector<ScoredBox>>& frames,
                          const std::vector<std::vector<char>>& alive,
                          double link_iou) {
  if (frames.size() != alive.size()) {
    throw std::invalid_argument("seq_nms_best_path: alive mask shape mismatch");
  }

  // dp[f][i]: best total of a path ending at box i of frame f; paths may
  // start at any frame. prev records the chosen predecessor.
  std::vector<std::vector<double>> dp(frames.size());
  std::vector<std::vector<int>> prev(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    dp[f].assign(frames[f].size(), -1.0);
    prev[f].assign(frames[f].size(), -1);
    for (std::size_t i = 0; i < frames[f].size(); ++i) {
      if (!alive[f][i]) continue;
      double best = 0.0;
      int best_j = -1;
      if (f > 0) {
        for (std::size_t j = 0; j < frames[f - 1].size(); ++j) {
          if (!alive[f - 1][j] || dp[f - 1][j] < 0.0) continue;
          if (iou(frames[f - 1][j].box, frames[f][i].box) < link_iou) continue;
          if (dp[f - 1][j] > best) {
            best = dp[f - 1][j];
            best_j = static_cast<int>(j);
          }
        }
      }
      dp[f][i] = frames[f][i].score + best;
      prev[f][i] = best_j;
    }
  }

  SeqPath path;
  double best_total = -1.0;
  int end_f = -1, end_i = -1;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t i = 0; i < frames[f].size(); ++i) {
      if (dp[f][i] > best_total) {
        best_total = dp[f][i];
        end_f = static_cast<int>(f);
        end_i = static_cast<int>(i);
      }
    }
  }
  if (end_f < 0) return path;  // nothing alive

  path.total = best_total;
  for (int f = end_f, i = end_i; i >= 0;) {
    path.nodes.emplace_back(f, i);
    const int p = prev[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)];
    i = p;
    --f;
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

std::vector<std::vector<ScoredBox>> seq_nms_link(
    std::vector<std::vector<ScoredBox>> frames, const SeqNmsParams& params) {
  if (!(params.link_iou > 0.0 && params.link_iou < 1.0) ||
      !(params.suppress_iou > 0.0 && params.suppress_iou < 1.0)) {
    throw std::invalid_argument("seq_nms_link thresholds must be in (0, 1)");
  }

  std::vector<std::vector<char>> alive(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    alive[f].assign(frames[f].size(), 1);
  }
  std::vector<std::vector<ScoredBox>> out(frames.size());

  while (true) {
    const SeqPath path = seq_nms_best_path(frames, alive, params.link_iou);
    if (path.nodes.empty()) break;

    double rescored = 0.0;
    if (params.rescore == SeqRescore::kAvg) {
      rescored = path.total / static_cast<double>(path.nodes.size());
    } else {
      for (const auto& [f, i] : path.nodes) {
        rescored = std::max(
            rescored,
            frames[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)].score);
      }
    }

    for (const auto& [f, i] : path.nodes) {
      const auto uf = static_cast<std::size_t>(f);
      const auto ui = static_cast<std::size_t>(i);
      ScoredBox selected = frames[uf][ui];
      selected.score = rescored;
      out[uf].push_back(selected);
      alive[uf][ui] = 0;
      // Suppress the member's in-frame competitors.
      for (std::size_t j = 0; j < frames[uf].size(); ++j) {
        if (!alive[uf][j]) continue;
        if (iou(frames[uf][ui].box, frames[uf][j].box) > params.suppress_iou) {
          alive[uf][j] = 0;
        }
      }
    }
  }

  for (auto& frame : out) {
    std::stable_sort(frame.begin(), frame.end(),
                     [](const ScoredBox& a, const ScoredBox& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.src_index < b.src_index;
                     });
  }
  return out;
}

}  // namespace tubelink
