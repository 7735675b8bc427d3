#include "tubelink/tubelet.hpp"

#include <algorithm>
#include <stdexcept>

namespace tubelink {

namespace {

ScoreVector aggregate_boxes(const std::vector<Detection>& boxes,
                            AggregationMode mode) {
  if (boxes.empty()) {
    throw std::invalid_argument("tubelet requires at least one box");
  }
  std::vector<ScoreVector> vs;
  vs.reserve(boxes.size());
  for (const Detection& d : boxes) vs.push_back(d.scores);
  return aggregate_scores(vs, mode);
}

}  // namespace

Tubelet::Tubelet(int start_frame, std::vector<Detection> boxes,
                 AggregationMode mode, std::uint32_t uid)
    : start_frame_(start_frame),
      boxes_(std::move(boxes)),
      aggregated_(aggregate_boxes(boxes_, mode)),
      uid_(uid) {
  if (start_frame_ < 1) {
    throw std::invalid_argument("tubelet start frame must be >= 1");
  }
}

double tubelet_overlap(const Tubelet& a, const Tubelet& b) {
  if (a.start_frame() != b.start_frame() || a.length() != b.length()) {
    throw std::invalid_argument(
        "tubelet_overlap requires identical frame spans");
  }
  double overlap = 1.0;
  for (int i = 0; i < a.length(); ++i) {
    overlap = std::min(overlap, iou(a.boxes()[i].box, b.boxes()[i].box));
    if (overlap == 0.0) break;
  }
  return overlap;
}

std::vector<Tubelet> tubelet_nms(const std::vector<Tubelet>& tubelets,
                                 int class_id, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("tubelet_nms threshold must be in (0, 1)");
  }
  if (tubelets.empty()) return {};
  const int num_classes = tubelets[0].aggregated().num_classes();
  if (class_id < 1 || class_id > num_classes) {
    throw std::invalid_argument("tubelet_nms: class id out of range");
  }
  for (const Tubelet& t : tubelets) {
    if (t.start_frame() != tubelets[0].start_frame() ||
        t.length() != tubelets[0].length()) {
      throw std::invalid_argument("tubelet_nms requires one shared frame span");
    }
  }

  // Sort by descending class score; ties keep the earlier list position.
  std::vector<std::size_t> order(tubelets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return tubelets[a].aggregated()[class_id] >
                            tubelets[b].aggregated()[class_id];
                   });

  std::vector<char> suppressed(tubelets.size(), 0);
  std::vector<Tubelet> kept;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    if (suppressed[i]) continue;
    kept.push_back(tubelets[i]);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (suppressed[j]) continue;
      if (tubelet_overlap(tubelets[i], tubelets[j]) > threshold) {
        suppressed[j] = 1;
      }
    }
  }
  return kept;
}

}  // namespace tubelink
