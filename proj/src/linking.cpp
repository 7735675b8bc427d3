#include "tubelink/linking.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace tubelink {

namespace {

// Pool ordering: best first. Entries refer into an arena so merged
// tubelets can be added while iterating.
struct PoolKey {
  double score;       // aggregated max foreground score
  int start_frame;
  std::uint64_t rank;  // canonical creation order, lowest wins ties

  bool operator<(const PoolKey& other) const {
    if (score != other.score) return score > other.score;
    if (start_frame != other.start_frame) return start_frame < other.start_frame;
    return rank < other.rank;
  }
};

// Content-based ordering of tubelets sharing one span, so that pool
// behaviour cannot depend on how callers ordered their input lists.
bool content_less(const Tubelet& a, const Tubelet& b) {
  for (int i = 0; i < a.length(); ++i) {
    const Box& ba = a.boxes()[static_cast<std::size_t>(i)].box;
    const Box& bb = b.boxes()[static_cast<std::size_t>(i)].box;
    const auto ta = std::make_tuple(ba.x1(), ba.y1(), ba.x2(), ba.y2());
    const auto tb = std::make_tuple(bb.x1(), bb.y1(), bb.x2(), bb.y2());
    if (ta != tb) return ta < tb;
  }
  for (int i = 0; i < a.length(); ++i) {
    const auto& sa = a.boxes()[static_cast<std::size_t>(i)].scores.values();
    const auto& sb = b.boxes()[static_cast<std::size_t>(i)].scores.values();
    if (sa != sb) return sa < sb;
  }
  return false;
}

}  // namespace

LinkResult link_short_tubelets(const SegmentPlan& plan,
                               const std::vector<std::vector<Tubelet>>& per_segment,
                               int class_id, double link_iou_threshold,
                               AggregationMode mode) {
  if (!(link_iou_threshold > 0.0 && link_iou_threshold < 1.0)) {
    throw std::invalid_argument("link threshold must be in (0, 1)");
  }
  if (per_segment.size() != plan.segments.size()) {
    throw std::invalid_argument(
        "link_short_tubelets: one tubelet list per segment required");
  }

  struct Entry {
    Tubelet tubelet;
    PoolKey key;
  };
  std::vector<Entry> arena;

  // Canonicalize the intake order within each segment (score, geometry),
  // then assign ranks; identical inputs in any order produce one pool.
  std::uint64_t next_rank = 0;
  for (std::size_t s = 0; s < per_segment.size(); ++s) {
    const int first = plan.span_first(s);
    const int last = plan.span_last(s);
    std::vector<const Tubelet*> order;
    order.reserve(per_segment[s].size());
    for (const Tubelet& t : per_segment[s]) {
      if (t.start_frame() != first || t.end_frame() != last) {
        throw std::invalid_argument(
            "link_short_tubelets: tubelet span does not match its segment");
      }
      if (class_id < 1 || class_id > t.aggregated().num_classes()) {
        throw std::invalid_argument("link_short_tubelets: class id out of range");
      }
      order.push_back(&t);
    }
    std::sort(order.begin(), order.end(), [](const Tubelet* a, const Tubelet* b) {
      const double sa = a->aggregated().max_foreground();
      const double sb = b->aggregated().max_foreground();
      if (sa != sb) return sa > sb;
      return content_less(*a, *b);
    });
    for (const Tubelet* t : order) {
      arena.push_back(
          {*t, {t->aggregated().max_foreground(), t->start_frame(), next_rank}});
      ++next_rank;
    }
  }

  struct PoolLess {
    const std::vector<Entry>* arena;
    bool operator()(std::size_t a, std::size_t b) const {
      return (*arena)[a].key < (*arena)[b].key;
    }
  };
  std::set<std::size_t, PoolLess> pool{PoolLess{&arena}};
  for (std::size_t i = 0; i < arena.size(); ++i) pool.insert(i);

  LinkResult result;
  while (!pool.empty()) {
    const std::size_t top = *pool.begin();
    pool.erase(pool.begin());
    const Tubelet& current = arena[top].tubelet;

    // Best adjacent candidate: highest shared-frame IoU, then pool order.
    std::optional<std::size_t> best;
    double best_iou = 0.0;
    bool best_before = false;
    for (std::size_t idx : pool) {
      const Tubelet& other = arena[idx].tubelet;
      double ov = -1.0;
      bool before = false;
      if (other.end_frame() == current.start_frame() &&
          other.start_frame() < current.start_frame()) {
        ov = iou(other.back().box, current.front().box);
        before = true;
      } else if (other.start_frame() == current.end_frame() &&
                 other.end_frame() > current.end_frame()) {
        ov = iou(current.back().box, other.front().box);
      }
      if (ov < link_iou_threshold) continue;
      if (!best || ov > best_iou) {
        best = idx;
        best_iou = ov;
        best_before = before;
      }
      // Equal IoU keeps the earlier hit; the pool iterates best-first.
    }

    if (!best) {
      result.finalized.push_back(current);
      continue;
    }

    pool.erase(*best);
    const Tubelet& other = arena[*best].tubelet;
    const Tubelet& left = best_before ? other : current;
    const Tubelet& right = best_before ? current : other;

    // Merge: drop the lower-scoring duplicate at the shared frame; ties
    // keep the popped tubelet's box.
    std::vector<Detection> boxes(left.boxes().begin(), left.boxes().end() - 1);
    const double left_score = left.back().scores[static_cast<std::size_t>(class_id)];
    const double right_score = right.front().scores[static_cast<std::size_t>(class_id)];
    bool keep_left = left_score > right_score;
    if (left_score == right_score) keep_left = !best_before;
    boxes.push_back(keep_left ? left.back() : right.front());
    boxes.insert(boxes.end(), right.boxes().begin() + 1, right.boxes().end());

    const std::uint64_t rank = next_rank++;
    arena.push_back({Tubelet(left.start_frame(), std::move(boxes), mode,
                             static_cast<std::uint32_t>(rank)),
                     {}});
    Entry& merged = arena.back();
    merged.key = {merged.tubelet.aggregated().max_foreground(),
                  merged.tubelet.start_frame(), rank};
    pool.insert(arena.size() - 1);
    ++result.merges;
  }
  return result;
}

std::vector<EmittedBox> emit_frame_detections(const std::vector<Tubelet>& tubelets) {
  std::vector<EmittedBox> out;
  for (std::size_t i = 0; i < tubelets.size(); ++i) {
    const Tubelet& t = tubelets[i];
    for (int k = 0; k < t.length(); ++k) {
      out.push_back({t.start_frame() + k,
                     t.boxes()[static_cast<std::size_t>(k)].box, t.aggregated(),
                     static_cast<int>(i)});
    }
  }
  return out;
}

}  // namespace tubelink
