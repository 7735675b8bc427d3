#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "test_util.hpp"
#include "tubelink/baselines.hpp"
#include "tubelink/rng.hpp"

using tubelink::Box;
using tubelink::Detection;
using tubelink::ScoredBox;
using tubelink::SeqNmsParams;
using tubelink::SeqPath;
using tubelink::SeqRescore;
using tubelink::frame_nms;
using tubelink::seq_nms_best_path;
using tubelink::seq_nms_link;
using testutil::det;

namespace {

std::vector<std::vector<char>> all_alive(
    const std::vector<std::vector<ScoredBox>>& frames) {
  std::vector<std::vector<char>> alive(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    alive[f].assign(frames[f].size(), 1);
  }
  return alive;
}

// Frames of boxes clustered around per-object anchors that drift a
// little per frame, so consecutive-frame IoUs land on both sides of any
// reasonable link threshold.
std::vector<std::vector<ScoredBox>> random_frames(tubelink::rng::Random& rand,
                                                  int n_frames, int max_boxes) {
  std::vector<Box> anchors{testutil::random_box(rand),
                           testutil::random_box(rand)};
  std::vector<std::vector<ScoredBox>> frames(
      static_cast<std::size_t>(n_frames));
  for (int f = 0; f < n_frames; ++f) {
    const int count = rand.uniform_int(0, max_boxes);
    for (int i = 0; i < count; ++i) {
      const Box& anchor = anchors[static_cast<std::size_t>(rand.uniform_int(0, 1))];
      Box b = testutil::near_box(rand, anchor);
      if (rand.uniform() < 0.3) {
        b = b.translated(rand.uniform(0.4, 1.2) * anchor.width(),
                         rand.uniform(-0.4, 0.4) * anchor.height());
      }
      frames[static_cast<std::size_t>(f)].push_back({b, rand.uniform(), i});
    }
    for (Box& anchor : anchors) {
      anchor = anchor.translated(rand.uniform(-3.0, 3.0), rand.uniform(-3.0, 3.0));
    }
  }
  return frames;
}

}  // namespace

TEST_CASE("per-frame suppression validation and empty input") {
  std::vector<Detection> dets{det(Box(0, 0, 4, 4), {0.1, 0.9})};
  CHECK_THROWS_AS(frame_nms(dets, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(frame_nms(dets, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(frame_nms(dets, 0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(frame_nms(dets, 2, 0.4), std::invalid_argument);
  CHECK(frame_nms({}, 1, 0.4).empty());
}

TEST_CASE("per-frame suppression on a hand case") {
  const Box base(10, 10, 20, 20);
  std::vector<Detection> dets{
      det(base.translated(1, 0), {0.1, 0.8}),   // loses to index 2
      det(base.translated(40, 0), {0.1, 0.6}),  // separate object
      det(base, {0.1, 0.9}),                    // best
  };
  const auto kept = frame_nms(dets, 1, 0.4);
  CHECK(kept == std::vector<int>{2, 1});
}

TEST_CASE("per-frame suppression matches the greedy reference") {
  tubelink::rng::Random rand(4600);
  for (int it = 0; it < 400; ++it) {
    std::vector<Detection> dets;
    const Box anchor = testutil::random_box(rand);
    const int n = rand.uniform_int(1, 12);
    for (int i = 0; i < n; ++i) {
      Box b = testutil::near_box(rand, anchor);
      if (rand.uniform() < 0.4) {
        b = b.translated(rand.uniform(-1.5, 1.5) * anchor.width(),
                         rand.uniform(-1.5, 1.5) * anchor.height());
      }
      dets.push_back({b, testutil::random_scores(rand, 2)});
    }
    const int class_id = rand.uniform_int(1, 2);
    const double threshold = rand.uniform(0.2, 0.7);

    std::vector<double> scores;
    for (const Detection& d : dets) {
      scores.push_back(d.scores[static_cast<std::size_t>(class_id)]);
    }
    const auto expected = testutil::greedy_keep_reference(
        scores,
        [&](int a, int b) {
          return tubelink::iou(dets[static_cast<std::size_t>(a)].box,
                               dets[static_cast<std::size_t>(b)].box);
        },
        threshold);
    CHECK(frame_nms(dets, class_id, threshold) == expected);
  }
}

TEST_CASE("best path follows a clean run") {
  const Box base(10, 10, 30, 30);
  std::vector<std::vector<ScoredBox>> frames{
      {{base, 0.2, 0}},
      {{base.translated(1, 0), 0.3, 0}},
      {{base.translated(2, 0), 0.28, 0}},
  };
  const SeqPath path = seq_nms_best_path(frames, all_alive(frames), 0.5);
  CHECK(path.total == doctest::Approx(0.78));
  REQUIRE(path.nodes.size() == 3);
  CHECK(path.nodes[0] == std::pair<int, int>{0, 0});
  CHECK(path.nodes[2] == std::pair<int, int>{2, 0});
}

TEST_CASE("a broken link splits the path") {
  const Box base(10, 10, 30, 30);
  std::vector<std::vector<ScoredBox>> frames{
      {{base, 0.6, 0}},
      {{Box(200, 200, 220, 220), 0.5, 0}},  // no link to frame 0
      {{Box(201, 200, 221, 220), 0.55, 0}},
  };
  const SeqPath path = seq_nms_best_path(frames, all_alive(frames), 0.5);
  // the two-frame tail run beats the isolated strong box
  CHECK(path.total == doctest::Approx(1.05));
  REQUIRE(path.nodes.size() == 2);
  CHECK(path.nodes[0].first == 1);

  // nothing alive -> empty path
  std::vector<std::vector<char>> dead(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    dead[f].assign(frames[f].size(), 0);
  }
  CHECK(seq_nms_best_path(frames, dead, 0.5).nodes.empty());
}

TEST_CASE("best path total matches exhaustive enumeration") {
  tubelink::rng::Random rand(4601);
  for (int it = 0; it < 600; ++it) {
    const auto frames = random_frames(rand, rand.uniform_int(1, 4), 4);
    auto alive = all_alive(frames);
    // sometimes knock boxes out, as the association loop would
    if (it % 3 == 0) {
      for (auto& frame : alive) {
        for (auto& a : frame) {
          if (rand.uniform() < 0.3) a = 0;
        }
      }
    }
    const SeqPath path = seq_nms_best_path(frames, alive, 0.5);
    const double expected =
        testutil::best_path_total_reference(frames, alive, 0.5);
    if (expected < 0.0) {
      CHECK(path.nodes.empty());
    } else {
      CHECK(path.total == expected);
      // the reported nodes really produce the reported total
      double sum = 0.0;
      for (std::size_t k = 0; k < path.nodes.size(); ++k) {
        const auto& [f, i] = path.nodes[k];
        sum += frames[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)].score;
        if (k > 0) {
          CHECK(f == path.nodes[k - 1].first + 1);
          const auto& prev = frames[static_cast<std::size_t>(f - 1)]
                                   [static_cast<std::size_t>(path.nodes[k - 1].second)];
          CHECK(tubelink::iou(prev.box,
                              frames[static_cast<std::size_t>(f)]
                                    [static_cast<std::size_t>(i)].box) >= 0.5);
        }
      }
      CHECK(path.total == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("association rescoring spreads the path score") {
  const Box base(10, 10, 30, 30);
  std::vector<std::vector<ScoredBox>> frames{
      {{base, 0.2, 0}},
      {{base.translated(1, 0), 0.3, 0}},
      {{base.translated(2, 0), 0.28, 0}},
  };

  SUBCASE("average") {
    const auto out = seq_nms_link(frames, {0.5, 0.4, SeqRescore::kAvg});
    REQUIRE(out.size() == 3);
    for (const auto& frame : out) {
      REQUIRE(frame.size() == 1);
      CHECK(frame[0].score == doctest::Approx(0.26));
    }
  }
  SUBCASE("maximum") {
    const auto out = seq_nms_link(frames, {0.5, 0.4, SeqRescore::kMax});
    for (const auto& frame : out) {
      REQUIRE(frame.size() == 1);
      CHECK(frame[0].score == doctest::Approx(0.3));
    }
  }
}

TEST_CASE("association suppresses in-frame rivals of path members") {
  const Box base(10, 10, 30, 30);
  const Box rival = base.translated(2, 0);  // IoU ~0.8 with base
  std::vector<std::vector<ScoredBox>> frames{
      {{base, 0.8, 0}, {rival, 0.5, 1}},
      {{base.translated(1, 0), 0.7, 0}},
  };
  const auto out = seq_nms_link(frames, {0.5, 0.4, SeqRescore::kAvg});
  REQUIRE(out[0].size() == 1);  // the rival died with the first path
  CHECK(out[0][0].src_index == 0);
  CHECK(out[0][0].score == doctest::Approx(0.75));
  REQUIRE(out[1].size() == 1);
  CHECK(out[1][0].score == doctest::Approx(0.75));

  // a distant box survives as its own single-frame path
  frames[1].push_back({Box(200, 200, 220, 220), 0.4, 7});
  const auto out2 = seq_nms_link(frames, {0.5, 0.4, SeqRescore::kAvg});
  REQUIRE(out2[1].size() == 2);
  CHECK(out2[1][1].src_index == 7);
  CHECK(out2[1][1].score == doctest::Approx(0.4));
}

TEST_CASE("association emits each surviving box once, scores sorted") {
  tubelink::rng::Random rand(4602);
  for (int it = 0; it < 150; ++it) {
    const auto frames = random_frames(rand, rand.uniform_int(1, 5), 4);
    const auto out = seq_nms_link(frames, {0.5, 0.4, SeqRescore::kAvg});
    REQUIRE(out.size() == frames.size());
    for (std::size_t f = 0; f < out.size(); ++f) {
      std::set<int> seen;
      for (std::size_t i = 0; i < out[f].size(); ++i) {
        CHECK(seen.insert(out[f][i].src_index).second);
        if (i > 0) CHECK(out[f][i - 1].score >= out[f][i].score);
      }
      CHECK(out[f].size() <= frames[f].size());
    }
  }
}

TEST_CASE("association threshold validation") {
  std::vector<std::vector<ScoredBox>> frames{{{Box(0, 0, 4, 4), 0.5, 0}}};
  CHECK_THROWS_AS(seq_nms_link(frames, {0.0, 0.4, SeqRescore::kAvg}),
                  std::invalid_argument);
  CHECK_THROWS_AS(seq_nms_link(frames, {0.5, 1.0, SeqRescore::kAvg}),
                  std::invalid_argument);
}
