#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tubelink/config.hpp"
#include "tubelink/io.hpp"
#include "tubelink/synth.hpp"

using tubelink::AlignedCorpus;
using tubelink::Box;
using tubelink::Corpus;
using tubelink::CorpusSpec;
using tubelink::LoadedDetections;
using tubelink::LoadedGroundTruth;
using tubelink::PipelineConfig;
using tubelink::ScoredRecord;
using tubelink::TubeletRecord;
using tubelink::align_corpus;
using tubelink::apply_config_entry;
using tubelink::load_config_file;
using tubelink::load_detections_jsonl;
using tubelink::load_ground_truth_jsonl;
using tubelink::load_scored_detections_jsonl;
using tubelink::resolved_config_text;
using tubelink::write_text_file;

namespace {

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("tubelink_io_test_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("a generated corpus survives the disk round trip unchanged") {
  TempDir dir;
  CorpusSpec spec;
  spec.seed = 21;
  spec.n_videos = 4;
  spec.frames_per_video = 15;
  spec.occlusion_event_rate = 0.2;
  spec.occlusion_len_min = 2;
  spec.occlusion_len_max = 4;
  const Corpus corpus = tubelink::generate_corpus(spec, 1);

  tubelink::write_detections_jsonl(dir.file("dets.jsonl"), corpus);
  tubelink::write_ground_truth_jsonl(dir.file("gt.jsonl"), corpus);

  const LoadedDetections dets = load_detections_jsonl(dir.file("dets.jsonl"));
  const LoadedGroundTruth gt = load_ground_truth_jsonl(dir.file("gt.jsonl"));
  const AlignedCorpus aligned = align_corpus(dets, gt);

  CHECK(aligned.has_gt);
  CHECK(aligned.num_classes == spec.num_classes);
  REQUIRE(aligned.video_ids.size() == 4);
  for (std::size_t v = 0; v < 4; ++v) {
    const auto& video = corpus.videos[v];
    CHECK(aligned.video_ids[v] == video.video_id);

    REQUIRE(aligned.videos[v].size() == video.detections.size());
    for (std::size_t f = 0; f < video.detections.size(); ++f) {
      const auto& orig = video.detections[f];
      const auto& redux = aligned.videos[v][f];
      CHECK(redux.frame == orig.frame);
      REQUIRE(redux.dets.size() == orig.dets.size());
      for (std::size_t d = 0; d < orig.dets.size(); ++d) {
        CHECK(redux.dets[d].box == orig.dets[d].box);
        CHECK(redux.dets[d].scores == orig.dets[d].scores);
      }
    }

    REQUIRE(aligned.gt[v].size() == video.tracks.size());
    for (std::size_t t = 0; t < video.tracks.size(); ++t) {
      const auto& orig = video.tracks[t];
      const auto& redux = aligned.gt[v][t];
      CHECK(redux.track_id == orig.track_id);
      CHECK(redux.class_id == orig.class_id);
      CHECK(redux.start_frame == orig.start_frame);
      REQUIRE(redux.boxes.size() == orig.boxes.size());
      for (std::size_t k = 0; k < orig.boxes.size(); ++k) {
        CHECK(redux.boxes[k] == orig.boxes[k]);
      }
      // flags equal as vectors (loader materializes them even when the
      // generator produced none)
      REQUIRE(redux.occluded.size() == orig.occluded.size());
      for (std::size_t k = 0; k < orig.occluded.size(); ++k) {
        CHECK(redux.occluded[k] == orig.occluded[k]);
      }
    }
  }
}

TEST_CASE("single-class rows expand into full score vectors") {
  TempDir dir;
  write_text_file(
      dir.file("d.jsonl"),
      R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "label": 2, "score": 0.7})"
      "\n"
      R"({"video_id": "a", "frame": 2, "bbox": [5, 5, 20, 20], "label": 1, "score": 0.4})"
      "\n");

  const LoadedDetections plain = load_detections_jsonl(dir.file("d.jsonl"));
  CHECK(plain.num_classes == 2);  // highest label decides
  REQUIRE(plain.videos.size() == 1);
  REQUIRE(plain.videos[0].size() == 2);
  const auto& det = plain.videos[0][0].dets.at(0);
  REQUIRE(det.scores.size() == 3);
  CHECK(det.scores[0] == 0.0);
  CHECK(det.scores[1] == 0.0);
  CHECK(det.scores[2] == 0.7);

  const LoadedDetections hinted = load_detections_jsonl(dir.file("d.jsonl"), 4);
  CHECK(hinted.num_classes == 4);
  CHECK(hinted.videos[0][1].dets.at(0).scores.size() == 5);
}

TEST_CASE("detection files mixing forms must stay consistent") {
  TempDir dir;
  write_text_file(
      dir.file("ok.jsonl"),
      R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "scores": [0.1, 0.2, 0.7]})"
      "\n"
      R"({"video_id": "a", "frame": 1, "bbox": [1, 1, 11, 11], "label": 2, "score": 0.5})"
      "\n");
  const LoadedDetections mixed = load_detections_jsonl(dir.file("ok.jsonl"));
  CHECK(mixed.num_classes == 2);
  CHECK(mixed.videos[0][0].dets.at(1).scores.values() ==
        std::vector<double>{0.0, 0.0, 0.5});

  write_text_file(
      dir.file("bad.jsonl"),
      R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "scores": [0.1, 0.2, 0.7]})"
      "\n"
      R"({"video_id": "a", "frame": 1, "bbox": [1, 1, 11, 11], "label": 9, "score": 0.5})"
      "\n");
  CHECK(contains(error_of([&] { load_detections_jsonl(dir.file("bad.jsonl")); }),
                 "label exceeds score vector classes"));
}

TEST_CASE("malformed detection rows name the offending line") {
  TempDir dir;
  const std::string good =
      R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "scores": [0.1, 0.9]})";
  auto check_error = [&](const std::string& row, const std::string& needle) {
    write_text_file(dir.file("x.jsonl"), good + "\n" + row + "\n");
    const std::string err =
        error_of([&] { load_detections_jsonl(dir.file("x.jsonl")); });
    CHECK(contains(err, ":2: "));
    CHECK(contains(err, needle));
  };

  check_error("not json at all", "invalid JSON");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10]})",
              "bbox must be an array [x1, y1, x2, y2]");
  check_error(R"({"video_id": "a", "frame": 0, "bbox": [0, 0, 1, 1], "scores": [0.5, 0.5]})",
              "frame must be >= 1");
  check_error(R"({"video_id": 3, "frame": 1, "bbox": [0, 0, 1, 1], "scores": [0.5, 0.5]})",
              "video_id must be a string");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 1, 1]})",
              "record needs either scores or label+score");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 1, 1], "scores": [0.5]})",
              "scores must be an array of length >= 2");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 1, 1], "scores": [0.5, 0.1, 0.4]})",
              "inconsistent score vector length");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 1, 1], "label": 0, "score": 0.5})",
              "label must be >= 1");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 1, 1], "label": 1, "score": 1.5})",
              "score must lie in [0, 1]");
  check_error(R"({"video_id": "a", "frame": 1, "bbox": [5, 0, 1, 1], "scores": [0.5, 0.5]})",
              "box");  // inverted corners surface the box validation text

  CHECK(contains(error_of([&] { load_detections_jsonl(dir.file("nope.jsonl")); }),
                 "cannot open"));

  // blank lines are skipped, not errors
  write_text_file(dir.file("gaps.jsonl"), "\n" + good + "\n\n");
  CHECK(load_detections_jsonl(dir.file("gaps.jsonl")).videos.size() == 1);
}

TEST_CASE("ground truth loading sorts rows and enforces track shape") {
  TempDir dir;
  // frames deliberately out of order; track 2 carries occlusion flags
  write_text_file(
      dir.file("gt.jsonl"),
      R"({"video_id": "a", "frame": 3, "bbox": [2, 0, 12, 10], "track_id": 1, "class_id": 2})"
      "\n"
      R"({"video_id": "a", "frame": 2, "bbox": [1, 0, 11, 10], "track_id": 1, "class_id": 2})"
      "\n"
      R"({"video_id": "a", "frame": 4, "bbox": [3, 0, 13, 10], "track_id": 1, "class_id": 2})"
      "\n"
      R"({"video_id": "a", "frame": 1, "bbox": [50, 50, 60, 60], "track_id": 2, "class_id": 1, "occluded": true})"
      "\n"
      R"({"video_id": "a", "frame": 2, "bbox": [51, 50, 61, 60], "track_id": 2, "class_id": 1, "occluded": false})"
      "\n");

  const LoadedGroundTruth gt = load_ground_truth_jsonl(dir.file("gt.jsonl"));
  REQUIRE(gt.video_ids == std::vector<std::string>{"a"});
  REQUIRE(gt.tracks[0].size() == 2);
  const auto& t1 = gt.tracks[0][0];
  CHECK(t1.track_id == 1);
  CHECK(t1.class_id == 2);
  CHECK(t1.start_frame == 2);
  REQUIRE(t1.boxes.size() == 3);
  CHECK(t1.boxes[0] == Box(1, 0, 11, 10));
  CHECK(t1.boxes[2] == Box(3, 0, 13, 10));
  CHECK_FALSE(t1.occluded_at(3));  // defaults to false when absent
  const auto& t2 = gt.tracks[0][1];
  CHECK(t2.occluded_at(1));
  CHECK_FALSE(t2.occluded_at(2));

  SUBCASE("a missing frame is a gap") {
    write_text_file(
        dir.file("gap.jsonl"),
        R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "track_id": 1, "class_id": 1})"
        "\n"
        R"({"video_id": "a", "frame": 3, "bbox": [2, 0, 12, 10], "track_id": 1, "class_id": 1})"
        "\n");
    CHECK(contains(
        error_of([&] { load_ground_truth_jsonl(dir.file("gap.jsonl")); }),
        "track 1 in video a has a gap at frame 2"));
  }
  SUBCASE("a track keeps one class") {
    write_text_file(
        dir.file("cls.jsonl"),
        R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "track_id": 1, "class_id": 1})"
        "\n"
        R"({"video_id": "a", "frame": 2, "bbox": [1, 0, 11, 10], "track_id": 1, "class_id": 2})"
        "\n");
    CHECK(contains(
        error_of([&] { load_ground_truth_jsonl(dir.file("cls.jsonl")); }),
        "track 1 changes class within video a"));
  }
  SUBCASE("identity fields are mandatory") {
    write_text_file(
        dir.file("id.jsonl"),
        R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "class_id": 1})"
        "\n");
    CHECK(contains(
        error_of([&] { load_ground_truth_jsonl(dir.file("id.jsonl")); }),
        "ground truth needs track_id and class_id"));
    write_text_file(
        dir.file("cls0.jsonl"),
        R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "track_id": 1, "class_id": 0})"
        "\n");
    CHECK(contains(
        error_of([&] { load_ground_truth_jsonl(dir.file("cls0.jsonl")); }),
        "class_id must be >= 1"));
  }
}

TEST_CASE("scored records round trip; tubelet ids only when assigned") {
  TempDir dir;
  std::vector<ScoredRecord> records;
  records.push_back({"a", 1, Box(0, 0, 10, 10), 2, 0.75, 3});
  records.push_back({"a", 2, Box(1, 1, 11, 11), 1, 0.5, -1});
  tubelink::write_scored_jsonl(dir.file("s.jsonl"), records);

  const auto lines = read_lines(dir.file("s.jsonl"));
  REQUIRE(lines.size() == 2);
  CHECK(contains(lines[0], "tubelet_id"));
  CHECK_FALSE(contains(lines[1], "tubelet_id"));

  const auto redux = load_scored_detections_jsonl(dir.file("s.jsonl"));
  REQUIRE(redux.size() == 2);
  CHECK(redux[0].video_id == "a");
  CHECK(redux[0].frame == 1);
  CHECK(redux[0].box == records[0].box);
  CHECK(redux[0].label == 2);
  CHECK(redux[0].score == 0.75);
  CHECK(redux[0].tubelet_id == 3);
  CHECK(redux[1].tubelet_id == -1);

  write_text_file(dir.file("bad.jsonl"),
                  R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 1, 1]})"
                  "\n");
  CHECK(contains(
      error_of([&] { load_scored_detections_jsonl(dir.file("bad.jsonl")); }),
      "record needs label and score"));
}

TEST_CASE("tubelet records serialize one JSON object per line") {
  TempDir dir;
  std::vector<TubeletRecord> records;
  records.push_back({"v0001", 4, 2, 0.9, 3, {Box(0, 0, 10, 10), Box(1, 0, 11, 10)}});
  records.push_back({"v0002", 0, 1, 0.4, 1, {Box(5, 5, 9, 9)}});
  tubelink::write_tubelets_jsonl(dir.file("t.jsonl"), records);

  const auto lines = read_lines(dir.file("t.jsonl"));
  REQUIRE(lines.size() == 2);
  const auto first = nlohmann::json::parse(lines[0]);
  CHECK(first["video_id"] == "v0001");
  CHECK(first["tubelet_id"] == 4);
  CHECK(first["label"] == 2);
  CHECK(first["score"] == 0.9);
  CHECK(first["start_frame"] == 3);
  REQUIRE(first["boxes"].size() == 2);
  REQUIRE(first["boxes"][1].size() == 4);
  CHECK(first["boxes"][1][0] == 1.0);
  const auto second = nlohmann::json::parse(lines[1]);
  CHECK(second["boxes"].size() == 1);
}

TEST_CASE("alignment unions video ids and pads to the annotated span") {
  TempDir dir;
  write_text_file(
      dir.file("d.jsonl"),
      R"({"video_id": "b", "frame": 2, "bbox": [0, 0, 10, 10], "scores": [0.2, 0.8]})"
      "\n");
  write_text_file(
      dir.file("gt.jsonl"),
      R"({"video_id": "a", "frame": 1, "bbox": [0, 0, 10, 10], "track_id": 1, "class_id": 1})"
      "\n"
      R"({"video_id": "a", "frame": 2, "bbox": [1, 0, 11, 10], "track_id": 1, "class_id": 1})"
      "\n"
      R"({"video_id": "b", "frame": 4, "bbox": [0, 0, 10, 10], "track_id": 1, "class_id": 1})"
      "\n"
      R"({"video_id": "b", "frame": 5, "bbox": [1, 0, 11, 10], "track_id": 1, "class_id": 1})"
      "\n");

  const AlignedCorpus aligned = align_corpus(
      load_detections_jsonl(dir.file("d.jsonl")),
      std::optional<LoadedGroundTruth>(load_ground_truth_jsonl(dir.file("gt.jsonl"))));
  REQUIRE(aligned.video_ids == std::vector<std::string>{"a", "b"});
  CHECK(aligned.has_gt);
  // video a: no detections, padded to the ground-truth span
  REQUIRE(aligned.videos[0].size() == 2);
  CHECK(aligned.videos[0][1].frame == 2);
  CHECK(aligned.videos[0][1].dets.empty());
  // video b: detections end at frame 2, ground truth at 5
  REQUIRE(aligned.videos[1].size() == 5);
  CHECK(aligned.videos[1][4].frame == 5);
  CHECK(aligned.videos[1][1].dets.size() == 1);
  REQUIRE(aligned.gt[1].size() == 1);
  CHECK(aligned.gt[1][0].start_frame == 4);

  SUBCASE("without ground truth") {
    const AlignedCorpus plain =
        align_corpus(load_detections_jsonl(dir.file("d.jsonl")), std::nullopt);
    CHECK_FALSE(plain.has_gt);
    REQUIRE(plain.video_ids == std::vector<std::string>{"b"});
    CHECK(plain.gt[0].empty());
  }
  SUBCASE("annotated classes must exist on the detection side") {
    write_text_file(
        dir.file("gt7.jsonl"),
        R"({"video_id": "b", "frame": 1, "bbox": [0, 0, 10, 10], "track_id": 1, "class_id": 7})"
        "\n");
    CHECK(contains(
        error_of([&] {
          align_corpus(load_detections_jsonl(dir.file("d.jsonl")),
                       std::optional<LoadedGroundTruth>(
                           load_ground_truth_jsonl(dir.file("gt7.jsonl"))));
        }),
        "ground truth class 7 exceeds detection classes"));
  }
}

TEST_CASE("configuration echo is lossless") {
  PipelineConfig config;
  config.segment_len = 10;
  config.tnms_thresh = 0.55;
  config.agg = tubelink::AggregationMode::kMax;
  config.baseline = tubelink::BaselineKind::kSeqNms;
  config.seqnms_rescore = tubelink::SeqRescore::kMax;
  config.seed = 987654321098ull;
  config.workers = 3;
  config.eval.speed_window = 4;
  config.corpus.n_videos = 7;
  config.corpus.degradation.jitter_sigma = 0.025;
  config.corpus.motion.fast_speed = 0.41;

  const std::string text = resolved_config_text(config);
  CHECK(contains(text, "segment_len = 10\n"));
  CHECK(contains(text, "agg = max\n"));
  CHECK(contains(text, "baseline = seqnms\n"));
  CHECK(contains(text, "seqnms_rescore = max\n"));
  CHECK(contains(text, "seed = 987654321098\n"));
  CHECK(contains(text, "corpus.jitter_sigma = 0.025\n"));
  CHECK(contains(text, "corpus.fast_speed = 0.41\n"));

  TempDir dir;
  write_text_file(dir.file("run.cfg"), text);
  const PipelineConfig redux = load_config_file(dir.file("run.cfg"), PipelineConfig{});
  CHECK(resolved_config_text(redux) == text);
}

TEST_CASE("config files accept comments and reject malformed lines") {
  TempDir dir;
  write_text_file(dir.file("ok.cfg"),
                  "# toolkit settings\n"
                  "\n"
                  "  segment_len = 3   # short segments\n"
                  "corpus.n_videos=9\n");
  const PipelineConfig config =
      load_config_file(dir.file("ok.cfg"), PipelineConfig{});
  CHECK(config.segment_len == 3);
  CHECK(config.corpus.n_videos == 9);

  write_text_file(dir.file("noeq.cfg"), "segment_len 3\n");
  const std::string noeq =
      error_of([&] { load_config_file(dir.file("noeq.cfg"), PipelineConfig{}); });
  CHECK(contains(noeq, ":1: expected key = value"));

  write_text_file(dir.file("unk.cfg"), "# fine\nbogus = 1\n");
  const std::string unk =
      error_of([&] { load_config_file(dir.file("unk.cfg"), PipelineConfig{}); });
  CHECK(contains(unk, ":2: unknown configuration key: bogus"));

  write_text_file(dir.file("badv.cfg"), "segment_len = x\n");
  const std::string badv =
      error_of([&] { load_config_file(dir.file("badv.cfg"), PipelineConfig{}); });
  CHECK(contains(badv, "segment_len: "));
  CHECK(contains(badv, "not an integer"));

  CHECK(contains(error_of([&] {
                   load_config_file(dir.file("missing.cfg"), PipelineConfig{});
                 }),
                 "cannot open"));
}

TEST_CASE("single assignments cover every value kind") {
  PipelineConfig config;
  apply_config_entry(config, "segment_len", "4");
  apply_config_entry(config, "tnms_thresh", "0.33");
  apply_config_entry(config, "agg", "mean");
  apply_config_entry(config, "baseline", "union-seqnms");
  apply_config_entry(config, "seqnms_rescore", "max");
  apply_config_entry(config, "seed", "999");
  apply_config_entry(config, "match_iou", "0.6");
  apply_config_entry(config, "corpus.drop_len_max", "9");
  apply_config_entry(config, "corpus.medium_frac", "0.5");

  CHECK(config.segment_len == 4);
  CHECK(config.tnms_thresh == 0.33);
  CHECK(config.agg == tubelink::AggregationMode::kMean);
  CHECK(config.baseline == tubelink::BaselineKind::kUnionSeqNms);
  CHECK(config.seqnms_rescore == tubelink::SeqRescore::kMax);
  CHECK(config.seed == 999);
  CHECK(config.eval.match_iou == 0.6);
  CHECK(config.corpus.degradation.drop_len_max == 9);
  CHECK(config.corpus.motion.medium_frac == 0.5);

  CHECK_THROWS_WITH_AS(apply_config_entry(config, "zap", "1"),
                       "unknown configuration key: zap", std::invalid_argument);
  CHECK(contains(error_of([&] { apply_config_entry(config, "tnms_thresh", "abc"); }),
                 "tnms_thresh: "));
  CHECK(contains(error_of([&] { apply_config_entry(config, "baseline", "frob"); }),
                 "unknown baseline: frob"));
}

TEST_CASE("name round trips for the enumerated settings") {
  using tubelink::BaselineKind;
  using tubelink::SeqRescore;
  for (BaselineKind kind : {BaselineKind::kNone, BaselineKind::kStatic,
                            BaselineKind::kSeqNms, BaselineKind::kUnionSeqNms}) {
    CHECK(tubelink::parse_baseline_kind(tubelink::to_string(kind)) == kind);
  }
  for (SeqRescore mode : {SeqRescore::kAvg, SeqRescore::kMax}) {
    CHECK(tubelink::parse_seq_rescore(tubelink::to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(tubelink::parse_baseline_kind("sometimes"),
                  std::invalid_argument);
  CHECK_THROWS_AS(tubelink::parse_seq_rescore("median"), std::invalid_argument);
}

TEST_CASE("validation rejects out-of-range settings") {
  const PipelineConfig good;
  CHECK_NOTHROW(good.validate());

  auto expect = [](auto&& tweak, const char* message) {
    PipelineConfig config;
    tweak(config);
    CHECK_THROWS_WITH_AS(config.validate(), message, std::invalid_argument);
  };
  expect([](PipelineConfig& c) { c.segment_len = 0; },
         "segment_len must be >= 1");
  expect([](PipelineConfig& c) { c.tnms_thresh = 0.0; },
         "tnms_thresh must be in (0, 1)");
  expect([](PipelineConfig& c) { c.link_thresh = 1.0; },
         "link_thresh must be in (0, 1)");
  expect([](PipelineConfig& c) { c.pair_iou_thresh = -0.1; },
         "pair_iou_thresh must be in (0, 1)");
  expect([](PipelineConfig& c) { c.nms_thresh = 1.2; },
         "nms_thresh must be in (0, 1)");
  expect([](PipelineConfig& c) { c.seqnms_link_iou = 0.0; },
         "seqnms_link_iou must be in (0, 1)");
  expect([](PipelineConfig& c) { c.eval.match_iou = 1.0; },
         "match_iou must be in (0, 1)");
  expect([](PipelineConfig& c) { c.eval.speed_window = 0; },
         "speed_window must be >= 1");
  expect(
      [](PipelineConfig& c) {
        c.eval.speed_slow_iou = 0.6;
        c.eval.speed_fast_iou = 0.8;
      },
      "speed band thresholds must satisfy 0 < fast <= slow < 1");
  expect([](PipelineConfig& c) { c.workers = -1; }, "workers must be >= 0");
  expect([](PipelineConfig& c) { c.num_classes = -2; },
         "num_classes must be >= 0");
}
