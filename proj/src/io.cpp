#include "tubelink/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tubelink {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(const std::string& path, int line,
                             const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

// Applies fn to every non-empty line, reporting parse failures with the
// line number.
template <typename Fn>
void for_each_record(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      line_error(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    fn(record, line_no);
  }
}

Box parse_bbox(const json& record, const std::string& path, int line) {
  if (!record.contains("bbox") || !record["bbox"].is_array() ||
      record["bbox"].size() != 4) {
    line_error(path, line, "bbox must be an array [x1, y1, x2, y2]");
  }
  const auto& b = record["bbox"];
  try {
    return Box(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
               b[3].get<double>());
  } catch (const std::invalid_argument& e) {
    line_error(path, line, e.what());
  }
}

std::string get_video_id(const json& record, const std::string& path, int line) {
  if (!record.contains("video_id") || !record["video_id"].is_string()) {
    line_error(path, line, "video_id must be a string");
  }
  return record["video_id"].get<std::string>();
}

int get_frame(const json& record, const std::string& path, int line) {
  if (!record.contains("frame") || !record["frame"].is_number_integer()) {
    line_error(path, line, "frame must be an integer");
  }
  const int frame = record["frame"].get<int>();
  if (frame < 1) line_error(path, line, "frame must be >= 1");
  return frame;
}

json box_to_json(const Box& box) {
  return json::array({box.x1(), box.y1(), box.x2(), box.y2()});
}

}  // namespace

LoadedDetections load_detections_jsonl(const std::string& path,
                                       int num_classes_hint) {
  struct Row {
    std::string video_id;
    int frame;
    Box box;
    std::vector<double> scores;  // empty for single-class rows
    int label;
    double score;
  };
  std::vector<Row> rows;
  int vector_len = 0;  // length of full score vectors, once seen
  int max_label = 0;

  for_each_record(path, [&](const json& record, int line) {
    Row row{get_video_id(record, path, line), get_frame(record, path, line),
            parse_bbox(record, path, line), {}, 0, 0.0};
    if (record.contains("scores")) {
      if (!record["scores"].is_array() || record["scores"].size() < 2) {
        line_error(path, line, "scores must be an array of length >= 2");
      }
      for (const auto& v : record["scores"]) {
        if (!v.is_number()) line_error(path, line, "scores must be numeric");
        row.scores.push_back(v.get<double>());
      }
      const int len = static_cast<int>(row.scores.size());
      if (vector_len == 0) {
        vector_len = len;
      } else if (vector_len != len) {
        line_error(path, line, "inconsistent score vector length");
      }
    } else if (record.contains("label") && record.contains("score")) {
      row.label = record["label"].get<int>();
      row.score = record["score"].get<double>();
      if (row.label < 1) line_error(path, line, "label must be >= 1");
      if (row.score < 0.0 || row.score > 1.0) {
        line_error(path, line, "score must lie in [0, 1]");
      }
      max_label = std::max(max_label, row.label);
    } else {
      line_error(path, line, "record needs either scores or label+score");
    }
    rows.push_back(std::move(row));
  });

  LoadedDetections out;
  out.num_classes = vector_len > 0 ? vector_len - 1
                                   : std::max(num_classes_hint, max_label);
  if (vector_len > 0 && max_label > out.num_classes) {
    throw std::runtime_error(path + ": label exceeds score vector classes");
  }

  std::map<std::string, int> max_frame;
  for (const Row& row : rows) {
    int& mf = max_frame[row.video_id];
    mf = std::max(mf, row.frame);
  }
  out.video_ids.reserve(max_frame.size());
  for (const auto& [id, mf] : max_frame) {
    out.video_ids.push_back(id);
    VideoDetections video(static_cast<std::size_t>(mf));
    for (int f = 1; f <= mf; ++f) video[static_cast<std::size_t>(f - 1)].frame = f;
    out.videos.push_back(std::move(video));
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < out.video_ids.size(); ++i) {
    index[out.video_ids[i]] = i;
  }

  for (Row& row : rows) {
    std::vector<double> scores = std::move(row.scores);
    if (scores.empty()) {
      scores.assign(static_cast<std::size_t>(out.num_classes) + 1, 0.0);
      scores[static_cast<std::size_t>(row.label)] = row.score;
    }
    out.videos[index[row.video_id]][static_cast<std::size_t>(row.frame - 1)]
        .dets.push_back({row.box, ScoreVector(std::move(scores))});
  }
  return out;
}

LoadedGroundTruth load_ground_truth_jsonl(const std::string& path) {
  struct GtRow {
    int frame;
    Box box;
    bool occluded;
  };
  std::map<std::string, std::map<int, std::vector<GtRow>>> by_video;  // -> track
  std::map<std::string, std::map<int, int>> class_of;

  for_each_record(path, [&](const json& record, int line) {
    const std::string video = get_video_id(record, path, line);
    const int frame = get_frame(record, path, line);
    const Box box = parse_bbox(record, path, line);
    if (!record.contains("track_id") || !record.contains("class_id")) {
      line_error(path, line, "ground truth needs track_id and class_id");
    }
    const int track = record["track_id"].get<int>();
    const int cls = record["class_id"].get<int>();
    if (cls < 1) line_error(path, line, "class_id must be >= 1");
    const bool occluded =
        record.contains("occluded") && record["occluded"].get<bool>();

    auto [it, inserted] = class_of[video].try_emplace(track, cls);
    if (!inserted && it->second != cls) {
      line_error(path, line, "track " + std::to_string(track) +
                                 " changes class within video " + video);
    }
    by_video[video][track].push_back({frame, box, occluded});
  });

  LoadedGroundTruth out;
  for (auto& [video, tracks] : by_video) {
    out.video_ids.push_back(video);
    std::vector<GroundTruthTrack> list;
    for (auto& [track_id, rows] : tracks) {
      std::sort(rows.begin(), rows.end(),
                [](const GtRow& a, const GtRow& b) { return a.frame < b.frame; });
      GroundTruthTrack track;
      track.track_id = track_id;
      track.class_id = class_of[video][track_id];
      track.start_frame = rows.front().frame;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const int expected = track.start_frame + static_cast<int>(i);
        if (rows[i].frame != expected) {
          throw std::runtime_error(
              path + ": track " + std::to_string(track_id) + " in video " +
              video + " has a gap at frame " + std::to_string(expected));
        }
        track.boxes.push_back(rows[i].box);
        track.occluded.push_back(rows[i].occluded);
      }
      list.push_back(std::move(track));
    }
    out.tracks.push_back(std::move(list));
  }
  return out;
}

std::vector<ScoredRecord> load_scored_detections_jsonl(const std::string& path) {
  std::vector<ScoredRecord> records;
  for_each_record(path, [&](const json& record, int line) {
    ScoredRecord row;
    row.video_id = get_video_id(record, path, line);
    row.frame = get_frame(record, path, line);
    row.box = parse_bbox(record, path, line);
    if (!record.contains("label") || !record.contains("score")) {
      line_error(path, line, "record needs label and score");
    }
    row.label = record["label"].get<int>();
    row.score = record["score"].get<double>();
    if (row.label < 1) line_error(path, line, "label must be >= 1");
    if (record.contains("tubelet_id")) {
      row.tubelet_id = record["tubelet_id"].get<int>();
    }
    records.push_back(std::move(row));
  });
  return records;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_detections_jsonl(const std::string& path, const Corpus& corpus) {
  std::ofstream out = open_out(path);
  for (const SyntheticVideo& video : corpus.videos) {
    for (const FrameDetections& frame : video.detections) {
      for (const Detection& det : frame.dets) {
        json record{{"video_id", video.video_id},
                    {"frame", frame.frame},
                    {"bbox", box_to_json(det.box)},
                    {"scores", det.scores.values()}};
        out << record.dump() << "\n";
      }
    }
  }
}

void write_ground_truth_jsonl(const std::string& path, const Corpus& corpus) {
  std::ofstream out = open_out(path);
  for (const SyntheticVideo& video : corpus.videos) {
    for (const GroundTruthTrack& track : video.tracks) {
      for (int f = track.start_frame; f <= track.end_frame(); ++f) {
        json record{{"video_id", video.video_id},
                    {"frame", f},
                    {"bbox", box_to_json(track.box_at(f))},
                    {"track_id", track.track_id},
                    {"class_id", track.class_id},
                    {"occluded", track.occluded_at(f)}};
        out << record.dump() << "\n";
      }
    }
  }
}

void write_scored_jsonl(const std::string& path,
                        const std::vector<ScoredRecord>& records) {
  std::ofstream out = open_out(path);
  for (const ScoredRecord& row : records) {
    json record{{"video_id", row.video_id},
                {"frame", row.frame},
                {"bbox", box_to_json(row.box)},
                {"label", row.label},
                {"score", row.score}};
    if (row.tubelet_id >= 0) record["tubelet_id"] = row.tubelet_id;
    out << record.dump() << "\n";
  }
}

void write_tubelets_jsonl(const std::string& path,
                          const std::vector<TubeletRecord>& records) {
  std::ofstream out = open_out(path);
  for (const TubeletRecord& row : records) {
    json boxes = json::array();
    for (const Box& b : row.boxes) boxes.push_back(box_to_json(b));
    json record{{"video_id", row.video_id}, {"tubelet_id", row.tubelet_id},
                {"label", row.label},       {"score", row.score},
                {"start_frame", row.start_frame},
                {"boxes", boxes}};
    out << record.dump() << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

AlignedCorpus align_corpus(const LoadedDetections& dets,
                           const std::optional<LoadedGroundTruth>& gt) {
  std::set<std::string> ids(dets.video_ids.begin(), dets.video_ids.end());
  if (gt) ids.insert(gt->video_ids.begin(), gt->video_ids.end());

  AlignedCorpus out;
  out.num_classes = dets.num_classes;
  out.has_gt = gt.has_value();
  out.video_ids.assign(ids.begin(), ids.end());
  out.videos.resize(out.video_ids.size());
  out.gt.resize(out.video_ids.size());

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < out.video_ids.size(); ++i) {
    index[out.video_ids[i]] = i;
  }
  for (std::size_t i = 0; i < dets.video_ids.size(); ++i) {
    out.videos[index.at(dets.video_ids[i])] = dets.videos[i];
  }
  if (gt) {
    for (std::size_t i = 0; i < gt->video_ids.size(); ++i) {
      const std::size_t at = index.at(gt->video_ids[i]);
      out.gt[at] = gt->tracks[i];
      int max_frame = 0;
      for (const GroundTruthTrack& track : out.gt[at]) {
        max_frame = std::max(max_frame, track.end_frame());
        if (track.class_id > out.num_classes) {
          throw std::runtime_error("ground truth class " +
                                   std::to_string(track.class_id) +
                                   " exceeds detection classes");
        }
      }
      VideoDetections& video = out.videos[at];
      while (static_cast<int>(video.size()) < max_frame) {
        video.push_back({static_cast<int>(video.size()) + 1, {}});
      }
    }
  }
  return out;
}

}  // namespace tubelink
