#include "tubelink/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

namespace tubelink {

BaselineKind parse_baseline_kind(const std::string& name) {
  if (name == "none") return BaselineKind::kNone;
  if (name == "static") return BaselineKind::kStatic;
  if (name == "seqnms") return BaselineKind::kSeqNms;
  if (name == "union-seqnms") return BaselineKind::kUnionSeqNms;
  throw std::invalid_argument("unknown baseline: " + name);
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kNone: return "none";
    case BaselineKind::kStatic: return "static";
    case BaselineKind::kSeqNms: return "seqnms";
    case BaselineKind::kUnionSeqNms: return "union-seqnms";
  }
  throw std::invalid_argument("unknown baseline value");
}

SeqRescore parse_seq_rescore(const std::string& name) {
  if (name == "avg") return SeqRescore::kAvg;
  if (name == "max") return SeqRescore::kMax;
  throw std::invalid_argument("unknown rescore mode: " + name);
}

std::string to_string(SeqRescore rescore) {
  return rescore == SeqRescore::kAvg ? "avg" : "max";
}

namespace {

double parse_double(const std::string& value) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: " + value);
  }
  if (used != value.size()) {
    throw std::invalid_argument("not a number: " + value);
  }
  return parsed;
}

int parse_int(const std::string& value) {
  std::size_t used = 0;
  int parsed = 0;
  try {
    parsed = std::stoi(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: " + value);
  }
  if (used != value.size()) {
    throw std::invalid_argument("not an integer: " + value);
  }
  return parsed;
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

struct KeyBinding {
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

KeyBinding bind_double(double PipelineConfig::* field) {
  return {[field](PipelineConfig& c, const std::string& v) { c.*field = parse_double(v); },
          [field](const PipelineConfig& c) { return format_double(c.*field); }};
}

KeyBinding bind_int(int PipelineConfig::* field) {
  return {[field](PipelineConfig& c, const std::string& v) { c.*field = parse_int(v); },
          [field](const PipelineConfig& c) { return std::to_string(c.*field); }};
}

template <typename Sub, typename T>
KeyBinding bind_nested(Sub PipelineConfig::* sub, T Sub::* field) {
  if constexpr (std::is_same_v<T, double>) {
    return {[=](PipelineConfig& c, const std::string& v) { c.*sub.*field = parse_double(v); },
            [=](const PipelineConfig& c) { return format_double(c.*sub.*field); }};
  } else {
    return {[=](PipelineConfig& c, const std::string& v) { c.*sub.*field = parse_int(v); },
            [=](const PipelineConfig& c) { return std::to_string(c.*sub.*field); }};
  }
}

template <typename T>
KeyBinding bind_corpus(T CorpusSpec::* field) {
  return bind_nested(&PipelineConfig::corpus, field);
}

template <typename T>
KeyBinding bind_motion(T MotionParams::* field) {
  if constexpr (std::is_same_v<T, double>) {
    return {[=](PipelineConfig& c, const std::string& v) {
              c.corpus.motion.*field = parse_double(v);
            },
            [=](const PipelineConfig& c) { return format_double(c.corpus.motion.*field); }};
  } else {
    return {[=](PipelineConfig& c, const std::string& v) {
              c.corpus.motion.*field = parse_int(v);
            },
            [=](const PipelineConfig& c) { return std::to_string(c.corpus.motion.*field); }};
  }
}

template <typename T>
KeyBinding bind_degradation(T DegradationParams::* field) {
  if constexpr (std::is_same_v<T, double>) {
    return {[=](PipelineConfig& c, const std::string& v) {
              c.corpus.degradation.*field = parse_double(v);
            },
            [=](const PipelineConfig& c) {
              return format_double(c.corpus.degradation.*field);
            }};
  } else {
    return {[=](PipelineConfig& c, const std::string& v) {
              c.corpus.degradation.*field = parse_int(v);
            },
            [=](const PipelineConfig& c) {
              return std::to_string(c.corpus.degradation.*field);
            }};
  }
}

const std::map<std::string, KeyBinding>& bindings() {
  static const std::map<std::string, KeyBinding> table = [] {
    std::map<std::string, KeyBinding> t;
    t["segment_len"] = bind_int(&PipelineConfig::segment_len);
    t["tnms_thresh"] = bind_double(&PipelineConfig::tnms_thresh);
    t["link_thresh"] = bind_double(&PipelineConfig::link_thresh);
    t["pair_iou_thresh"] = bind_double(&PipelineConfig::pair_iou_thresh);
    t["nms_thresh"] = bind_double(&PipelineConfig::nms_thresh);
    t["seqnms_link_iou"] = bind_double(&PipelineConfig::seqnms_link_iou);
    t["workers"] = bind_int(&PipelineConfig::workers);
    t["num_classes"] = bind_int(&PipelineConfig::num_classes);
    t["agg"] = {[](PipelineConfig& c, const std::string& v) {
                  c.agg = parse_aggregation_mode(v);
                },
                [](const PipelineConfig& c) { return to_string(c.agg); }};
    t["baseline"] = {[](PipelineConfig& c, const std::string& v) {
                       c.baseline = parse_baseline_kind(v);
                     },
                     [](const PipelineConfig& c) { return to_string(c.baseline); }};
    t["seqnms_rescore"] = {
        [](PipelineConfig& c, const std::string& v) {
          c.seqnms_rescore = parse_seq_rescore(v);
        },
        [](const PipelineConfig& c) { return to_string(c.seqnms_rescore); }};
    t["seed"] = {[](PipelineConfig& c, const std::string& v) {
                   std::size_t used = 0;
                   try {
                     c.seed = std::stoull(v, &used);
                   } catch (const std::exception&) {
                     throw std::invalid_argument("not an integer: " + v);
                   }
                   if (used != v.size()) {
                     throw std::invalid_argument("not an integer: " + v);
                   }
                 },
                 [](const PipelineConfig& c) { return std::to_string(c.seed); }};

    t["match_iou"] = bind_nested(&PipelineConfig::eval, &EvalOptions::match_iou);
    t["speed_window"] = bind_nested(&PipelineConfig::eval, &EvalOptions::speed_window);
    t["speed_slow_iou"] = bind_nested(&PipelineConfig::eval, &EvalOptions::speed_slow_iou);
    t["speed_fast_iou"] = bind_nested(&PipelineConfig::eval, &EvalOptions::speed_fast_iou);

    t["corpus.n_videos"] = bind_corpus(&CorpusSpec::n_videos);
    t["corpus.frames_per_video"] = bind_corpus(&CorpusSpec::frames_per_video);
    t["corpus.canvas_w"] = bind_corpus(&CorpusSpec::canvas_w);
    t["corpus.canvas_h"] = bind_corpus(&CorpusSpec::canvas_h);
    t["corpus.min_objects"] = bind_corpus(&CorpusSpec::min_objects);
    t["corpus.max_objects"] = bind_corpus(&CorpusSpec::max_objects);
    t["corpus.num_classes"] = bind_corpus(&CorpusSpec::num_classes);
    t["corpus.min_object_size"] = bind_corpus(&CorpusSpec::min_object_size);
    t["corpus.max_object_size"] = bind_corpus(&CorpusSpec::max_object_size);
    t["corpus.occlusion_event_rate"] = bind_corpus(&CorpusSpec::occlusion_event_rate);
    t["corpus.occlusion_len_min"] = bind_corpus(&CorpusSpec::occlusion_len_min);
    t["corpus.occlusion_len_max"] = bind_corpus(&CorpusSpec::occlusion_len_max);
    t["corpus.speed_coupling"] = bind_corpus(&CorpusSpec::speed_coupling);
    t["corpus.drop_prob_speed_increment"] =
        bind_corpus(&CorpusSpec::drop_prob_speed_increment);
    t["corpus.track_life_min"] = bind_corpus(&CorpusSpec::track_life_min);
    t["corpus.track_life_max"] = bind_corpus(&CorpusSpec::track_life_max);

    t["corpus.slow_frac"] = bind_motion(&MotionParams::slow_frac);
    t["corpus.medium_frac"] = bind_motion(&MotionParams::medium_frac);
    t["corpus.fast_frac"] = bind_motion(&MotionParams::fast_frac);
    t["corpus.slow_speed"] = bind_motion(&MotionParams::slow_speed);
    t["corpus.medium_speed"] = bind_motion(&MotionParams::medium_speed);
    t["corpus.fast_speed"] = bind_motion(&MotionParams::fast_speed);
    t["corpus.turn_sigma"] = bind_motion(&MotionParams::turn_sigma);

    t["corpus.drop_window_prob"] = bind_degradation(&DegradationParams::drop_window_prob);
    t["corpus.drop_len_min"] = bind_degradation(&DegradationParams::drop_len_min);
    t["corpus.drop_len_max"] = bind_degradation(&DegradationParams::drop_len_max);
    t["corpus.drop_depth"] = bind_degradation(&DegradationParams::drop_depth);
    t["corpus.jitter_sigma"] = bind_degradation(&DegradationParams::jitter_sigma);
    t["corpus.false_positives_per_frame"] =
        bind_degradation(&DegradationParams::false_positives_per_frame);
    t["corpus.miss_rate"] = bind_degradation(&DegradationParams::miss_rate);
    return t;
  }();
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (segment_len < 1) {
    throw std::invalid_argument("segment_len must be >= 1");
  }
  if (!in_unit(tnms_thresh)) throw std::invalid_argument("tnms_thresh must be in (0, 1)");
  if (!in_unit(link_thresh)) throw std::invalid_argument("link_thresh must be in (0, 1)");
  if (!in_unit(pair_iou_thresh)) {
    throw std::invalid_argument("pair_iou_thresh must be in (0, 1)");
  }
  if (!in_unit(nms_thresh)) throw std::invalid_argument("nms_thresh must be in (0, 1)");
  if (!in_unit(seqnms_link_iou)) {
    throw std::invalid_argument("seqnms_link_iou must be in (0, 1)");
  }
  if (!in_unit(eval.match_iou)) throw std::invalid_argument("match_iou must be in (0, 1)");
  if (eval.speed_window < 1) throw std::invalid_argument("speed_window must be >= 1");
  if (!in_unit(eval.speed_slow_iou) || !in_unit(eval.speed_fast_iou) ||
      eval.speed_fast_iou > eval.speed_slow_iou) {
    throw std::invalid_argument("speed band thresholds must satisfy 0 < fast <= slow < 1");
  }
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (num_classes < 0) throw std::invalid_argument("num_classes must be >= 0");
}

void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value) {
  const auto it = bindings().find(key);
  if (it == bindings().end()) {
    throw std::invalid_argument("unknown configuration key: " + key);
  }
  try {
    it->second.set(config, value);
  } catch (const std::exception& e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

PipelineConfig load_config_file(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    try {
      apply_config_entry(base, trim(text.substr(0, eq)),
                         trim(text.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return base;
}

std::string resolved_config_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& [key, binding] : bindings()) {
    out += key + " = " + binding.get(config) + "\n";
  }
  return out;
}

}  // namespace tubelink
