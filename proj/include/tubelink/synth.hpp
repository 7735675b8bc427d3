#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tubelink/detections.hpp"
#include "tubelink/ground_truth.hpp"
#include "tubelink/rng.hpp"

namespace tubelink {

// Object population fractions and per-band speeds. Speeds are fractions
// of the object's side length travelled per frame, so motion is fast or
// slow relative to object size, matching how evaluation bands motion.
// The fast default keeps consecutive-frame IoU near 0.4 regardless of
// heading: high enough that same-frame pair matching still holds, too
// low for neighbor-frame linking — the regime the toolkit targets.
struct MotionParams {
  double slow_frac = 1.0 / 3.0;
  double medium_frac = 1.0 / 3.0;
  double fast_frac = 1.0 / 3.0;
  double slow_speed = 0.003;
  double medium_speed = 0.02;
  double fast_speed = 0.37;
  double turn_sigma = 0.08;  // per-frame heading noise, radians
};

// Detector-imperfection model. Score dips come in windows (a detector
// that loses an object tends to stay lost for a few frames); window
// starts are sampled per frame, lengths uniformly in a range. Dropped
// frames keep their box but lose most of the true-class score to the
// confusion classes, which is exactly the failure mode that whole-run
// score aggregation is designed to repair.
struct DegradationParams {
  double drop_window_prob = 0.05;  // per-frame chance a dip window starts
  int drop_len_min = 2;
  int drop_len_max = 6;
  double drop_depth = 0.9;         // fraction of true-class score removed
  double jitter_sigma = 0.012;     // localization noise, fraction of size
  double false_positives_per_frame = 1.2;
  double miss_rate = 0.0005;       // chance a true box is not emitted
};

struct CorpusSpec {
  std::uint64_t seed = 42;
  int n_videos = 50;
  int frames_per_video = 60;
  double canvas_w = 640.0;
  double canvas_h = 480.0;
  int min_objects = 1;
  int max_objects = 3;
  int num_classes = 5;
  double min_object_size = 42.0;
  double max_object_size = 108.0;

  MotionParams motion;
  DegradationParams degradation;

  // Occlusion episodes: per-frame start chance and length range. An
  // occluded frame is flagged in the ground truth, degraded like a score
  // dip, and localized twice as noisily.
  double occlusion_event_rate = 0.01;
  int occlusion_len_min = 4;
  int occlusion_len_max = 10;

  // How strongly score-dip frequency grows with object speed: the
  // per-frame window start chance gains speed_coupling *
  // drop_prob_speed_increment scaled by 0 / 0.5 / 1 for slow / medium /
  // fast objects. Fast objects are harder for a per-frame detector, and
  // the coupling reproduces that.
  double speed_coupling = 1.0;
  double drop_prob_speed_increment = 0.05;

  // Track lifespan as a fraction of the video, sampled uniformly in
  // [track_life_min, track_life_max]; 1.0 means tracks span the whole
  // video. Partial lifespans start at a random frame, which exercises
  // objects entering and leaving mid-segment.
  double track_life_min = 1.0;
  double track_life_max = 1.0;
};

// Returns a copy with the score-dip/speed coupling set; coupling 0
// leaves degradation independent of motion.
CorpusSpec degradation_speed_coupling(CorpusSpec spec, double coupling = 1.0);

struct SyntheticVideo {
  std::string video_id;
  int n_frames = 0;
  std::vector<GroundTruthTrack> tracks;
  std::vector<int> track_band;  // generator band per track: 0 slow, 1 medium, 2 fast
  VideoDetections detections;
};

struct Corpus {
  std::vector<SyntheticVideo> videos;
  int num_classes = 0;
};

// Deterministic in spec.seed: each video derives its own generator
// stream, so results are identical for any worker count.
Corpus generate_corpus(const CorpusSpec& spec, int workers = 1);

// Sample degradation windows over n_frames: per-frame Bernoulli window
// starts with the given probability, lengths uniform in [len_min,
// len_max], overlapping windows merged into the returned mask. starts
// (if non-null) receives the raw start draws for frequency analysis.
std::vector<char> sample_windows(rng::Random& rand, int n_frames,
                                 double start_prob, int len_min, int len_max,
                                 std::vector<char>* starts = nullptr);

}  // namespace tubelink
