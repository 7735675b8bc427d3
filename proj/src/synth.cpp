#include "tubelink/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tubelink {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_spec(const CorpusSpec& spec) {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (spec.n_videos < 0) fail("corpus: n_videos must be >= 0");
  if (spec.frames_per_video < 1) fail("corpus: frames_per_video must be >= 1");
  if (spec.num_classes < 1) fail("corpus: num_classes must be >= 1");
  if (spec.min_objects < 0 || spec.max_objects < spec.min_objects) {
    fail("corpus: object count range is invalid");
  }
  if (!(spec.min_object_size > 0.0 &&
        spec.max_object_size >= spec.min_object_size)) {
    fail("corpus: object size range is invalid");
  }
  if (spec.max_object_size + 2.0 >= std::min(spec.canvas_w, spec.canvas_h)) {
    fail("corpus: objects do not fit the canvas");
  }
  const MotionParams& m = spec.motion;
  if (m.slow_frac < 0.0 || m.medium_frac < 0.0 || m.fast_frac < 0.0 ||
      m.slow_frac + m.medium_frac + m.fast_frac <= 0.0) {
    fail("corpus: population fractions are invalid");
  }
  if (m.slow_speed < 0.0 || m.medium_speed < 0.0 || m.fast_speed < 0.0 ||
      m.turn_sigma < 0.0) {
    fail("corpus: motion parameters must be non-negative");
  }
  const DegradationParams& d = spec.degradation;
  if (d.drop_window_prob < 0.0 || d.drop_window_prob > 1.0 ||
      d.drop_depth < 0.0 || d.drop_depth > 1.0 || d.miss_rate < 0.0 ||
      d.miss_rate > 1.0) {
    fail("corpus: degradation probabilities must lie in [0, 1]");
  }
  if (d.drop_len_min < 1 || d.drop_len_max < d.drop_len_min) {
    fail("corpus: drop window length range is invalid");
  }
  if (d.jitter_sigma < 0.0 || d.false_positives_per_frame < 0.0) {
    fail("corpus: degradation parameters must be non-negative");
  }
  if (spec.occlusion_event_rate < 0.0 || spec.occlusion_event_rate > 1.0) {
    fail("corpus: occlusion rate must lie in [0, 1]");
  }
  if (spec.occlusion_len_min < 1 ||
      spec.occlusion_len_max < spec.occlusion_len_min) {
    fail("corpus: occlusion length range is invalid");
  }
  if (spec.speed_coupling < 0.0 || spec.drop_prob_speed_increment < 0.0) {
    fail("corpus: speed coupling must be non-negative");
  }
  if (!(spec.track_life_min > 0.0 && spec.track_life_min <= 1.0 &&
        spec.track_life_max >= spec.track_life_min &&
        spec.track_life_max <= 1.0)) {
    fail("corpus: track life range must lie in (0, 1]");
  }
}

// Reflect a coordinate into [lo, hi], flipping the heading component.
void reflect(double& x, double lo, double hi, bool& flipped) {
  flipped = false;
  if (x < lo) {
    x = 2.0 * lo - x;
    flipped = true;
  } else if (x > hi) {
    x = 2.0 * hi - x;
    flipped = true;
  }
}

Box clamp_to_canvas(double x1, double y1, double x2, double y2, double w,
                    double h) {
  x1 = std::clamp(x1, 0.0, w - 0.5);
  y1 = std::clamp(y1, 0.0, h - 0.5);
  x2 = std::clamp(x2, x1 + 0.25, w);
  y2 = std::clamp(y2, y1 + 0.25, h);
  return Box(x1, y1, x2, y2);
}

ScoreVector make_scores(int num_classes, int class_id, double p, int sibling,
                        double bg_share) {
  // p on the labelled class; the remainder goes to background and, when
  // sibling >= 1, mostly to that confusion class.
  std::vector<double> v(static_cast<std::size_t>(num_classes) + 1, 0.0);
  const double rem = 1.0 - p;
  v[static_cast<std::size_t>(class_id)] = p;
  if (sibling >= 1) {
    v[static_cast<std::size_t>(sibling)] += 0.6 * rem;
    v[0] += 0.4 * rem;
  } else {
    v[0] += bg_share * rem;
    const double spread = (1.0 - bg_share) * rem;
    if (num_classes > 1) {
      const double each = spread / (num_classes - 1);
      for (int c = 1; c <= num_classes; ++c) {
        if (c != class_id) v[static_cast<std::size_t>(c)] += each;
      }
    } else {
      v[0] += spread;
    }
  }
  return ScoreVector(std::move(v));
}

struct TrackDraft {
  GroundTruthTrack gt;
  int band = 0;  // 0 slow, 1 medium, 2 fast
  std::vector<char> drop_mask;
  std::vector<double> cx, cy;  // true centers per life frame
  double w = 0.0, h = 0.0;
};

SyntheticVideo generate_video(const CorpusSpec& spec, int video_index) {
  rng::Random rand(rng::derive(spec.seed, static_cast<std::uint64_t>(video_index)));
  const int n = spec.frames_per_video;
  const int num_classes = spec.num_classes;

  SyntheticVideo video;
  char id[16];
  std::snprintf(id, sizeof(id), "v%04d", video_index);
  video.video_id = id;
  video.n_frames = n;

  const double frac_total = spec.motion.slow_frac + spec.motion.medium_frac +
                            spec.motion.fast_frac;
  const double slow_cut = spec.motion.slow_frac / frac_total;
  const double medium_cut = slow_cut + spec.motion.medium_frac / frac_total;

  const int n_obj = rand.uniform_int(spec.min_objects, spec.max_objects);
  std::vector<TrackDraft> drafts(static_cast<std::size_t>(n_obj));
  std::vector<int> lens(static_cast<std::size_t>(n_obj), 0);
  for (int obj = 0; obj < n_obj; ++obj) {
    TrackDraft& draft = drafts[static_cast<std::size_t>(obj)];
    draft.gt.track_id = obj + 1;
    draft.gt.class_id = rand.uniform_int(1, num_classes);

    const double u = rand.uniform();
    draft.band = u < slow_cut ? 0 : (u < medium_cut ? 1 : 2);

    // Square objects keep the consecutive-frame overlap of a moving box
    // independent of heading, so each speed band maps to a tight IoU range.
    const double side = rand.uniform(spec.min_object_size, spec.max_object_size);
    draft.w = side;
    draft.h = side;

    const double life_frac =
        rand.uniform(spec.track_life_min, spec.track_life_max);
    const int min_len = std::min(2, n);
    const int len = std::clamp(static_cast<int>(std::lround(life_frac * n)),
                               min_len, n);
    draft.gt.start_frame = rand.uniform_int(1, n - len + 1);
    lens[static_cast<std::size_t>(obj)] = len;
  }

  // Objects are solid: appearance-level occlusion comes from the
  // occlusion flags below, never from boxes passing through each other.
  // Slower bands commit their trajectories first so faster objects can
  // steer around them at their own speed.
  constexpr double kAvoidIou = 0.05;
  std::vector<int> order(drafts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return drafts[static_cast<std::size_t>(a)].band <
           drafts[static_cast<std::size_t>(b)].band;
  });
  for (int obj : order) {
    TrackDraft& draft = drafts[static_cast<std::size_t>(obj)];
    const int len = lens[static_cast<std::size_t>(obj)];
    const double band_speed = draft.band == 0   ? spec.motion.slow_speed
                              : draft.band == 1 ? spec.motion.medium_speed
                                                : spec.motion.fast_speed;
    const double speed = band_speed * std::min(draft.w, draft.h);

    const double lo_x = 0.5 * draft.w + 1.0;
    const double hi_x = spec.canvas_w - 0.5 * draft.w - 1.0;
    const double lo_y = 0.5 * draft.h + 1.0;
    const double hi_y = spec.canvas_h - 0.5 * draft.h - 1.0;

    // Worst overlap of a tentative box against every committed track
    // alive in that frame; reports the blocking center for the dodge.
    const auto blocked = [&](double x, double y, double w, double h,
                             int frame, double* ox, double* oy) {
      double worst = 0.0;
      for (const TrackDraft& other : drafts) {
        if (&other == &draft || other.gt.boxes.empty() ||
            !other.gt.alive(frame)) {
          continue;
        }
        const Box& ob = other.gt.box_at(frame);
        const double ov = iou(Box::from_center(x, y, w, h), ob);
        if (ov > worst) {
          worst = ov;
          *ox = ob.center_x();
          *oy = ob.center_y();
        }
      }
      return worst;
    };

    double heading = rand.uniform(0.0, 2.0 * kPi);
    double cx = 0.0, cy = 0.0, ox = 0.0, oy = 0.0;
    for (int attempt = 0; attempt < 50; ++attempt) {
      cx = rand.uniform(lo_x, hi_x);
      cy = rand.uniform(lo_y, hi_y);
      // spawn with clearance, not mere disjointness
      if (blocked(cx, cy, 1.2 * draft.w, 1.2 * draft.h, draft.gt.start_frame,
                  &ox, &oy) == 0.0) {
        break;
      }
    }

    for (int k = 0; k < len; ++k) {
      draft.cx.push_back(cx);
      draft.cy.push_back(cy);
      draft.gt.boxes.push_back(Box::from_center(cx, cy, draft.w, draft.h));
      heading += rand.gaussian(0.0, spec.motion.turn_sigma);
      double nx = cx + speed * std::cos(heading);
      double ny = cy + speed * std::sin(heading);
      bool flipped = false;
      reflect(nx, lo_x, hi_x, flipped);
      if (flipped) heading = kPi - heading;
      reflect(ny, lo_y, hi_y, flipped);
      if (flipped) heading = -heading;
      const int next_frame = draft.gt.start_frame + k + 1;
      if (blocked(nx, ny, draft.w, draft.h, next_frame, &ox, &oy) > kAvoidIou) {
        heading = std::atan2(cy - oy, cx - ox);  // steer straight away
        nx = cx + speed * std::cos(heading);
        ny = cy + speed * std::sin(heading);
        reflect(nx, lo_x, hi_x, flipped);
        if (flipped) heading = kPi - heading;
        reflect(ny, lo_y, hi_y, flipped);
        if (flipped) heading = -heading;
        if (blocked(nx, ny, draft.w, draft.h, next_frame, &ox, &oy) >
            kAvoidIou) {
          nx = cx;  // cornered: hold position for one frame
          ny = cy;
        }
      }
      cx = nx;
      cy = ny;
    }
  }

  for (int obj = 0; obj < n_obj; ++obj) {
    TrackDraft& draft = drafts[static_cast<std::size_t>(obj)];
    const int len = lens[static_cast<std::size_t>(obj)];
    const std::vector<char> occl =
        sample_windows(rand, len, spec.occlusion_event_rate,
                       spec.occlusion_len_min, spec.occlusion_len_max);
    draft.gt.occluded.assign(occl.begin(), occl.end());

    const double band_factor = draft.band == 0 ? 0.0 : (draft.band == 1 ? 0.5 : 1.0);
    const double drop_prob =
        spec.degradation.drop_window_prob +
        spec.speed_coupling * spec.drop_prob_speed_increment * band_factor;
    draft.drop_mask =
        sample_windows(rand, len, drop_prob, spec.degradation.drop_len_min,
                       spec.degradation.drop_len_max);
  }

  video.detections.resize(static_cast<std::size_t>(n));
  for (int f = 1; f <= n; ++f) {
    FrameDetections& frame = video.detections[static_cast<std::size_t>(f - 1)];
    frame.frame = f;

    for (const TrackDraft& draft : drafts) {
      if (!draft.gt.alive(f)) continue;
      if (rand.bernoulli(spec.degradation.miss_rate)) continue;
      const int k = f - draft.gt.start_frame;
      const bool occluded = draft.gt.occluded_at(f);
      const bool degraded =
          occluded || draft.drop_mask[static_cast<std::size_t>(k)];

      const double sigma =
          spec.degradation.jitter_sigma * (occluded ? 2.0 : 1.0);
      const double dx = rand.gaussian(0.0, sigma) * draft.w;
      const double dy = rand.gaussian(0.0, sigma) * draft.h;
      const double sw = std::max(0.2, 1.0 + rand.gaussian(0.0, sigma));
      const double sh = std::max(0.2, 1.0 + rand.gaussian(0.0, sigma));
      const double cx = draft.cx[static_cast<std::size_t>(k)] + dx;
      const double cy = draft.cy[static_cast<std::size_t>(k)] + dy;
      const double bw = draft.w * sw, bh = draft.h * sh;
      const Box box =
          clamp_to_canvas(cx - 0.5 * bw, cy - 0.5 * bh, cx + 0.5 * bw,
                          cy + 0.5 * bh, spec.canvas_w, spec.canvas_h);

      const double clean = rand.uniform(0.75, 0.97);
      double p = clean;
      int sibling = -1;
      if (degraded) {
        p = clean * (1.0 - spec.degradation.drop_depth);
        // Confusion mass: about half the dips read as background, the
        // rest as a sibling class.
        if (num_classes > 1 && rand.bernoulli(0.5)) {
          sibling = rand.uniform_int(1, num_classes - 1);
          if (sibling >= draft.gt.class_id) ++sibling;
        }
      }
      frame.dets.push_back(
          {box, make_scores(num_classes, draft.gt.class_id, p, sibling,
                            degraded ? 0.85 : 0.8)});
    }

    // Background false alarms. An upstream detector's own per-frame
    // suppression removes near-duplicates of real objects before they
    // are emitted, so clutter is drawn away from the live objects; a
    // bounded number of redraws keeps generation total.
    const double fp_rate = spec.degradation.false_positives_per_frame;
    int fp_count = static_cast<int>(fp_rate);
    if (rand.bernoulli(fp_rate - fp_count)) ++fp_count;
    for (int i = 0; i < fp_count; ++i) {
      Box fp(0.0, 0.0, 1.0, 1.0);
      for (int attempt = 0; attempt < 8; ++attempt) {
        const double w =
            rand.uniform(0.6 * spec.min_object_size, spec.max_object_size);
        const double h =
            rand.uniform(0.6 * spec.min_object_size, spec.max_object_size);
        const double cx = rand.uniform(0.5 * w, spec.canvas_w - 0.5 * w);
        const double cy = rand.uniform(0.5 * h, spec.canvas_h - 0.5 * h);
        fp = clamp_to_canvas(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w,
                             cy + 0.5 * h, spec.canvas_w, spec.canvas_h);
        double worst = 0.0;
        for (const TrackDraft& draft : drafts) {
          if (draft.gt.alive(f)) {
            worst = std::max(worst, iou(fp, draft.gt.box_at(f)));
          }
        }
        if (worst <= 0.25) break;
      }
      const int cls = rand.uniform_int(1, num_classes);
      const double s = rand.uniform(0.2, 0.65);
      frame.dets.push_back({fp, make_scores(num_classes, cls, s, -1, 0.8)});
    }
  }

  for (TrackDraft& draft : drafts) {
    video.tracks.push_back(std::move(draft.gt));
    video.track_band.push_back(draft.band);
  }
  return video;
}

}  // namespace

CorpusSpec degradation_speed_coupling(CorpusSpec spec, double coupling) {
  spec.speed_coupling = coupling;
  return spec;
}

std::vector<char> sample_windows(rng::Random& rand, int n_frames,
                                 double start_prob, int len_min, int len_max,
                                 std::vector<char>* starts) {
  std::vector<char> mask(static_cast<std::size_t>(n_frames), 0);
  if (starts) starts->assign(static_cast<std::size_t>(n_frames), 0);
  for (int f = 0; f < n_frames; ++f) {
    if (!rand.bernoulli(start_prob)) continue;
    if (starts) (*starts)[static_cast<std::size_t>(f)] = 1;
    const int len = rand.uniform_int(len_min, len_max);
    for (int k = f; k < std::min(n_frames, f + len); ++k) {
      mask[static_cast<std::size_t>(k)] = 1;
    }
  }
  return mask;
}

Corpus generate_corpus(const CorpusSpec& spec, int workers) {
  validate_spec(spec);

  Corpus corpus;
  corpus.num_classes = spec.num_classes;
  corpus.videos.resize(static_cast<std::size_t>(spec.n_videos));

#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int v = 0; v < spec.n_videos; ++v) {
    corpus.videos[static_cast<std::size_t>(v)] = generate_video(spec, v);
  }
#else
  (void)workers;
  for (int v = 0; v < spec.n_videos; ++v) {
    corpus.videos[static_cast<std::size_t>(v)] = generate_video(spec, v);
  }
#endif
  return corpus;
}

}  // namespace tubelink
