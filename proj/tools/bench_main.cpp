// Benchmark: OpenMP-parallel corpus generation and pipeline processing
// against their serial (workers = 1) reference, verifying that both
// produce identical results before reporting timings.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tubelink/config.hpp"
#include "tubelink/pipeline.hpp"
#include "tubelink/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace tubelink;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool same_corpus(const Corpus& a, const Corpus& b) {
  if (a.videos.size() != b.videos.size()) return false;
  for (std::size_t v = 0; v < a.videos.size(); ++v) {
    const SyntheticVideo& va = a.videos[v];
    const SyntheticVideo& vb = b.videos[v];
    if (va.video_id != vb.video_id || va.detections.size() != vb.detections.size()) {
      return false;
    }
    for (std::size_t f = 0; f < va.detections.size(); ++f) {
      const auto& da = va.detections[f].dets;
      const auto& db = vb.detections[f].dets;
      if (da.size() != db.size()) return false;
      for (std::size_t i = 0; i < da.size(); ++i) {
        if (!(da[i].box == db[i].box) || !(da[i].scores == db[i].scores)) {
          return false;
        }
      }
    }
  }
  return true;
}

bool same_outputs(const std::vector<VideoOutput>& a,
                  const std::vector<VideoOutput>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a[v].boxes.size() != b[v].boxes.size()) return false;
    for (std::size_t i = 0; i < a[v].boxes.size(); ++i) {
      const OutBox& x = a[v].boxes[i];
      const OutBox& y = b[v].boxes[i];
      if (x.frame != y.frame || x.label != y.label || x.score != y.score ||
          !(x.box == y.box) || x.tubelet_id != y.tubelet_id) {
        return false;
      }
    }
  }
  return true;
}

void report(const char* stage, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-18s serial %8.1f ms   parallel %8.1f ms   speedup %5.2fx   identical %s\n",
              stage, serial_ms, parallel_ms, serial_ms / parallel_ms,
              match ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel benchmark"};
  int videos = 200;
  int frames = 60;
  int threads = 0;  // 0: all cores
  app.add_option("--videos", videos, "corpus size");
  app.add_option("--frames", frames, "frames per video");
  app.add_option("--threads", threads, "parallel worker count (0: all cores)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  if (threads <= 0) threads = 1;
#endif

  PipelineConfig config;
  CorpusSpec spec = config.corpus;
  spec.n_videos = videos;
  spec.frames_per_video = frames;
  spec.seed = config.seed;

  std::printf("corpus: %d videos x %d frames, %d threads\n\n", videos, frames,
              threads);

  auto t0 = Clock::now();
  const Corpus serial_corpus = generate_corpus(spec, 1);
  const double gen_serial = ms_since(t0);

  t0 = Clock::now();
  const Corpus parallel_corpus = generate_corpus(spec, threads);
  const double gen_parallel = ms_since(t0);
  const bool gen_match = same_corpus(serial_corpus, parallel_corpus);
  report("generation", gen_serial, gen_parallel, gen_match);

  std::vector<VideoDetections> inputs;
  inputs.reserve(serial_corpus.videos.size());
  for (const SyntheticVideo& video : serial_corpus.videos) {
    inputs.push_back(video.detections);
  }

  t0 = Clock::now();
  const auto serial_out = process_corpus(Method::kFull, config, inputs,
                                         spec.num_classes, 1);
  const double run_serial = ms_since(t0);

  t0 = Clock::now();
  const auto parallel_out = process_corpus(Method::kFull, config, inputs,
                                           spec.num_classes, threads);
  const double run_parallel = ms_since(t0);
  const bool run_match = same_outputs(serial_out, parallel_out);
  report("full pipeline", run_serial, run_parallel, run_match);

  return gen_match && run_match ? 0 : 1;
}
