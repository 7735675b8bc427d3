#include "tubelink/assembly.hpp"

#include <algorithm>
#include <stdexcept>

#include "tubelink/rng.hpp"

namespace tubelink {

namespace {

struct PairCandidate {
  double overlap;
  int left;   // det index in frame t
  int right;  // det index in frame t+1
};

void validate_segment(std::span<const FrameDetections> segment) {
  if (segment.empty()) {
    throw std::invalid_argument("segment must contain at least one frame");
  }
  for (std::size_t i = 0; i < segment.size(); ++i) {
    if (segment[i].frame < 1) {
      throw std::invalid_argument("segment frames must be >= 1");
    }
    if (i > 0 && segment[i].frame != segment[i - 1].frame + 1) {
      throw std::invalid_argument("segment frames must be consecutive");
    }
  }
}

}  // namespace

UnionProposals pair_union_proposals(std::span<const FrameDetections> segment,
                                    double pair_iou_threshold) {
  if (!(pair_iou_threshold > 0.0 && pair_iou_threshold < 1.0)) {
    throw std::invalid_argument("pair IoU threshold must be in (0, 1)");
  }
  validate_segment(segment);

  const int span = static_cast<int>(segment.size());
  UnionProposals out;
  out.start_frame = segment.front().frame;
  out.end_frame = segment.back().frame;

  // chain_members[c][t] is the det index of chain c at frame offset t,
  // or -1 where the chain is absent. chain_start[c] is the offset the
  // chain began at. Every first-frame box seeds a chain; boxes that a
  // later frame pair fails to extend leave the chain truncated.
  std::vector<std::vector<int>> chain_members;
  std::vector<int> chain_start;
  // chain_of[t][i]: chain currently ending with box i of frame offset t.
  std::vector<std::vector<int>> chain_of(static_cast<std::size_t>(span));
  for (int t = 0; t < span; ++t) {
    chain_of[static_cast<std::size_t>(t)].assign(
        segment[static_cast<std::size_t>(t)].dets.size(), -1);
  }

  auto new_chain = [&](int offset, int det_index) {
    const int id = static_cast<int>(chain_members.size());
    chain_members.emplace_back(static_cast<std::size_t>(span), -1);
    chain_members[static_cast<std::size_t>(id)]
                 [static_cast<std::size_t>(offset)] = det_index;
    chain_start.push_back(offset);
    chain_of[static_cast<std::size_t>(offset)]
            [static_cast<std::size_t>(det_index)] = id;
  };

  for (std::size_t i = 0; i < segment[0].dets.size(); ++i) {
    new_chain(0, static_cast<int>(i));
  }

  for (int t = 0; t + 1 < span; ++t) {
    const auto& cur = segment[static_cast<std::size_t>(t)].dets;
    const auto& nxt = segment[static_cast<std::size_t>(t + 1)].dets;

    std::vector<PairCandidate> candidates;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = 0; j < nxt.size(); ++j) {
        const double ov = iou(cur[i].box, nxt[j].box);
        if (ov >= pair_iou_threshold) {
          candidates.push_back(
              {ov, static_cast<int>(i), static_cast<int>(j)});
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const PairCandidate& a, const PairCandidate& b) {
                if (a.overlap != b.overlap) return a.overlap > b.overlap;
                if (a.left != b.left) return a.left < b.left;
                return a.right < b.right;
              });

    std::vector<char> left_used(cur.size(), 0), right_used(nxt.size(), 0);
    for (const PairCandidate& c : candidates) {
      if (left_used[static_cast<std::size_t>(c.left)] ||
          right_used[static_cast<std::size_t>(c.right)]) {
        continue;
      }
      left_used[static_cast<std::size_t>(c.left)] = 1;
      right_used[static_cast<std::size_t>(c.right)] = 1;
      const int chain = chain_of[static_cast<std::size_t>(t)]
                                [static_cast<std::size_t>(c.left)];
      chain_members[static_cast<std::size_t>(chain)]
                   [static_cast<std::size_t>(t + 1)] = c.right;
      chain_of[static_cast<std::size_t>(t + 1)]
              [static_cast<std::size_t>(c.right)] = chain;
    }
    // Unmatched boxes of the next frame seed fresh (late-starting) chains.
    for (std::size_t j = 0; j < nxt.size(); ++j) {
      if (!right_used[j]) new_chain(t + 1, static_cast<int>(j));
    }
  }

  std::vector<std::vector<char>> claimed(static_cast<std::size_t>(span));
  for (int t = 0; t < span; ++t) {
    claimed[static_cast<std::size_t>(t)].assign(
        segment[static_cast<std::size_t>(t)].dets.size(), 0);
  }

  for (std::size_t c = 0; c < chain_members.size(); ++c) {
    if (chain_start[c] != 0) continue;
    bool full = true;
    for (int t = 0; t < span; ++t) {
      if (chain_members[c][static_cast<std::size_t>(t)] < 0) {
        full = false;
        break;
      }
    }
    if (!full) continue;

    ChainProposal proposal{
        Cuboid{Box(0, 0, 1, 1), out.start_frame, out.end_frame}, {}};
    std::vector<Box> member_boxes;
    for (int t = 0; t < span; ++t) {
      const int det = chain_members[c][static_cast<std::size_t>(t)];
      claimed[static_cast<std::size_t>(t)][static_cast<std::size_t>(det)] = 1;
      proposal.members.push_back(
          {segment[static_cast<std::size_t>(t)].frame, det});
      member_boxes.push_back(
          segment[static_cast<std::size_t>(t)].dets[static_cast<std::size_t>(det)].box);
    }
    proposal.cuboid.box = bounding_box(member_boxes);
    out.chains.push_back(std::move(proposal));
  }

  for (int t = 0; t < span; ++t) {
    const auto& dets = segment[static_cast<std::size_t>(t)].dets;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (!claimed[static_cast<std::size_t>(t)][i]) {
        out.leftovers.push_back(
            {segment[static_cast<std::size_t>(t)].frame, static_cast<int>(i)});
      }
    }
  }
  return out;
}

std::vector<Tubelet> assemble_short_tubelets(
    const UnionProposals& proposals, std::span<const FrameDetections> segment,
    AggregationMode mode, std::uint32_t& next_uid) {
  validate_segment(segment);
  if (!segment.empty() && (segment.front().frame != proposals.start_frame ||
                           segment.back().frame != proposals.end_frame)) {
    throw std::invalid_argument(
        "assemble_short_tubelets: proposals span does not match segment");
  }

  std::vector<Tubelet> tubelets;
  tubelets.reserve(proposals.chains.size());
  for (const ChainProposal& chain : proposals.chains) {
    std::vector<Detection> boxes;
    boxes.reserve(chain.members.size());
    for (const BoxRef& ref : chain.members) {
      const auto& frame =
          segment[static_cast<std::size_t>(ref.frame - proposals.start_frame)];
      boxes.push_back(frame.dets[static_cast<std::size_t>(ref.det_index)]);
    }
    tubelets.emplace_back(proposals.start_frame, std::move(boxes), mode,
                          next_uid++);
  }
  return tubelets;
}

std::vector<Cuboid> oracle_cuboids(std::span<const GroundTruthTrack> tracks,
                                   int start_frame, int end_frame,
                                   const CuboidJitter& jitter,
                                   std::uint64_t seed) {
  if (start_frame < 1 || end_frame < start_frame) {
    throw std::invalid_argument("oracle_cuboids: invalid frame span");
  }
  std::vector<Cuboid> cuboids;
  rng::Random rand(rng::mix(seed));
  for (const GroundTruthTrack& track : tracks) {
    if (!track.alive(start_frame) || !track.alive(end_frame)) continue;
    std::vector<Box> boxes;
    for (int f = start_frame; f <= end_frame; ++f) {
      boxes.push_back(track.box_at(f));
    }
    Box hull = bounding_box(boxes);
    if (jitter.translate_sigma > 0.0 || jitter.scale_sigma > 0.0) {
      const double dx = rand.gaussian(0.0, jitter.translate_sigma) * hull.width();
      const double dy = rand.gaussian(0.0, jitter.translate_sigma) * hull.height();
      // Scale factors are clamped away from zero so the box stays valid.
      const double sx =
          std::max(0.05, 1.0 + rand.gaussian(0.0, jitter.scale_sigma));
      const double sy =
          std::max(0.05, 1.0 + rand.gaussian(0.0, jitter.scale_sigma));
      hull = Box::from_center(hull.center_x() + dx, hull.center_y() + dy,
                              hull.width() * sx, hull.height() * sy);
    }
    cuboids.push_back({hull, start_frame, end_frame});
  }
  return cuboids;
}

}  // namespace tubelink
