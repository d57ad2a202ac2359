#include "mdlseg/mdl.hpp"

#include <algorithm>
#include <cmath>

#include "mdlseg/error.hpp"

namespace mdlseg {

namespace {

// Half log2 of the possible pair count over blocks with at least one pair.
double parameter_cost(const BlockCounts& counts) {
  double bits = 0.0;
  for (int k = 0; k < counts.num_communities(); ++k) {
    for (int l = k; l < counts.num_communities(); ++l) {
      if (counts.pairs(k, l) > 0) bits += 0.5 * std::log2(static_cast<double>(counts.pairs(k, l)));
    }
  }
  return bits;
}

double assignment_cost(const CommunityAssignment& assign) {
  double c = assign.num_communities();
  if (c <= 1.0) return 0.0;
  return std::log2(c) + static_cast<double>(assign.size()) * std::log2(c);
}

void require_assignment_shape(const CommunityAssignment& assign, const LinkProbs& probs, int t) {
  if (probs.rows() != assign.num_communities() || probs.cols() != assign.num_communities()) {
    throw Error(ErrorCode::InvalidSegmentation,
                "link probabilities at t=" + std::to_string(t) + " do not match the segment's communities");
  }
}

}  // namespace

std::vector<SegmentView> segments_of(std::span<const int> change_points, int num_snapshots) {
  std::vector<SegmentView> out;
  int start = 1;
  for (int t : change_points) {
    out.push_back({start, t});
    start = t;
  }
  out.push_back({start, num_snapshots + 1});
  return out;
}

std::vector<NodeIndex> counted_nodes(const GraphSequence& seq, const SegmentView&, int t,
                                     const std::vector<NodeIndex>& segment_nodes,
                                     NodeCounting counting) {
  if (counting == NodeCounting::SegmentActive) return segment_nodes;
  return seq.active_at(t);
}

void validate(const GraphSequence& seq, const Segmentation& s) {
  const int T = seq.num_snapshots();
  int prev = 1;
  for (int t : s.change_points) {
    if (t < 2 || t > T || t <= prev) {
      throw Error(ErrorCode::InvalidSegmentation,
                  "change point " + std::to_string(t) + " unsorted or outside [2, T]");
    }
    prev = t;
  }
  if (s.assignments.size() != s.num_segments()) {
    throw Error(ErrorCode::InvalidSegmentation, "expected one assignment per segment");
  }
  if (!s.probs.empty() && static_cast<int>(s.probs.size()) != T) {
    throw Error(ErrorCode::InvalidSegmentation, "expected link probabilities for every snapshot");
  }
  auto segs = segments_of(s.change_points, T);
  for (std::size_t m = 0; m < segs.size(); ++m) {
    auto active = active_nodes(seq, segs[m]);
    if (active != s.assignments[m].nodes()) {
      throw Error(ErrorCode::InvalidSegmentation,
                  "assignment " + std::to_string(m + 1) + " does not cover exactly the segment's active nodes");
    }
  }
}

double change_point_code_length(std::span<const int> change_points, int num_snapshots,
                                ChangePointCode code) {
  const auto M = static_cast<double>(change_points.size());
  double bits = std::log2(M + 1.0);
  if (code == ChangePointCode::Uniform) return bits + M * std::log2(static_cast<double>(num_snapshots));
  for (const auto& seg : segments_of(change_points, num_snapshots)) {
    bits += std::log2(static_cast<double>(seg.end - seg.start + 1));
  }
  return bits;
}

double model_code_length(const GraphSequence& seq, const Segmentation& s, const MdlOptions& opts) {
  validate(seq, s);
  double bits = change_point_code_length(s.change_points, seq.num_snapshots(), opts.change_point_code);
  auto segs = segments_of(s.change_points, seq.num_snapshots());
  for (std::size_t m = 0; m < segs.size(); ++m) {
    const auto& assign = s.assignments[m];
    bits += assignment_cost(assign);
    for (int t = segs[m].start; t < segs[m].end; ++t) {
      auto counted = counted_nodes(seq, segs[m], t, assign.nodes(), opts.counting);
      bits += parameter_cost(block_counts(seq.snapshot(t), assign, counted));
    }
  }
  return bits;
}

double residual_code_length(const GraphSequence& seq, const Segmentation& s, const MdlOptions& opts) {
  validate(seq, s);
  double bits = 0.0;
  auto segs = segments_of(s.change_points, seq.num_snapshots());
  for (std::size_t m = 0; m < segs.size(); ++m) {
    const auto& assign = s.assignments[m];
    for (int t = segs[m].start; t < segs[m].end; ++t) {
      auto counted = counted_nodes(seq, segs[m], t, assign.nodes(), opts.counting);
      auto counts = block_counts(seq.snapshot(t), assign, counted);
      if (s.probs.empty()) {
        bits -= block_log_likelihood(counts, mle_link_probs(counts));
      } else {
        require_assignment_shape(assign, s.probs[t - 1], t);
        bits -= block_log_likelihood(counts, s.probs[t - 1]);
      }
    }
  }
  return bits;
}

double full_mdl(const GraphSequence& seq, const Segmentation& s, const MdlOptions& opts) {
  return model_code_length(seq, s, opts) + residual_code_length(seq, s, opts);
}

double segment_mdl(const GraphSequence& seq, const SegmentView& seg,
                   const CommunityAssignment& assign, const MdlOptions& opts) {
  check_segment(seq, seg);
  for (NodeIndex i : active_nodes(seq, seg)) {
    if (!assign.contains(i)) {
      throw Error(ErrorCode::UnassignedNode, "node " + std::to_string(i) + " has no community");
    }
  }
  double bits = assignment_cost(assign);
  for (int t = seg.start; t < seg.end; ++t) {
    auto counted = counted_nodes(seq, seg, t, assign.nodes(), opts.counting);
    auto counts = block_counts(seq.snapshot(t), assign, counted);
    bits += parameter_cost(counts) - block_log_likelihood(counts, mle_link_probs(counts));
  }
  return bits;
}

}  // namespace mdlseg
