#pragma once

#include <cstdint>
#include <vector>

#include "mdlseg/graph.hpp"
#include "mdlseg/mdl.hpp"
#include "mdlseg/sbm.hpp"

namespace mdlseg {

enum class BisectionInit {
  Random,
  Spectral,  // sign of the second eigenvector of the summed adjacency
  Auto,      // spectral first, random when that split is rejected
};

struct CommunityOptions {
  MdlOptions mdl;
  BisectionInit init = BisectionInit::Auto;
  /// Cap on split + merge cycles.
  int max_cycles = 10;
};

/// Top-down community search for one segment: recursive bisection with
/// node-switch refinement, then merging of neighbouring communities,
/// repeated until the segment criterion stops dropping.
CommunityAssignment detect_communities(const GraphSequence& seq, const SegmentView& seg,
                                       std::uint64_t seed, const CommunityOptions& opts = {});

/// Tries to split node_subset (one community of `current`) in two. Returns
/// the refined assignment, or `current` unchanged when no split lowers the
/// segment criterion.
CommunityAssignment bisect_refine(const GraphSequence& seq, const SegmentView& seg,
                                  const CommunityAssignment& current,
                                  const std::vector<NodeIndex>& node_subset, std::uint64_t seed,
                                  const CommunityOptions& opts = {});

/// Greedily merges neighbouring communities (at least one edge between them
/// in the aggregate graph) while some merge lowers the segment criterion.
CommunityAssignment merge_pass(const GraphSequence& seq, const SegmentView& seg,
                               const CommunityAssignment& assign, const MdlOptions& opts = {});

}  // namespace mdlseg
