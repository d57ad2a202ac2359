#pragma once

#include <vector>

#include "mdlseg/graph.hpp"
#include "mdlseg/sbm.hpp"

namespace mdlseg {

/// How change-point locations are charged in the model code length.
enum class ChangePointCode {
  Gaps,     // sum over segments of log2(segment length + 1)
  Uniform,  // M * log2(T)
};

/// Which nodes enter the possible-pair counts N_kl at time t.
enum class NodeCounting {
  SnapshotActive,  // nodes with degree >= 1 at t
  SegmentActive,   // every node active somewhere in the enclosing segment
};

struct MdlOptions {
  ChangePointCode change_point_code = ChangePointCode::Gaps;
  NodeCounting counting = NodeCounting::SnapshotActive;
};

struct Segmentation {
  std::vector<int> change_points;
  std::vector<CommunityAssignment> assignments;
  /// Per-snapshot link probabilities (index t-1). Empty means per-snapshot MLE.
  std::vector<LinkProbs> probs;

  std::size_t num_segments() const { return change_points.size() + 1; }
};

std::vector<SegmentView> segments_of(std::span<const int> change_points, int num_snapshots);

/// Throws InvalidSegmentation unless the change points are strictly
/// increasing in [2, T] and each assignment covers its segment's active nodes.
void validate(const GraphSequence& seq, const Segmentation& s);

/// log2(M+1) plus the change-point location cost.
double change_point_code_length(std::span<const int> change_points, int num_snapshots,
                                ChangePointCode code = ChangePointCode::Gaps);

double model_code_length(const GraphSequence& seq, const Segmentation& s,
                         const MdlOptions& opts = {});

double residual_code_length(const GraphSequence& seq, const Segmentation& s,
                            const MdlOptions& opts = {});

double full_mdl(const GraphSequence& seq, const Segmentation& s, const MdlOptions& opts = {});

/// Segment-local criterion with probabilities at the per-snapshot MLE.
double segment_mdl(const GraphSequence& seq, const SegmentView& seg,
                   const CommunityAssignment& assign, const MdlOptions& opts = {});

/// Nodes whose pairs are counted at time t inside seg.
std::vector<NodeIndex> counted_nodes(const GraphSequence& seq, const SegmentView& seg, int t,
                                     const std::vector<NodeIndex>& segment_nodes,
                                     NodeCounting counting);

}  // namespace mdlseg
