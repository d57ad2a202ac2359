#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mdlseg {

using NodeIndex = std::uint32_t;

/// Unordered node pair stored with first < second.
struct Edge {
  NodeIndex u = 0;
  NodeIndex v = 0;

  Edge() = default;
  Edge(NodeIndex a, NodeIndex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// One observed graph. Edges are kept sorted and unique; no self-loops.
class Snapshot {
 public:
  Snapshot() = default;
  explicit Snapshot(std::vector<Edge> edges);

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  bool has_edge(NodeIndex a, NodeIndex b) const;

 private:
  std::vector<Edge> edges_;
};

/// Half-open window [start, end) of 1-based snapshot times.
struct SegmentView {
  int start = 1;
  int end = 2;

  int length() const { return end - start; }
  friend bool operator==(const SegmentView&, const SegmentView&) = default;
};

using LabelPair = std::pair<std::string, std::string>;

/// Per-snapshot edge lists over labels. A pair whose second label is empty
/// registers the first label as a node without adding an edge.
using EdgeLists = std::vector<std::vector<LabelPair>>;

/// Snapshots sharing one dense node index space. Immutable once built.
class GraphSequence {
 public:
  GraphSequence(std::vector<std::string> labels, std::vector<Snapshot> snapshots);

  int num_snapshots() const { return static_cast<int>(snapshots_.size()); }
  std::size_t num_nodes() const { return labels_.size(); }

  /// 1-based access.
  const Snapshot& snapshot(int t) const;
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }

  const std::string& label(NodeIndex i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Returns num_nodes() when the label is unknown.
  NodeIndex index_of(const std::string& label) const;

  /// Sorted nodes with degree >= 1 at time t.
  const std::vector<NodeIndex>& active_at(int t) const;

  SegmentView whole() const { return {1, num_snapshots() + 1}; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<Snapshot> snapshots_;
  std::vector<std::vector<NodeIndex>> active_;
};

GraphSequence build_sequence(const EdgeLists& edge_lists);

EdgeLists export_edge_lists(const GraphSequence& seq);

void check_segment(const GraphSequence& seq, const SegmentView& seg);

/// Binarized union of all snapshots in the window.
Snapshot aggregate(const GraphSequence& seq, const SegmentView& seg);

/// Sorted nodes with degree >= 1 in at least one snapshot of the window.
std::vector<NodeIndex> active_nodes(const GraphSequence& seq, const SegmentView& seg);

}  // namespace mdlseg
