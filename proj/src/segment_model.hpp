#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdlseg/graph.hpp"
#include "mdlseg/mdl.hpp"
#include "mdlseg/sbm.hpp"

namespace mdlseg::detail {

/// Mutable community labelling of one segment with block tallies per
/// snapshot, supporting O(degree + T*c) move deltas and O(T*c) merge deltas.
/// Labels are 0-based slots; a slot may be empty.
class SegmentModel {
 public:
  SegmentModel(const GraphSequence& seq, const SegmentView& seg, NodeCounting counting);

  std::size_t num_nodes() const { return nodes_.size(); }
  NodeIndex global(std::size_t v) const { return nodes_[v]; }
  /// Sorted global indices of the segment's active nodes.
  const std::vector<NodeIndex>& nodes() const { return nodes_; }
  int label(std::size_t v) const { return labels_[v]; }
  const std::vector<int>& labels() const { return labels_; }
  int num_slots() const { return slots_; }
  int num_nonempty() const { return nonempty_; }
  std::int64_t slot_size(int x) const { return slot_size_[x]; }

  /// Current criterion value (maintained incrementally).
  double mdl() const { return mdl_; }
  /// Criterion recomputed from the tallies; also resets drift.
  double recompute();

  void set_labels(std::vector<int> labels);
  int add_slot();
  /// Removes the last slot if it is empty.
  void pop_slot();
  /// Drops empty slots, keeping the order of the rest.
  void compact();

  /// Fills the per-snapshot neighbour label counts of v; must precede delta().
  void prepare(std::size_t v);
  double delta(std::size_t v, int to) const;
  double move_delta(std::size_t v, int to) {
    prepare(v);
    return delta(v, to);
  }
  void move(std::size_t v, int to);

  double merge_delta(int a, int b) const;
  /// Moves every node of b into a.
  void merge(int a, int b);

  /// True when some snapshot has an edge between slots a and b.
  bool adjacent(int a, int b) const;

  /// Labels of aggregate neighbours of v (deduplicated, excluding v's own).
  std::vector<int> neighbour_slots(std::size_t v) const;
  /// Neighbour entries of v over all snapshots, one per edge occurrence.
  std::span<const std::uint32_t> occurrences(std::size_t v) const {
    return {adj_u_.data() + adj_off_[v], adj_off_[v + 1] - adj_off_[v]};
  }
  /// Aggregate-graph neighbours (local indices), deduplicated.
  std::vector<std::size_t> aggregate_neighbours(std::size_t v) const;

  std::vector<std::size_t> members(int x) const;

  CommunityAssignment to_assignment() const;

 private:
  std::int64_t& edge_count(int t, int x, int y) { return edges_[(t * cap_ + x) * cap_ + y]; }
  std::int64_t edge_count(int t, int x, int y) const { return edges_[(t * cap_ + x) * cap_ + y]; }
  std::int64_t& size_at(int t, int x) { return sizes_[t * cap_ + x]; }
  std::int64_t size_at(int t, int x) const { return sizes_[t * cap_ + x]; }
  double complexity(int nonempty) const;
  void reserve_slots(int cap);
  void rebuild();

  NodeCounting counting_;
  int T_ = 0;
  std::vector<NodeIndex> nodes_;
  // CSR adjacency: for node v, entries [adj_off_[v], adj_off_[v+1]) of (t, u).
  std::vector<std::size_t> adj_off_;
  std::vector<std::uint32_t> adj_t_;
  std::vector<std::uint32_t> adj_u_;
  // CSR counted times (snapshot counting only).
  std::vector<std::size_t> time_off_;
  std::vector<std::uint32_t> times_;

  std::vector<int> labels_;
  int slots_ = 0;
  int cap_ = 0;
  int nonempty_ = 0;
  std::vector<std::int64_t> slot_size_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> edges_;
  double mdl_ = 0.0;

  // Scratch for prepare()/delta().
  std::vector<std::int64_t> k_;
  std::size_t prepared_ = static_cast<std::size_t>(-1);
};

/// g(E, N) = 0.5 log2 N + N H2(E/N) for N > 0, else 0.
double block_cost(std::int64_t e, std::int64_t n);

}  // namespace mdlseg::detail
