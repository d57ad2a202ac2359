#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mdlseg/graph.hpp"

namespace mdlseg {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Partition of a node set into communities labelled 1..num_communities().
class CommunityAssignment {
 public:
  CommunityAssignment() = default;
  /// nodes need not be sorted; labels must be >= 1. Labels are compacted to
  /// 1..c preserving their relative order.
  CommunityAssignment(std::vector<NodeIndex> nodes, std::vector<int> labels);

  static CommunityAssignment single(std::vector<NodeIndex> nodes);

  const std::vector<NodeIndex>& nodes() const { return nodes_; }
  const std::vector<int>& labels() const { return labels_; }
  int num_communities() const { return num_communities_; }
  std::size_t size() const { return nodes_.size(); }

  /// 0 when the node is not in the domain.
  int label_of(NodeIndex node) const;
  bool contains(NodeIndex node) const { return label_of(node) != 0; }

  /// Relabels by decreasing community size, ties by smallest member index.
  CommunityAssignment normalized() const;

  friend bool operator==(const CommunityAssignment&, const CommunityAssignment&) = default;

 private:
  std::vector<NodeIndex> nodes_;
  std::vector<int> labels_;
  int num_communities_ = 0;
};

/// Observed (edges) and possible (pairs) edge tallies per community pair.
/// Both matrices are stored symmetric and indexed from 0.
struct BlockCounts {
  CountMatrix edges;
  CountMatrix pairs;

  int num_communities() const { return static_cast<int>(edges.rows()); }
};

using LinkProbs = Eigen::MatrixXd;

BlockCounts block_counts(const Snapshot& snap, const CommunityAssignment& assign,
                         std::span<const NodeIndex> counted_nodes);

LinkProbs mle_link_probs(const BlockCounts& counts);

/// Bernoulli block log-likelihood in bits, with 0 * log 0 = 0.
double block_log_likelihood(const BlockCounts& counts, const LinkProbs& probs);

/// Binary entropy in bits.
double binary_entropy(double p);

}  // namespace mdlseg
