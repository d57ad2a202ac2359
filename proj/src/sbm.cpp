#include "mdlseg/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mdlseg/error.hpp"

namespace mdlseg {

CommunityAssignment::CommunityAssignment(std::vector<NodeIndex> nodes, std::vector<int> labels) {
  if (nodes.size() != labels.size()) {
    throw Error(ErrorCode::DomainError, "assignment nodes and labels differ in length");
  }
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes[a] < nodes[b]; });

  std::map<int, int> compact;
  for (int l : labels) {
    if (l < 1) throw Error(ErrorCode::DomainError, "community labels must be >= 1");
    compact.emplace(l, 0);
  }
  int next = 0;
  for (auto& [from, to] : compact) to = ++next;

  nodes_.reserve(nodes.size());
  labels_.reserve(nodes.size());
  for (auto i : order) {
    if (!nodes_.empty() && nodes_.back() == nodes[i]) {
      throw Error(ErrorCode::DomainError, "node " + std::to_string(nodes[i]) + " assigned twice");
    }
    nodes_.push_back(nodes[i]);
    labels_.push_back(compact[labels[i]]);
  }
  num_communities_ = next;
}

CommunityAssignment CommunityAssignment::single(std::vector<NodeIndex> nodes) {
  std::vector<int> labels(nodes.size(), 1);
  return CommunityAssignment(std::move(nodes), std::move(labels));
}

int CommunityAssignment::label_of(NodeIndex node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end() || *it != node) return 0;
  return labels_[static_cast<std::size_t>(it - nodes_.begin())];
}

CommunityAssignment CommunityAssignment::normalized() const {
  struct Info {
    std::size_t size = 0;
    NodeIndex first = 0;
    int label = 0;
  };
  std::vector<Info> info(num_communities_);
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    auto& c = info[labels_[i] - 1];
    ++c.size;
    c.first = nodes_[i];  // nodes_ is sorted, so the last write is the smallest
    c.label = labels_[i];
  }
  std::sort(info.begin(), info.end(), [](const Info& a, const Info& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.first < b.first;
  });
  std::vector<int> remap(num_communities_ + 1);
  for (std::size_t r = 0; r < info.size(); ++r) remap[info[r].label] = static_cast<int>(r) + 1;

  CommunityAssignment out = *this;
  for (auto& l : out.labels_) l = remap[l];
  return out;
}

BlockCounts block_counts(const Snapshot& snap, const CommunityAssignment& assign,
                         std::span<const NodeIndex> counted_nodes) {
  const int c = assign.num_communities();
  BlockCounts out{CountMatrix::Zero(c, c), CountMatrix::Zero(c, c)};

  NodeIndex max_node = 0;
  for (NodeIndex i : counted_nodes) max_node = std::max(max_node, i);
  // Dense label lookup for counted nodes; 0 marks "not counted".
  std::vector<int> label(counted_nodes.empty() ? 0 : max_node + 1, 0);
  std::vector<std::int64_t> sizes(c, 0);
  for (NodeIndex i : counted_nodes) {
    int l = assign.label_of(i);
    if (l == 0) {
      throw Error(ErrorCode::UnassignedNode, "node " + std::to_string(i) + " has no community");
    }
    if (label[i] == 0) ++sizes[l - 1];
    label[i] = l;
  }
  for (int k = 0; k < c; ++k) {
    out.pairs(k, k) = sizes[k] * (sizes[k] - 1) / 2;
    for (int l = k + 1; l < c; ++l) out.pairs(k, l) = out.pairs(l, k) = sizes[k] * sizes[l];
  }

  for (const auto& e : snap.edges()) {
    if (e.v >= label.size() || label[e.u] == 0 || label[e.v] == 0) continue;
    int a = label[e.u] - 1;
    int b = label[e.v] - 1;
    ++out.edges(a, b);
    if (a != b) ++out.edges(b, a);
  }
  return out;
}

LinkProbs mle_link_probs(const BlockCounts& counts) {
  const int c = counts.num_communities();
  LinkProbs p = LinkProbs::Zero(c, c);
  for (int k = 0; k < c; ++k) {
    for (int l = 0; l < c; ++l) {
      if (counts.pairs(k, l) > 0) {
        p(k, l) = static_cast<double>(counts.edges(k, l)) / static_cast<double>(counts.pairs(k, l));
      }
    }
  }
  return p;
}

namespace {

// x * log2(p) with 0 * log2(anything) = 0.
double weighted_log2(double x, double p) {
  if (x == 0.0) return 0.0;
  return x * std::log2(p);
}

}  // namespace

double block_log_likelihood(const BlockCounts& counts, const LinkProbs& probs) {
  const int c = counts.num_communities();
  if (probs.rows() != c || probs.cols() != c) {
    throw Error(ErrorCode::DomainError, "link probabilities do not match the block structure");
  }
  double total = 0.0;
  for (int k = 0; k < c; ++k) {
    for (int l = k; l < c; ++l) {
      double p = probs(k, l);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::DomainError, "link probability outside [0, 1]");
      }
      auto e = static_cast<double>(counts.edges(k, l));
      auto n = static_cast<double>(counts.pairs(k, l));
      total += weighted_log2(e, p) + weighted_log2(n - e, 1.0 - p);
    }
  }
  return total;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace mdlseg
