#include "mdlseg/graph.hpp"

#include <algorithm>

#include "mdlseg/error.hpp"

namespace mdlseg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::UnassignedNode: return "UnassignedNode";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidSegmentation: return "InvalidSegmentation";
    case ErrorCode::DegenerateSnapshot: return "DegenerateSnapshot";
    case ErrorCode::UnknownSetting: return "UnknownSetting";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::SegmentMismatch: return "SegmentMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Snapshot::Snapshot(std::vector<Edge> edges) : edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop on node " + std::to_string(e.u));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Snapshot::has_edge(NodeIndex a, NodeIndex b) const {
  if (a == b) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

GraphSequence::GraphSequence(std::vector<std::string> labels, std::vector<Snapshot> snapshots)
    : labels_(std::move(labels)), snapshots_(std::move(snapshots)) {
  if (snapshots_.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no snapshots");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<NodeIndex>(i)).second) {
      throw Error(ErrorCode::ParseError, "duplicate node label '" + labels_[i] + "'");
    }
  }
  active_.resize(snapshots_.size());
  std::vector<char> seen(labels_.size());
  for (std::size_t t = 0; t < snapshots_.size(); ++t) {
    std::fill(seen.begin(), seen.end(), 0);
    for (const auto& e : snapshots_[t].edges()) {
      if (e.v >= labels_.size()) {
        throw Error(ErrorCode::OutOfBounds, "edge endpoint outside the node universe");
      }
      seen[e.u] = seen[e.v] = 1;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i]) active_[t].push_back(static_cast<NodeIndex>(i));
    }
  }
}

const Snapshot& GraphSequence::snapshot(int t) const {
  if (t < 1 || t > num_snapshots()) {
    throw Error(ErrorCode::OutOfBounds, "snapshot " + std::to_string(t) + " out of range");
  }
  return snapshots_[t - 1];
}

NodeIndex GraphSequence::index_of(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? static_cast<NodeIndex>(labels_.size()) : it->second;
}

const std::vector<NodeIndex>& GraphSequence::active_at(int t) const {
  if (t < 1 || t > num_snapshots()) {
    throw Error(ErrorCode::OutOfBounds, "snapshot " + std::to_string(t) + " out of range");
  }
  return active_[t - 1];
}

GraphSequence build_sequence(const EdgeLists& edge_lists) {
  if (edge_lists.empty()) throw Error(ErrorCode::EmptySequence, "no snapshots given");
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeIndex> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<NodeIndex>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::vector<Snapshot> snapshots;
  snapshots.reserve(edge_lists.size());
  for (const auto& list : edge_lists) {
    std::vector<Edge> edges;
    edges.reserve(list.size());
    for (const auto& [a, b] : list) {
      if (b.empty()) {
        intern(a);
        continue;
      }
      if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop on '" + a + "'");
      NodeIndex ia = intern(a);
      NodeIndex ib = intern(b);
      edges.emplace_back(ia, ib);
    }
    snapshots.emplace_back(std::move(edges));
  }
  return GraphSequence(std::move(labels), std::move(snapshots));
}

EdgeLists export_edge_lists(const GraphSequence& seq) {
  EdgeLists out(seq.num_snapshots());
  // Register every label up front so rebuilding preserves the index order.
  for (const auto& label : seq.labels()) out[0].emplace_back(label, std::string());
  for (int t = 1; t <= seq.num_snapshots(); ++t) {
    for (const auto& e : seq.snapshot(t).edges()) {
      out[t - 1].emplace_back(seq.label(e.u), seq.label(e.v));
    }
  }
  return out;
}

void check_segment(const GraphSequence& seq, const SegmentView& seg) {
  if (seg.start < 1 || seg.start >= seg.end || seg.end > seq.num_snapshots() + 1) {
    throw Error(ErrorCode::OutOfBounds, "segment [" + std::to_string(seg.start) + ", " +
                                            std::to_string(seg.end) + ") out of bounds for T=" +
                                            std::to_string(seq.num_snapshots()));
  }
}

Snapshot aggregate(const GraphSequence& seq, const SegmentView& seg) {
  check_segment(seq, seg);
  std::vector<Edge> edges;
  for (int t = seg.start; t < seg.end; ++t) {
    const auto& e = seq.snapshot(t).edges();
    edges.insert(edges.end(), e.begin(), e.end());
  }
  return Snapshot(std::move(edges));
}

std::vector<NodeIndex> active_nodes(const GraphSequence& seq, const SegmentView& seg) {
  check_segment(seq, seg);
  std::vector<char> seen(seq.num_nodes());
  for (int t = seg.start; t < seg.end; ++t) {
    for (NodeIndex i : seq.active_at(t)) seen[i] = 1;
  }
  std::vector<NodeIndex> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(static_cast<NodeIndex>(i));
  }
  return out;
}

}  // namespace mdlseg
