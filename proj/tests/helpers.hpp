#pragma once

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "mdlseg/error.hpp"
#include "mdlseg/graph.hpp"
#include "mdlseg/sbm.hpp"

namespace testing {

using mdlseg::EdgeLists;
using mdlseg::GraphSequence;
using mdlseg::NodeIndex;

/// Code of the mdlseg::Error thrown by fn; fails the test when none is thrown.
template <class F>
mdlseg::ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const mdlseg::Error& e) {
    return e.code();
  }
  FAIL("expected an mdlseg::Error");
  return mdlseg::ErrorCode::InvariantViolation;
}

inline std::string node_name(std::size_t i) { return "n" + std::to_string(i); }

/// Edge lists given as index pairs; nodes are named n<i>.
inline GraphSequence from_pairs(const std::vector<std::vector<std::pair<int, int>>>& snaps) {
  EdgeLists lists;
  for (const auto& s : snaps) {
    auto& l = lists.emplace_back();
    for (auto [a, b] : s) l.emplace_back(node_name(a), node_name(b));
  }
  return mdlseg::build_sequence(lists);
}

/// Independent Erdos-Renyi snapshots over n registered nodes.
inline GraphSequence random_sequence(std::mt19937_64& rng, int T, int n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(node_name(i));
  std::vector<mdlseg::Snapshot> snaps;
  for (int t = 0; t < T; ++t) {
    std::vector<mdlseg::Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng)) edges.emplace_back(i, j);
      }
    }
    snaps.emplace_back(std::move(edges));
  }
  return GraphSequence(std::move(labels), std::move(snaps));
}

/// Planted-partition snapshots: labels[i] in 1..c, within p_in, between p_out.
inline GraphSequence planted_sequence(std::mt19937_64& rng, int T, const std::vector<int>& labels,
                                      double p_in, double p_out) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < labels.size(); ++i) names.push_back(node_name(i));
  std::vector<mdlseg::Snapshot> snaps;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < T; ++t) {
    std::vector<mdlseg::Edge> edges;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = i + 1; j < labels.size(); ++j) {
        double p = labels[i] == labels[j] ? p_in : p_out;
        if (u(rng) < p) edges.emplace_back(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j));
      }
    }
    snaps.emplace_back(std::move(edges));
  }
  return GraphSequence(std::move(names), std::move(snaps));
}

/// Assignment of `nodes` using labels[node].
inline mdlseg::CommunityAssignment assign_by(const std::vector<NodeIndex>& nodes,
                                             const std::vector<int>& labels) {
  std::vector<int> l;
  for (auto v : nodes) l.push_back(labels[v]);
  return mdlseg::CommunityAssignment(nodes, l);
}

/// Every set partition of n items as restricted growth strings (labels from 1).
inline std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 1);
  std::vector<int> mx(n, 1);
  for (;;) {
    out.push_back(a);
    int i = n - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i <= 0) break;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 1;
      mx[j] = mx[i];
    }
  }
  return out;
}

}  // namespace testing
