#include "mdlseg/community.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "mdlseg/error.hpp"
#include "segment_model.hpp"

namespace mdlseg {

namespace {

using detail::SegmentModel;
using Rng = std::mt19937_64;

// A switch or merge must lower the criterion by more than this many bits.
constexpr double kMinDrop = 1e-7;
constexpr int kMaxSweeps = 500;
constexpr std::size_t kMaxSpectralNodes = 1500;

// Sign split of the second eigenvector of the summed adjacency induced on `subset`.
std::vector<char> spectral_sides(const SegmentModel& model, const std::vector<std::size_t>& subset) {
  const auto n = static_cast<Eigen::Index>(subset.size());
  std::vector<Eigen::Index> pos(model.num_nodes(), -1);
  for (Eigen::Index i = 0; i < n; ++i) pos[subset[i]] = i;

  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (auto u : model.occurrences(subset[i])) {
      if (pos[u] >= 0) adj(i, pos[u]) += 1.0;
    }
  }
  std::vector<char> side(subset.size());
  if (n < 2) return side;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
  if (solver.info() != Eigen::Success) return side;
  Eigen::VectorXd v = solver.eigenvectors().col(n - 2);
  for (Eigen::Index i = 0; i < n; ++i) side[i] = v(i) >= 0.0;
  return side;
}

std::vector<char> random_sides(std::size_t n, Rng& rng) {
  std::vector<char> side(n);
  for (auto& s : side) s = static_cast<char>(rng() & 1U);
  return side;
}

// Splits `subset` (all labelled k) from the given sides, then runs switch sweeps
// scored on the whole segment. Keeps the split only if both halves survive and
// the criterion drops; otherwise every node returns to k.
bool try_split_from(SegmentModel& model, int k, std::vector<std::size_t> subset, Rng& rng,
                    const std::vector<char>& side) {
  const double before = model.mdl();
  const int k2 = model.add_slot();
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (side[i]) model.move(subset[i], k2);
  }

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::shuffle(subset.begin(), subset.end(), rng);
    bool changed = false;
    for (auto v : subset) {
      int to = model.label(v) == k ? k2 : k;
      if (model.move_delta(v, to) < -kMinDrop) {
        model.move(v, to);
        changed = true;
      }
    }
    if (!changed) break;
  }

  if (model.slot_size(k) == 0 || model.slot_size(k2) == 0 || !(model.mdl() < before - kMinDrop)) {
    for (auto v : subset) {
      if (model.label(v) == k2) model.move(v, k);
    }
    model.pop_slot();
    return false;
  }
  return true;
}

// Spectral and/or random start for try_split_from.
bool try_split(SegmentModel& model, int k, const std::vector<std::size_t>& subset, Rng& rng,
               BisectionInit init) {
  if (subset.size() < 2) return false;
  if (init != BisectionInit::Random && subset.size() <= kMaxSpectralNodes) {
    auto side = spectral_sides(model, subset);
    auto ones = std::count(side.begin(), side.end(), 1);
    if (ones > 0 && ones < static_cast<std::ptrdiff_t>(side.size())) {
      if (try_split_from(model, k, subset, rng, side)) return true;
      if (init == BisectionInit::Spectral) return false;
    }
  }
  return try_split_from(model, k, subset, rng, random_sides(subset.size(), rng));
}

bool split_phase(SegmentModel& model, Rng& rng, BisectionInit init) {
  bool any = false;
  std::vector<int> queue;
  for (int x = model.num_slots() - 1; x >= 0; --x) {
    if (model.slot_size(x) > 0) queue.push_back(x);
  }
  while (!queue.empty()) {
    int k = queue.back();
    queue.pop_back();
    if (try_split(model, k, model.members(k), rng, init)) {
      any = true;
      queue.push_back(model.num_slots() - 1);
      queue.push_back(k);
    }
  }
  return any;
}

bool merge_phase(SegmentModel& model) {
  bool any = false;
  for (;;) {
    double best = -kMinDrop;
    int best_a = -1, best_b = -1;
    for (int a = 0; a < model.num_slots(); ++a) {
      if (model.slot_size(a) == 0) continue;
      for (int b = a + 1; b < model.num_slots(); ++b) {
        if (model.slot_size(b) == 0 || !model.adjacent(a, b)) continue;
        double d = model.merge_delta(a, b);
        if (d < best) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a < 0) break;
    model.merge(best_a, best_b);
    any = true;
  }
  model.compact();
  model.recompute();
  return any;
}

// Moves single nodes to the neighbouring community with the largest drop.
bool refine_phase(SegmentModel& model, Rng& rng) {
  bool any = false;
  std::vector<std::size_t> order(model.num_nodes());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = v;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (auto v : order) {
      auto candidates = model.neighbour_slots(v);
      if (candidates.empty()) continue;
      model.prepare(v);
      double best = -kMinDrop;
      int target = -1;
      for (int x : candidates) {
        double d = model.delta(v, x);
        if (d < best) {
          best = d;
          target = x;
        }
      }
      if (target >= 0) {
        model.move(v, target);
        changed = any = true;
      }
    }
    if (!changed) break;
  }
  model.compact();
  model.recompute();
  return any;
}

void load(SegmentModel& model, const CommunityAssignment& assign) {
  std::vector<int> labels(model.num_nodes());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    int l = assign.label_of(model.global(v));
    if (l == 0) {
      throw Error(ErrorCode::UnassignedNode,
                  "node " + std::to_string(model.global(v)) + " has no community");
    }
    labels[v] = l - 1;
  }
  model.set_labels(std::move(labels));
}

}  // namespace

CommunityAssignment detect_communities(const GraphSequence& seq, const SegmentView& seg,
                                       std::uint64_t seed, const CommunityOptions& opts) {
  check_segment(seq, seg);
  SegmentModel model(seq, seg, opts.mdl.counting);
  if (model.num_nodes() <= 1) return model.to_assignment();

  Rng rng(seed);
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    const double before = model.mdl();
    split_phase(model, rng, opts.init);
    merge_phase(model);
    refine_phase(model, rng);
    if (!(model.mdl() < before - kMinDrop)) break;
  }
  return model.to_assignment();
}

CommunityAssignment bisect_refine(const GraphSequence& seq, const SegmentView& seg,
                                  const CommunityAssignment& current,
                                  const std::vector<NodeIndex>& node_subset, std::uint64_t seed,
                                  const CommunityOptions& opts) {
  check_segment(seq, seg);
  SegmentModel model(seq, seg, opts.mdl.counting);
  load(model, current);

  std::vector<std::size_t> subset;
  int k = -1;
  for (NodeIndex g : node_subset) {
    auto it = std::lower_bound(current.nodes().begin(), current.nodes().end(), g);
    if (it == current.nodes().end() || *it != g) {
      throw Error(ErrorCode::UnassignedNode, "node " + std::to_string(g) + " has no community");
    }
    auto local = std::lower_bound(model.nodes().begin(), model.nodes().end(), g);
    auto v = static_cast<std::size_t>(local - model.nodes().begin());
    if (local == model.nodes().end() || *local != g) {
      throw Error(ErrorCode::UnassignedNode, "node " + std::to_string(g) + " is not active in the segment");
    }
    if (k >= 0 && model.label(v) != k) {
      throw Error(ErrorCode::DomainError, "bisection subset spans several communities");
    }
    k = model.label(v);
    subset.push_back(v);
  }
  if (subset.size() < 2) return current;

  Rng rng(seed);
  if (!try_split(model, k, subset, rng, opts.init)) return current;
  return model.to_assignment();
}

CommunityAssignment merge_pass(const GraphSequence& seq, const SegmentView& seg,
                               const CommunityAssignment& assign, const MdlOptions& opts) {
  check_segment(seq, seg);
  SegmentModel model(seq, seg, opts.counting);
  load(model, assign);
  merge_phase(model);
  return model.to_assignment();
}

}  // namespace mdlseg
