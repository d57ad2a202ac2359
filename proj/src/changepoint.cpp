#include "mdlseg/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mdlseg/error.hpp"
#include "mdlseg/seed.hpp"

namespace mdlseg {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Add: return "add";
    case Action::Fallback: return "fallback";
    case Action::Merge: return "merge";
  }
  return "unknown";
}

double snapshot_distance(const Snapshot& a, const Snapshot& b) {
  if (a.num_edges() == 0 || b.num_edges() == 0) {
    throw Error(ErrorCode::DegenerateSnapshot, "snapshot without edges has no normalized distance");
  }
  // Every edge appears twice in vec(A), so the factors of two cancel.
  std::vector<Edge> diff;
  std::set_symmetric_difference(a.edges().begin(), a.edges().end(), b.edges().begin(),
                                b.edges().end(), std::back_inserter(diff));
  return static_cast<double>(diff.size()) /
         std::sqrt(static_cast<double>(a.num_edges()) * static_cast<double>(b.num_edges()));
}

std::vector<double> consecutive_distances(const GraphSequence& seq, std::vector<std::string>* warnings) {
  std::vector<double> d;
  for (int t = 2; t <= seq.num_snapshots(); ++t) {
    const auto& prev = seq.snapshot(t - 1);
    const auto& cur = seq.snapshot(t);
    if (prev.num_edges() == 0 || cur.num_edges() == 0) {
      d.push_back(std::numeric_limits<double>::infinity());
      if (warnings) {
        warnings->push_back("snapshot without edges next to t=" + std::to_string(t) +
                            "; distance set to infinity");
      }
      continue;
    }
    d.push_back(snapshot_distance(prev, cur));
  }
  return d;
}

std::vector<Candidate> screen(const std::vector<double>& distances) {
  if (distances.empty()) return {};
  std::vector<double> sorted = distances;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (n % 2 == 0 && std::isinf(sorted[n / 2 - 1]) && std::isinf(sorted[n / 2])) {
    median = std::numeric_limits<double>::infinity();
  }

  std::vector<Candidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (distances[i] >= median) out.push_back({static_cast<int>(i) + 2, distances[i]});
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return a.t < b.t;
  });
  return out;
}

std::uint64_t segment_seed(std::uint64_t seed, const SegmentView& seg) {
  return derive_seed(seed, {static_cast<std::uint64_t>(seg.start), static_cast<std::uint64_t>(seg.end)});
}

namespace {

struct SegmentFit {
  CommunityAssignment assignment;
  double bits = 0.0;
};

// Memoized per-segment community fits; a segment's fit depends only on its
// bounds because its seed is derived from them.
class Fitter {
 public:
  Fitter(const GraphSequence& seq, std::uint64_t seed, const DetectOptions& opts)
      : seq_(seq), seed_(seed), opts_(opts) {}

  const SegmentFit& fit(const SegmentView& seg) {
    auto key = std::make_pair(seg.start, seg.end);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    SegmentFit f;
    f.assignment = detect_communities(seq_, seg, segment_seed(seed_, seg), opts_.community);
    f.bits = segment_mdl(seq_, seg, f.assignment, opts_.community.mdl);
    return cache_.emplace(key, std::move(f)).first->second;
  }

  double total(std::vector<int> change_points) {
    std::sort(change_points.begin(), change_points.end());
    double bits = change_point_code_length(change_points, seq_.num_snapshots(),
                                           opts_.community.mdl.change_point_code);
    for (const auto& seg : segments_of(change_points, seq_.num_snapshots())) bits += fit(seg).bits;
    return bits;
  }

  std::size_t fits() const { return cache_.size(); }

 private:
  const GraphSequence& seq_;
  std::uint64_t seed_;
  const DetectOptions& opts_;
  std::map<std::pair<int, int>, SegmentFit> cache_;
};

void finish(const GraphSequence& seq, Fitter& fitter, std::vector<int> change_points,
            const DetectOptions& opts, DetectionResult& result) {
  std::sort(change_points.begin(), change_points.end());
  result.change_points = change_points;
  Segmentation& s = result.segmentation;
  s.change_points = change_points;
  s.assignments.clear();
  s.probs.assign(seq.num_snapshots(), LinkProbs());
  for (const auto& seg : segments_of(change_points, seq.num_snapshots())) {
    const auto& assign = fitter.fit(seg).assignment;
    s.assignments.push_back(assign);
    for (int t = seg.start; t < seg.end; ++t) {
      auto counted = counted_nodes(seq, seg, t, assign.nodes(), opts.community.mdl.counting);
      s.probs[t - 1] = mle_link_probs(block_counts(seq.snapshot(t), assign, counted));
    }
  }
  result.mdl_value = full_mdl(seq, s, opts.community.mdl);
  result.segment_fits = fitter.fits();
}

}  // namespace

DetectionResult detect(const GraphSequence& seq, std::uint64_t seed, const DetectOptions& opts) {
  DetectionResult result;
  Fitter fitter(seq, seed, opts);

  result.candidates = screen(consecutive_distances(seq, &result.warnings));
  const double null_mdl = fitter.total({});
  double mdl_old = null_mdl;

  // Greedy additions in candidate order; restart from the head after each acceptance.
  std::vector<int> tau;
  std::vector<Candidate> remaining = result.candidates;
  for (bool restart = true; restart;) {
    restart = false;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      std::vector<int> trial = tau;
      trial.push_back(remaining[i].t);
      double mdl_new = fitter.total(trial);
      bool accept = mdl_new < mdl_old;
      result.trace.push_back({Action::Add, remaining[i].t, mdl_old, mdl_new, accept});
      if (accept) {
        tau = std::move(trial);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
        mdl_old = mdl_new;
        restart = true;
        break;
      }
    }
  }

  const bool fallback = tau.empty() && !result.candidates.empty();
  if (fallback) {
    for (auto it = result.candidates.rbegin(); it != result.candidates.rend(); ++it) tau.push_back(it->t);
    double mdl_new = fitter.total(tau);
    result.trace.push_back({Action::Fallback, 0, mdl_old, mdl_new, true});
    mdl_old = mdl_new;
  } else {
    std::reverse(tau.begin(), tau.end());
  }

  // Merge pass over the selected points; restart after each accepted merge.
  for (bool restart = true; restart;) {
    restart = false;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      std::vector<int> trial = tau;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      double mdl_new = fitter.total(trial);
      bool accept = mdl_new < mdl_old;
      result.trace.push_back({Action::Merge, tau[i], mdl_old, mdl_new, accept});
      if (accept) {
        tau = std::move(trial);
        mdl_old = mdl_new;
        restart = true;
        break;
      }
    }
  }

  if (fallback && !(mdl_old < null_mdl)) {
    result.warnings.push_back("bottom-up fallback did not beat the unsegmented fit; keeping no change points");
    tau.clear();
  }

  finish(seq, fitter, tau, opts, result);
  return result;
}

DetectionResult fit_segmentation(const GraphSequence& seq, std::vector<int> change_points,
                                 std::uint64_t seed, const DetectOptions& opts) {
  std::sort(change_points.begin(), change_points.end());
  int prev = 1;
  for (int t : change_points) {
    if (t < 2 || t > seq.num_snapshots() || t <= prev) {
      throw Error(ErrorCode::InvalidSegmentation, "change point " + std::to_string(t) + " invalid");
    }
    prev = t;
  }
  DetectionResult result;
  Fitter fitter(seq, seed, opts);
  finish(seq, fitter, std::move(change_points), opts, result);
  return result;
}

}  // namespace mdlseg
