#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdlseg/community.hpp"
#include "mdlseg/graph.hpp"
#include "mdlseg/mdl.hpp"

namespace mdlseg {

struct Candidate {
  int t = 0;
  double distance = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Normalized 1-norm distance between consecutive snapshots, for t = 2..T.
/// Throws DegenerateSnapshot when either snapshot has no edges.
double snapshot_distance(const Snapshot& a, const Snapshot& b);

/// d_t for t = 2..T (element 0 is d_2). Snapshots without edges give +inf
/// and are reported through `warnings` when given.
std::vector<double> consecutive_distances(const GraphSequence& seq,
                                          std::vector<std::string>* warnings = nullptr);

/// Keeps t with d_t >= median, ordered by d_t descending then t ascending.
/// distances[i] belongs to t = i + 2.
std::vector<Candidate> screen(const std::vector<double>& distances);

enum class Action { Add, Fallback, Merge };

struct TraceEntry {
  Action action = Action::Add;
  int t = 0;
  double mdl_before = 0.0;
  double mdl_after = 0.0;
  bool accepted = false;
};

struct DetectionResult {
  std::vector<int> change_points;
  Segmentation segmentation;
  double mdl_value = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<Candidate> candidates;
  std::vector<std::string> warnings;
  /// Number of distinct segment community searches performed.
  std::size_t segment_fits = 0;
};

struct DetectOptions {
  CommunityOptions community;
};

/// Screened greedy change-point search followed by the reverse merge pass.
DetectionResult detect(const GraphSequence& seq, std::uint64_t seed, const DetectOptions& opts = {});

/// Community fit for every segment of a fixed set of change points.
DetectionResult fit_segmentation(const GraphSequence& seq, std::vector<int> change_points,
                                 std::uint64_t seed, const DetectOptions& opts = {});

/// Seed used for the community search of one segment.
std::uint64_t segment_seed(std::uint64_t seed, const SegmentView& seg);

std::string_view to_string(Action a);

}  // namespace mdlseg
