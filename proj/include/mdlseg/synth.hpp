#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mdlseg/graph.hpp"
#include "mdlseg/sbm.hpp"

namespace mdlseg {

struct FixedLaw {
  double within = 0.0;
  double between = 0.0;
};

/// Per-snapshot draws within ~ U(within_lo, within_hi), between ~ U(between_lo, between_hi).
struct UniformLaw {
  double within_lo = 0.0;
  double within_hi = 0.0;
  double between_lo = 0.0;
  double between_hi = 0.0;
};

using LinkLaw = std::variant<FixedLaw, UniformLaw>;

struct SegmentSpec {
  int first = 1;  // inclusive
  int last = 1;   // inclusive
  std::vector<double> ratios;
  LinkLaw law;
  int min_nodes = 1;
  int max_nodes = 1;
};

enum class CorrelationModel {
  Independent,
  MarkovChain,  // per-pair two-state chain over time, restarted at each segment
};

struct SettingSpec {
  std::vector<SegmentSpec> segments;
  double rho = 0.0;
  CorrelationModel correlation = CorrelationModel::Independent;
  std::uint64_t seed = 0;

  int num_snapshots() const { return segments.empty() ? 0 : segments.back().last; }
  std::vector<int> change_points() const;
};

/// Throws InvalidSpec on gaps, overlaps, bad ratios or probabilities.
void validate(const SettingSpec& spec);

/// The six published simulation settings (T = 30).
SettingSpec builtin_setting(int k);

struct GroundTruth {
  std::vector<int> change_points;
  /// Planted partition per segment over every node of the universe.
  std::vector<CommunityAssignment> assignments;
  /// Drawn (within, between) probabilities per snapshot.
  std::vector<std::pair<double, double>> link_probs;
};

struct Generated {
  GraphSequence sequence;
  GroundTruth truth;
};

Generated generate(const SettingSpec& spec);

/// Community sizes for n nodes by largest remainder; ties go to the lower index.
std::vector<int> apportion(const std::vector<double>& ratios, int n);

/// Stationary two-state chain with P(1) = p and lag-1 correlation rho.
std::vector<std::uint8_t> correlated_pair_sequence(double p, double rho, std::size_t length,
                                                   std::uint64_t seed);

/// Writes `tau: ...` then one `segment m: label=community ...` line per segment.
std::string format_ground_truth(const GraphSequence& seq, const GroundTruth& truth);

/// Parses the ground-truth format; labels are resolved against seq when
/// given, otherwise fresh indices are assigned in order of appearance.
struct TruthRecord {
  std::vector<int> change_points;
  /// Per segment: (label, community id).
  std::vector<std::vector<std::pair<std::string, int>>> segments;
};
TruthRecord parse_ground_truth(const std::string& text);
TruthRecord to_truth_record(const GraphSequence& seq, const GroundTruth& truth);

std::string setting_to_json(const SettingSpec& spec);
SettingSpec setting_from_json(const std::string& text);

}  // namespace mdlseg
