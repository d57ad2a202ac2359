#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdlseg/sbm.hpp"

namespace mdlseg {

/// Normalized mutual information over the shared node domain.
/// Both partitions trivial gives 1; exactly one trivial gives 0.
double nmi(const CommunityAssignment& est, const CommunityAssignment& truth,
           double* coverage = nullptr);

struct NmiReport {
  std::vector<double> per_segment;
  double overall = 0.0;
  /// Fraction of the union of both domains that both partitions cover.
  std::vector<double> coverage;
};

/// Throws SegmentMismatch when the change points differ.
NmiReport overall_nmi(const std::vector<int>& est_change_points,
                      const std::vector<CommunityAssignment>& est,
                      const std::vector<int>& truth_change_points,
                      const std::vector<CommunityAssignment>& truth);

/// Count of detections per t in 1..T over all trials.
std::map<int, int> changepoint_frequency(const std::vector<std::vector<int>>& detected, int T);

std::string frequency_csv(const std::map<int, int>& table);
std::string nmi_csv(const NmiReport& report);

}  // namespace mdlseg
