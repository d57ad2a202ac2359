#include "mdlseg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "mdlseg/error.hpp"

namespace mdlseg {

namespace {

// Entropy (natural log) of a vector of counts summing to n.
double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    if (c > 0.0) h -= c / n * std::log(c / n);
  }
  return h;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

double nmi(const CommunityAssignment& est, const CommunityAssignment& truth, double* coverage) {
  std::map<int, double> ce, ct;
  std::map<std::pair<int, int>, double> joint;
  std::size_t shared = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    int lt = truth.label_of(est.nodes()[i]);
    if (lt == 0) continue;
    int le = est.labels()[i];
    ++shared;
    ce[le] += 1.0;
    ct[lt] += 1.0;
    joint[{le, lt}] += 1.0;
  }
  if (coverage) {
    std::size_t total = est.size() + truth.size() - shared;
    *coverage = total == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(total);
  }
  if (shared == 0) throw Error(ErrorCode::EmptyDomain, "partitions share no nodes");

  const auto n = static_cast<double>(shared);
  const double he = entropy(ce, n);
  const double ht = entropy(ct, n);
  const bool trivial_e = ce.size() == 1, trivial_t = ct.size() == 1;
  if (trivial_e && trivial_t) return 1.0;
  if (trivial_e || trivial_t) return 0.0;
  // One-to-one label correspondence: I = H(est) = H(truth).
  if (joint.size() == ce.size() && joint.size() == ct.size()) return 1.0;

  double mi = 0.0;
  for (const auto& [cell, c] : joint) {
    mi += c / n * std::log(n * c / (ce[cell.first] * ct[cell.second]));
  }
  return std::clamp(mi / ((he + ht) / 2.0), 0.0, 1.0);
}

NmiReport overall_nmi(const std::vector<int>& est_change_points,
                      const std::vector<CommunityAssignment>& est,
                      const std::vector<int>& truth_change_points,
                      const std::vector<CommunityAssignment>& truth) {
  if (est_change_points != truth_change_points) {
    throw Error(ErrorCode::SegmentMismatch, "estimated and true change points differ");
  }
  if (est.size() != truth.size() || est.size() != est_change_points.size() + 1) {
    throw Error(ErrorCode::SegmentMismatch, "expected one partition per segment");
  }
  NmiReport report;
  for (std::size_t m = 0; m < est.size(); ++m) {
    double cov = 0.0;
    report.per_segment.push_back(nmi(est[m], truth[m], &cov));
    report.coverage.push_back(cov);
  }
  double sum = 0.0;
  for (double v : report.per_segment) sum += v;
  report.overall = sum / static_cast<double>(report.per_segment.size());
  return report;
}

std::map<int, int> changepoint_frequency(const std::vector<std::vector<int>>& detected, int T) {
  std::map<int, int> table;
  for (int t = 1; t <= T; ++t) table[t] = 0;
  for (const auto& tau : detected) {
    for (int t : tau) {
      if (t < 1 || t > T) {
        throw Error(ErrorCode::OutOfBounds, "detected change point " + std::to_string(t) + " outside 1..T");
      }
      ++table[t];
    }
  }
  return table;
}

std::string frequency_csv(const std::map<int, int>& table) {
  std::ostringstream out;
  out << "t,count\n";
  for (const auto& [t, c] : table) out << t << ',' << c << '\n';
  return out.str();
}

std::string nmi_csv(const NmiReport& report) {
  std::ostringstream out;
  out << "segment,nmi\n";
  for (std::size_t m = 0; m < report.per_segment.size(); ++m) {
    out << m + 1 << ',' << format_double(report.per_segment[m]) << '\n';
  }
  out << "overall," << format_double(report.overall) << '\n';
  return out.str();
}

}  // namespace mdlseg
