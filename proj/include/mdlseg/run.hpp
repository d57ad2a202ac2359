#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdlseg/changepoint.hpp"
#include "mdlseg/error.hpp"
#include "mdlseg/eval.hpp"
#include "mdlseg/synth.hpp"

namespace mdlseg {

enum class Command { Generate, Detect, Eval, Simulate };

struct RunConfig {
  Command command = Command::Detect;
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path truth;
  std::filesystem::path result;
  std::optional<int> setting;
  std::filesystem::path spec_file;
  std::optional<std::uint64_t> seed;
  int trials = 1;
  int jobs = 1;
  /// Fit communities for these change points instead of searching.
  std::optional<std::vector<int>> change_points;
  /// Overrides every segment's node range when set.
  std::optional<std::pair<int, int>> node_range;
  std::optional<double> rho;
  std::optional<CorrelationModel> correlation;
  DetectOptions detect;
  bool timestamp = true;
};

/// Exit codes: 0 ok, 2 bad config, 3 data error, 4 invariant violation.
int exit_code_for(ErrorCode code);

/// Executes one command; errors propagate as mdlseg::Error.
void run(const RunConfig& config, std::ostream& log);

/// Setting with the config's overrides (node range, rho, correlation) applied.
SettingSpec resolve_setting(const RunConfig& config);

struct TrialOutcome {
  std::vector<int> true_change_points;
  std::vector<int> detected;
  double detected_mdl = 0.0;
  /// Known-change-point community fit scored against the planted partition.
  NmiReport known_nmi;
  double seconds = 0.0;
};

struct SimulationSummary {
  std::vector<TrialOutcome> trials;
  std::map<int, int> frequency;
  double mean_nmi = 0.0;
  double exact_rate = 0.0;
};

/// Generates and analyses `trials` sequences with per-trial derived seeds.
/// Results are ordered by trial index.
SimulationSummary simulate(const SettingSpec& spec, int trials, std::uint64_t seed, int jobs,
                           const DetectOptions& opts = {});

std::uint64_t trial_seed(std::uint64_t seed, int trial);

}  // namespace mdlseg
