#include "mdlseg/run.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "mdlseg/error.hpp"
#include "mdlseg/io.hpp"
#include "mdlseg/seed.hpp"

namespace mdlseg {

namespace {

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string join(const std::vector<int>& v, char sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? std::string(1, sep) : "") << v[i];
  return out.str();
}

void require_path(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::BadConfig, std::string("missing ") + what);
}

void require_existing(const std::filesystem::path& p, const char* what) {
  require_path(p, what);
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorCode::BadConfig, std::string(what) + " '" + p.string() + "' does not exist");
  }
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw Error(ErrorCode::BadConfig, "--seed is required for this command");
  return *c.seed;
}

// Label-keyed partitions share one index space so their domains can be intersected.
std::vector<CommunityAssignment> to_assignments(
    const std::vector<std::vector<std::pair<std::string, int>>>& segments,
    std::map<std::string, NodeIndex>& index) {
  std::vector<CommunityAssignment> out;
  for (const auto& seg : segments) {
    std::vector<NodeIndex> nodes;
    std::vector<int> labels;
    for (const auto& [label, id] : seg) {
      auto it = index.emplace(label, static_cast<NodeIndex>(index.size())).first;
      nodes.push_back(it->second);
      labels.push_back(id);
    }
    out.emplace_back(std::move(nodes), std::move(labels));
  }
  return out;
}

void run_generate(const RunConfig& c, std::ostream& log) {
  require_path(c.output, "--output");
  SettingSpec spec = resolve_setting(c);
  spec.seed = require_seed(c);
  auto g = generate(spec);
  write_sequence_dir(g.sequence, c.output);
  write_file(c.output / "truth.txt", format_ground_truth(g.sequence, g.truth));
  log << "wrote " << g.sequence.num_snapshots() << " snapshots over " << g.sequence.num_nodes()
      << " nodes to " << c.output.string() << "\n";
}

void run_detect(const RunConfig& c, std::ostream& log) {
  require_existing(c.input, "--input");
  auto seq = read_sequence(c.input);
  const std::uint64_t seed = c.seed.value_or(0);
  auto result = c.change_points ? fit_segmentation(seq, *c.change_points, seed, c.detect)
                                : detect(seq, seed, c.detect);
  for (const auto& w : result.warnings) log << "warning: " << w << "\n";
  ResultMeta meta{seed, c.detect.community.mdl, c.timestamp ? utc_timestamp() : std::string()};
  auto text = format_result(seq, result, meta);
  if (c.output.empty()) {
    log << text;
    return;
  }
  write_file(c.output, text);
  log << "change points: " << join(result.change_points, ' ') << "\n"
      << "mdl: " << std::setprecision(17) << result.mdl_value << "\n";
}

void run_eval(const RunConfig& c, std::ostream& log) {
  require_existing(c.truth, "--truth");
  require_existing(c.result, "--result");
  auto truth = parse_ground_truth(read_file(c.truth));
  auto stored = parse_result(read_file(c.result));

  std::filesystem::path out = c.output.empty() ? std::filesystem::path(".") : c.output;
  write_file(out / "frequency.csv",
             frequency_csv(changepoint_frequency({stored.change_points}, stored.num_snapshots)));

  std::map<std::string, NodeIndex> index;
  auto est = to_assignments(stored.segments, index);
  auto tru = to_assignments(truth.segments, index);
  auto report = overall_nmi(stored.change_points, est, truth.change_points, tru);
  write_file(out / "nmi.csv", nmi_csv(report));
  log << "overall NMI: " << std::setprecision(17) << report.overall << "\n";
}

void run_simulate(const RunConfig& c, std::ostream& log) {
  require_path(c.output, "--output");
  if (c.trials < 1) throw Error(ErrorCode::BadConfig, "--trials must be at least 1");
  SettingSpec spec = resolve_setting(c);
  auto summary = simulate(spec, c.trials, require_seed(c), c.jobs, c.detect);

  write_file(c.output / "frequency.csv", frequency_csv(summary.frequency));

  std::ostringstream trials;
  trials << "trial,detected,mdl,nmi\n" << std::setprecision(17);
  NmiReport mean;
  for (std::size_t i = 0; i < summary.trials.size(); ++i) {
    const auto& tr = summary.trials[i];
    trials << i + 1 << ',' << join(tr.detected, ' ') << ',' << tr.detected_mdl << ','
           << tr.known_nmi.overall << '\n';
    const auto& seg = tr.known_nmi.per_segment;
    if (mean.per_segment.size() < seg.size()) mean.per_segment.resize(seg.size(), 0.0);
    for (std::size_t m = 0; m < seg.size(); ++m) mean.per_segment[m] += seg[m] / summary.trials.size();
  }
  mean.overall = summary.mean_nmi;
  write_file(c.output / "trials.csv", trials.str());
  write_file(c.output / "nmi.csv", nmi_csv(mean));

  double seconds = 0.0;
  for (const auto& tr : summary.trials) seconds += tr.seconds;
  log << "true change points: " << join(spec.change_points(), ' ') << "\n"
      << "exact recovery: " << summary.exact_rate * 100.0 << "%\n"
      << "mean NMI (known change points): " << std::fixed << std::setprecision(4) << summary.mean_nmi
      << "\n"
      << "detection time: " << std::setprecision(1) << seconds << " s over " << c.trials << " trials\n";
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadConfig:
    case ErrorCode::UnknownSetting:
    case ErrorCode::InvalidSpec:
      return 2;
    case ErrorCode::InvariantViolation:
      return 4;
    default:
      return 3;
  }
}

SettingSpec resolve_setting(const RunConfig& c) {
  if (c.setting && !c.spec_file.empty()) {
    throw Error(ErrorCode::BadConfig, "give either --setting or --spec, not both");
  }
  SettingSpec spec;
  if (c.setting) {
    spec = builtin_setting(*c.setting);
  } else if (!c.spec_file.empty()) {
    require_existing(c.spec_file, "--spec");
    spec = setting_from_json(read_file(c.spec_file));
  } else {
    throw Error(ErrorCode::BadConfig, "missing --setting or --spec");
  }
  if (c.node_range) {
    for (auto& s : spec.segments) {
      s.min_nodes = c.node_range->first;
      s.max_nodes = c.node_range->second;
    }
  }
  if (c.rho) spec.rho = *c.rho;
  if (c.correlation) spec.correlation = *c.correlation;
  validate(spec);
  return spec;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return derive_seed(seed, {static_cast<std::uint64_t>(trial)});
}

SimulationSummary simulate(const SettingSpec& spec, int trials, std::uint64_t seed, int jobs,
                           const DetectOptions& opts) {
  validate(spec);
  SimulationSummary summary;
  summary.trials.resize(static_cast<std::size_t>(std::max(trials, 0)));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      try {
        auto t0 = std::chrono::steady_clock::now();
        SettingSpec s = spec;
        s.seed = derive_seed(trial_seed(seed, i), {1});
        auto g = generate(s);
        const std::uint64_t detect_seed = derive_seed(trial_seed(seed, i), {2});
        auto found = detect(g.sequence, detect_seed, opts);
        auto known = fit_segmentation(g.sequence, g.truth.change_points, detect_seed, opts);

        auto& out = summary.trials[static_cast<std::size_t>(i)];
        out.true_change_points = g.truth.change_points;
        out.detected = found.change_points;
        out.detected_mdl = found.mdl_value;
        out.known_nmi = overall_nmi(known.change_points, known.segmentation.assignments,
                                    g.truth.change_points, g.truth.assignments);
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };

  const int n_workers = std::clamp(jobs, 1, std::max(trials, 1));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<int>> detected;
  double nmi_sum = 0.0;
  int exact = 0;
  for (const auto& tr : summary.trials) {
    detected.push_back(tr.detected);
    nmi_sum += tr.known_nmi.overall;
    exact += tr.detected == tr.true_change_points;
  }
  summary.frequency = changepoint_frequency(detected, spec.num_snapshots());
  if (trials > 0) {
    summary.mean_nmi = nmi_sum / trials;
    summary.exact_rate = static_cast<double>(exact) / trials;
  }
  return summary;
}

void run(const RunConfig& config, std::ostream& log) {
  switch (config.command) {
    case Command::Generate: return run_generate(config, log);
    case Command::Detect: return run_detect(config, log);
    case Command::Eval: return run_eval(config, log);
    case Command::Simulate: return run_simulate(config, log);
  }
}

}  // namespace mdlseg
