#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mdlseg/error.hpp"
#include "mdlseg/run.hpp"

using namespace mdlseg;

namespace {

void add_detect_flags(CLI::App* cmd, RunConfig& cfg, bool& cl_prime, std::string& init,
                      std::string& counting) {
  cmd->add_flag("--cl-prime", cl_prime, "Encode change points with M*log2(T) bits");
  cmd->add_option("--init", init, "Bisection start: auto, random or spectral")
      ->check(CLI::IsMember({"auto", "random", "spectral"}));
  cmd->add_option("--counting", counting, "Node counting: snapshot or segment")
      ->check(CLI::IsMember({"snapshot", "segment"}));
  cmd->add_option("--max-cycles", cfg.detect.community.max_cycles, "Split/merge cycles per segment")
      ->check(CLI::PositiveNumber);
}

void add_setting_flags(CLI::App* cmd, RunConfig& cfg, std::vector<int>& nodes, double& rho,
                       std::string& corr) {
  cmd->add_option("--setting", cfg.setting, "Built-in setting 1-6");
  cmd->add_option("--spec", cfg.spec_file, "Setting description in JSON");
  cmd->add_option("--nodes", nodes, "Override node range: MIN MAX")->expected(2);
  cmd->add_option("--rho", rho, "Override temporal correlation");
  cmd->add_option("--correlation", corr, "independent or markov")
      ->check(CLI::IsMember({"independent", "markov"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change point and community detection for graph sequences"};
  app.require_subcommand(1);

  RunConfig cfg;
  bool cl_prime = false;
  std::string init = "auto", counting = "snapshot", corr;
  std::vector<int> nodes, change_points;
  double rho = -1.0;
  std::uint64_t seed = 0;
  bool no_timestamp = false;

  auto* gen = app.add_subcommand("generate", "Write a synthetic sequence and its ground truth");
  add_setting_flags(gen, cfg, nodes, rho, corr);
  gen->add_option("--seed", seed)->required();
  gen->add_option("-o,--output", cfg.output, "Output directory")->required();

  auto* det = app.add_subcommand("detect", "Find change points and communities");
  det->add_option("-i,--input", cfg.input, "Edge-list file or directory")->required();
  det->add_option("-o,--output", cfg.output, "Result file (stdout when omitted)");
  det->add_option("--seed", seed);
  det->add_option("--change-points", change_points, "Fit communities for these change points only");
  det->add_flag("--no-timestamp", no_timestamp, "Omit the generation time from the result");
  add_detect_flags(det, cfg, cl_prime, init, counting);

  auto* ev = app.add_subcommand("eval", "Score a result against ground truth");
  ev->add_option("--truth", cfg.truth)->required();
  ev->add_option("--result", cfg.result)->required();
  ev->add_option("-o,--output", cfg.output, "Directory for the CSV files");

  auto* sim = app.add_subcommand("simulate", "Repeated generate and detect cycles");
  add_setting_flags(sim, cfg, nodes, rho, corr);
  sim->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed)->required();
  sim->add_option("--jobs", cfg.jobs)->check(CLI::PositiveNumber);
  sim->add_option("-o,--output", cfg.output, "Output directory")->required();
  add_detect_flags(sim, cfg, cl_prime, init, counting);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: BadConfig: " << e.what() << "\n";
    return 2;
  }

  if (gen->parsed()) cfg.command = Command::Generate;
  if (det->parsed()) cfg.command = Command::Detect;
  if (ev->parsed()) cfg.command = Command::Eval;
  if (sim->parsed()) cfg.command = Command::Simulate;

  auto* sub = app.get_subcommands().front();
  if (sub != ev && sub->count("--seed")) cfg.seed = seed;
  if (!nodes.empty()) cfg.node_range = std::make_pair(nodes[0], nodes[1]);
  if (rho >= 0.0) cfg.rho = rho;
  if (!corr.empty()) {
    cfg.correlation = corr == "markov" ? CorrelationModel::MarkovChain : CorrelationModel::Independent;
  }
  if (det->parsed() && det->count("--change-points")) cfg.change_points = change_points;
  cfg.timestamp = !no_timestamp;
  auto& mdl = cfg.detect.community.mdl;
  mdl.change_point_code = cl_prime ? ChangePointCode::Uniform : ChangePointCode::Gaps;
  mdl.counting = counting == "segment" ? NodeCounting::SegmentActive : NodeCounting::SnapshotActive;
  cfg.detect.community.init = init == "spectral" ? BisectionInit::Spectral
                             : init == "random"   ? BisectionInit::Random
                                                  : BisectionInit::Auto;

  try {
    run(cfg, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: InvariantViolation: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
