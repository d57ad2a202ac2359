#include "mdlseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mdlseg/error.hpp"
#include "mdlseg/seed.hpp"

namespace mdlseg {

namespace {

using Rng = std::mt19937_64;

SegmentSpec fixed(int first, int last, std::vector<double> ratios, double within, double between,
                  int lo, int hi) {
  return {first, last, std::move(ratios), FixedLaw{within, between}, lo, hi};
}

SegmentSpec uniform(int first, int last, std::vector<double> ratios, UniformLaw law, int lo, int hi) {
  return {first, last, std::move(ratios), law, lo, hi};
}

constexpr double kThird = 1.0 / 3.0;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Deterministic Bernoulli draw that consumes exactly one variate.
bool bernoulli(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace

std::vector<int> SettingSpec::change_points() const {
  std::vector<int> out;
  for (std::size_t m = 1; m < segments.size(); ++m) out.push_back(segments[m].first);
  return out;
}

void validate(const SettingSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSpec, why); };
  if (spec.segments.empty()) fail("setting has no segments");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0)) fail("rho must lie in [0, 1)");
  int expected = 1;
  for (const auto& s : spec.segments) {
    if (s.first != expected || s.last < s.first) fail("segments must tile 1..T without gaps or overlaps");
    expected = s.last + 1;
    if (s.ratios.empty()) fail("segment needs at least one community ratio");
    double sum = 0.0;
    for (double r : s.ratios) {
      if (!(r > 0.0)) fail("community ratios must be positive");
      sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail("community ratios must sum to 1");
    if (s.min_nodes < 1 || s.max_nodes < s.min_nodes) fail("invalid node range");
    if (const auto* f = std::get_if<FixedLaw>(&s.law)) {
      if (!is_probability(f->within) || !is_probability(f->between)) fail("probability outside [0, 1]");
    } else {
      const auto& u = std::get<UniformLaw>(s.law);
      if (!is_probability(u.within_lo) || !is_probability(u.within_hi) ||
          !is_probability(u.between_lo) || !is_probability(u.between_hi) ||
          u.within_lo > u.within_hi || u.between_lo > u.between_hi) {
        fail("invalid uniform link law");
      }
    }
  }
}

SettingSpec builtin_setting(int k) {
  SettingSpec spec;
  switch (k) {
    case 1: {
      constexpr int lo = 280, hi = 300;
      spec.segments = {
          fixed(1, 5, {kThird, kThird, kThird}, 0.90, 0.10, lo, hi),
          fixed(6, 13, {1.0}, 0.70, 0.20, lo, hi),
          fixed(14, 16, {0.25, 0.25, 0.25, 0.25}, 0.85, 0.15, lo, hi),
          fixed(17, 22, {2 * kThird, kThird}, 0.84, 0.20, lo, hi),
          fixed(23, 28, {0.2, 0.2, 0.1, 0.3, 0.2}, 0.80, 0.15, lo, hi),
          fixed(29, 30, {0.3, 0.4, 0.3}, 0.90, 0.10, lo, hi),
      };
      break;
    }
    case 2: {
      constexpr int lo = 280, hi = 300;
      const UniformLaw law{0.70, 0.95, 0.05, 0.30};
      spec.segments = {
          uniform(1, 12, {kThird, kThird, kThird}, law, lo, hi),
          uniform(13, 21, {kThird, 2 * kThird}, law, lo, hi),
          uniform(22, 22, {0.75, 0.25}, law, lo, hi),
          uniform(23, 27, {0.3, 0.4, 0.3}, law, lo, hi),
          uniform(28, 30, {0.2, 0.3, 0.2, 0.3}, law, lo, hi),
      };
      break;
    }
    case 3: {
      constexpr int lo = 380, hi = 400;
      const UniformLaw law{0.35, 0.40, 0.05, 0.10};
      spec.segments = {
          uniform(1, 8, {kThird, kThird, kThird}, law, lo, hi),
          uniform(9, 11, {0.25, 0.75}, law, lo, hi),
          uniform(12, 16, {0.5, 0.5}, law, lo, hi),
          uniform(17, 21, {0.75, 0.25}, law, lo, hi),
          uniform(22, 30, {0.3, 0.4, 0.3}, law, lo, hi),
      };
      break;
    }
    case 4: {
      constexpr int lo = 380, hi = 400;
      spec.segments = {
          fixed(1, 5, {kThird, kThird, kThird}, 0.7, 0.6, lo, hi),
          fixed(6, 9, {0.75, 0.25}, 0.2, 0.1, lo, hi),
          fixed(10, 16, {0.25, 0.25, 0.25, 0.25}, 0.5, 0.3, lo, hi),
          fixed(17, 22, {0.5, 0.5}, 0.2, 0.1, lo, hi),
          fixed(23, 25, {0.2, 0.2, 0.2, 0.2, 0.2}, 0.4, 0.15, lo, hi),
          fixed(26, 30, {0.5, 0.5}, 0.7, 0.55, lo, hi),
      };
      break;
    }
    case 5: {
      constexpr int lo = 380, hi = 400;
      // The published table lists segment 4 as 19-24 and segment 5 as 24-30;
      // t = 24 is assigned to segment 5.
      spec.segments = {
          uniform(1, 6, {0.25, 0.25, 0.25, 0.25}, {0.20, 0.30, 0.05, 0.10}, lo, hi),
          uniform(7, 12, {0.5, 0.5}, {0.45, 0.55, 0.25, 0.35}, lo, hi),
          uniform(13, 18, {0.5, 0.25, 0.25}, {0.15, 0.25, 0.05, 0.10}, lo, hi),
          uniform(19, 23, {kThird, 2 * kThird}, {0.40, 0.50, 0.20, 0.30}, lo, hi),
          uniform(24, 30, {0.25, 0.25, 0.25, 0.25}, {0.15, 0.25, 0.05, 0.10}, lo, hi),
      };
      break;
    }
    case 6: {
      constexpr int lo = 380, hi = 400;
      // Link probabilities are not published for this setting; a dense
      // fixed law is used. Segment 4 ends at 23 so segment 5 can be 24-25.
      constexpr double pw = 0.8, pb = 0.2;
      spec.segments = {
          fixed(1, 5, {0.5, 0.5}, pw, pb, lo, hi),
          fixed(6, 11, {kThird, kThird, kThird}, pw, pb, lo, hi),
          fixed(12, 19, {0.75, 0.25}, pw, pb, lo, hi),
          fixed(20, 23, {0.5, 0.5}, pw, pb, lo, hi),
          fixed(24, 25, {0.75, 0.25}, pw, pb, lo, hi),
          fixed(26, 30, {0.4, 0.2, 0.4}, pw, pb, lo, hi),
      };
      spec.rho = 0.7;
      spec.correlation = CorrelationModel::MarkovChain;
      break;
    }
    default:
      throw Error(ErrorCode::UnknownSetting, "unknown setting " + std::to_string(k) + " (expected 1..6)");
  }
  return spec;
}

std::vector<int> apportion(const std::vector<double>& ratios, int n) {
  std::vector<int> sizes(ratios.size());
  std::vector<double> remainder(ratios.size());
  int assigned = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    double exact = ratios[i] * n;
    // Snap values within rounding noise of an integer, e.g. (1/3) * 9.
    double rounded = std::round(exact);
    if (std::abs(exact - rounded) < 1e-9) exact = rounded;
    sizes[i] = static_cast<int>(std::floor(exact));
    remainder[i] = exact - sizes[i];
    assigned += sizes[i];
  }
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n && i < order.size(); ++i, ++assigned) ++sizes[order[i]];
  return sizes;
}

std::vector<std::uint8_t> correlated_pair_sequence(double p, double rho, std::size_t length,
                                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> out(length);
  const double stay_on = p + rho * (1.0 - p);
  const double turn_on = p * (1.0 - rho);
  for (std::size_t i = 0; i < length; ++i) {
    double q = i == 0 ? p : (out[i - 1] ? stay_on : turn_on);
    out[i] = bernoulli(rng, q);
  }
  return out;
}

Generated generate(const SettingSpec& spec) {
  validate(spec);
  const int T = spec.num_snapshots();
  int universe = 0;
  for (const auto& s : spec.segments) universe = std::max(universe, s.max_nodes);
  const auto U = static_cast<std::size_t>(universe);

  const int width = static_cast<int>(std::to_string(universe - 1).size());
  std::vector<std::string> labels(U);
  for (std::size_t i = 0; i < U; ++i) {
    std::string num = std::to_string(i);
    labels[i] = "v" + std::string(width - static_cast<int>(num.size()), '0') + num;
  }

  GroundTruth truth;
  truth.change_points = spec.change_points();

  // Planted partition per segment over the whole universe.
  std::vector<std::vector<int>> planted;
  for (std::size_t m = 0; m < spec.segments.size(); ++m) {
    Rng rng(derive_seed(spec.seed, {1, m}));
    std::vector<NodeIndex> perm(U);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto sizes = apportion(spec.segments[m].ratios, universe);
    std::vector<int> community(U);
    std::size_t pos = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      for (int j = 0; j < sizes[c]; ++j) community[perm[pos++]] = static_cast<int>(c) + 1;
    }
    std::vector<NodeIndex> nodes(U);
    std::iota(nodes.begin(), nodes.end(), 0);
    truth.assignments.emplace_back(nodes, community);
    planted.push_back(std::move(community));
  }

  const bool markov = spec.correlation == CorrelationModel::MarkovChain && spec.rho > 0.0;
  std::vector<std::uint8_t> state(markov ? U * (U - 1) / 2 : 0);

  std::vector<Snapshot> snapshots;
  snapshots.reserve(T);
  std::size_t m = 0;
  for (int t = 1; t <= T; ++t) {
    while (spec.segments[m].last < t) ++m;
    const auto& seg = spec.segments[m];
    const auto& community = planted[m];
    Rng rng(derive_seed(spec.seed, {2, static_cast<std::uint64_t>(t)}));

    int n_t = std::uniform_int_distribution<int>(seg.min_nodes, seg.max_nodes)(rng);
    std::vector<NodeIndex> order(U);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> active(U, 0);
    for (int i = 0; i < n_t; ++i) active[order[i]] = 1;

    double pw = 0.0, pb = 0.0;
    if (const auto* f = std::get_if<FixedLaw>(&seg.law)) {
      pw = f->within;
      pb = f->between;
    } else {
      const auto& u = std::get<UniformLaw>(seg.law);
      pw = std::uniform_real_distribution<double>(u.within_lo, u.within_hi)(rng);
      pb = std::uniform_real_distribution<double>(u.between_lo, u.between_hi)(rng);
    }
    truth.link_probs.emplace_back(pw, pb);

    const bool restart_chain = t == seg.first;
    std::vector<Edge> edges;
    std::size_t pair = 0;
    for (std::size_t i = 0; i < U; ++i) {
      for (std::size_t j = i + 1; j < U; ++j, ++pair) {
        double p = community[i] == community[j] ? pw : pb;
        bool present = false;
        if (markov) {
          // The latent pair state evolves even while an endpoint is inactive.
          double q = restart_chain ? p : (state[pair] ? p + spec.rho * (1.0 - p) : p * (1.0 - spec.rho));
          state[pair] = bernoulli(rng, q);
          present = state[pair] && active[i] && active[j];
        } else if (active[i] && active[j]) {
          present = bernoulli(rng, p);
        }
        if (present) edges.emplace_back(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j));
      }
    }
    snapshots.emplace_back(std::move(edges));
  }

  return {GraphSequence(std::move(labels), std::move(snapshots)), std::move(truth)};
}

std::string format_ground_truth(const GraphSequence& seq, const GroundTruth& truth) {
  std::ostringstream out;
  out << "tau:";
  for (int t : truth.change_points) out << ' ' << t;
  out << '\n';
  for (std::size_t m = 0; m < truth.assignments.size(); ++m) {
    const auto& a = truth.assignments[m];
    out << "segment " << m + 1 << ':';
    for (std::size_t i = 0; i < a.size(); ++i) out << ' ' << seq.label(a.nodes()[i]) << '=' << a.labels()[i];
    out << '\n';
  }
  return out.str();
}

TruthRecord to_truth_record(const GraphSequence& seq, const GroundTruth& truth) {
  TruthRecord rec;
  rec.change_points = truth.change_points;
  for (const auto& a : truth.assignments) {
    auto& seg = rec.segments.emplace_back();
    for (std::size_t i = 0; i < a.size(); ++i) seg.emplace_back(seq.label(a.nodes()[i]), a.labels()[i]);
  }
  return rec;
}

TruthRecord parse_ground_truth(const std::string& text) {
  TruthRecord rec;
  std::istringstream in(text);
  std::string line;
  bool saw_tau = false;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, "ground truth line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "tau:") {
      int t;
      while (ls >> t) rec.change_points.push_back(t);
      if (!ls.eof()) fail("bad change point list");
      saw_tau = true;
    } else if (head == "segment") {
      std::string idx;
      ls >> idx;
      if (idx.empty() || idx.back() != ':') fail("expected 'segment <m>:'");
      if (std::stoul(idx.substr(0, idx.size() - 1)) != rec.segments.size() + 1) fail("segments out of order");
      auto& seg = rec.segments.emplace_back();
      std::string tok;
      while (ls >> tok) {
        auto eq = tok.rfind('=');
        if (eq == std::string::npos || eq == 0) fail("expected label=community");
        seg.emplace_back(tok.substr(0, eq), std::stoi(tok.substr(eq + 1)));
      }
    } else {
      fail("unexpected '" + head + "'");
    }
  }
  if (!saw_tau) throw Error(ErrorCode::ParseError, "ground truth lacks a 'tau:' line");
  if (rec.segments.size() != rec.change_points.size() + 1) {
    throw Error(ErrorCode::ParseError, "ground truth needs one segment line per segment");
  }
  return rec;
}

std::string setting_to_json(const SettingSpec& spec) {
  nlohmann::ordered_json j;
  j["rho"] = spec.rho;
  j["correlation"] = spec.correlation == CorrelationModel::MarkovChain ? "markov" : "independent";
  j["seed"] = spec.seed;
  auto& segs = j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : spec.segments) {
    nlohmann::ordered_json js;
    js["first"] = s.first;
    js["last"] = s.last;
    js["ratios"] = s.ratios;
    if (const auto* f = std::get_if<FixedLaw>(&s.law)) {
      js["law"] = {{"type", "fixed"}, {"within", f->within}, {"between", f->between}};
    } else {
      const auto& u = std::get<UniformLaw>(s.law);
      js["law"] = {{"type", "uniform"},
                   {"within", {u.within_lo, u.within_hi}},
                   {"between", {u.between_lo, u.between_hi}}};
    }
    js["nodes"] = {s.min_nodes, s.max_nodes};
    segs.push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

namespace {

// Accepts 0.25 or "1/4".
double parse_ratio(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  auto s = v.get<std::string>();
  auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

}  // namespace

SettingSpec setting_from_json(const std::string& text) {
  SettingSpec spec;
  try {
    auto j = nlohmann::json::parse(text);
    spec.rho = j.value("rho", 0.0);
    auto corr = j.value("correlation", std::string(spec.rho > 0.0 ? "markov" : "independent"));
    if (corr == "markov") {
      spec.correlation = CorrelationModel::MarkovChain;
    } else if (corr == "independent") {
      spec.correlation = CorrelationModel::Independent;
    } else {
      throw Error(ErrorCode::InvalidSpec, "unknown correlation model '" + corr + "'");
    }
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& js : j.at("segments")) {
      SegmentSpec s;
      s.first = js.at("first").get<int>();
      s.last = js.at("last").get<int>();
      for (const auto& r : js.at("ratios")) s.ratios.push_back(parse_ratio(r));
      const auto& law = js.at("law");
      auto type = law.at("type").get<std::string>();
      if (type == "fixed") {
        s.law = FixedLaw{law.at("within").get<double>(), law.at("between").get<double>()};
      } else if (type == "uniform") {
        s.law = UniformLaw{law.at("within").at(0).get<double>(), law.at("within").at(1).get<double>(),
                           law.at("between").at(0).get<double>(), law.at("between").at(1).get<double>()};
      } else {
        throw Error(ErrorCode::InvalidSpec, "unknown link law '" + type + "'");
      }
      s.min_nodes = js.at("nodes").at(0).get<int>();
      s.max_nodes = js.at("nodes").at(1).get<int>();
      spec.segments.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("setting file: ") + e.what());
  }
  validate(spec);
  return spec;
}

}  // namespace mdlseg
