#include "mdlseg/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mdlseg/error.hpp"

namespace mdlseg {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

LabelPair parse_line(const std::string& line, int line_no) {
  auto tab = line.find('\t');
  std::string a, b;
  if (tab != std::string::npos) {
    a = trim(line.substr(0, tab));
    b = trim(line.substr(tab + 1));
  } else {
    std::istringstream ls(line);
    std::string extra;
    ls >> a >> b >> extra;
    if (!extra.empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two labels");
    }
  }
  if (a.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty label");
  if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop on '" + a + "'");
  return {a, b};
}

const char* code_name(ChangePointCode c) { return c == ChangePointCode::Uniform ? "uniform" : "gaps"; }
const char* counting_name(NodeCounting c) {
  return c == NodeCounting::SegmentActive ? "segment" : "snapshot";
}

}  // namespace

EdgeLists parse_edge_lists(const std::string& text) {
  EdgeLists lists;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool sectioned = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("--t", 0) == 0) {
      int k = 0;
      try {
        k = std::stoi(line.substr(3));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad section header");
      }
      if (k != static_cast<int>(lists.size()) + 1 || (!sectioned && !lists.empty())) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                               ": sections must be numbered 1, 2, ... in order");
      }
      sectioned = true;
      lists.emplace_back();
      continue;
    }
    if (lists.empty()) lists.emplace_back();
    lists.back().push_back(parse_line(raw, line_no));
  }
  return lists;
}

GraphSequence read_sequence(const fs::path& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      auto ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".tsv" || ext == ".edges")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    EdgeLists lists;
    for (const auto& f : files) {
      auto parsed = parse_edge_lists(read_file(f));
      if (parsed.size() > 1) {
        throw Error(ErrorCode::ParseError, f.string() + ": section headers are not allowed in snapshot files");
      }
      lists.push_back(parsed.empty() ? std::vector<LabelPair>{} : std::move(parsed.front()));
    }
    return build_sequence(lists);
  }
  return build_sequence(parse_edge_lists(read_file(path)));
}

std::string format_snapshot(const GraphSequence& seq, int t) {
  std::ostringstream out;
  for (const auto& e : seq.snapshot(t).edges()) out << seq.label(e.u) << '\t' << seq.label(e.v) << '\n';
  return out.str();
}

std::string format_sectioned(const GraphSequence& seq) {
  std::ostringstream out;
  for (int t = 1; t <= seq.num_snapshots(); ++t) out << "--t " << t << '\n' << format_snapshot(seq, t);
  return out.str();
}

void write_sequence_dir(const GraphSequence& seq, const fs::path& dir) {
  fs::create_directories(dir);
  const int width = std::max(3, static_cast<int>(std::to_string(seq.num_snapshots()).size()));
  for (int t = 1; t <= seq.num_snapshots(); ++t) {
    std::string num = std::to_string(t);
    auto name = "t" + std::string(width - static_cast<int>(num.size()), '0') + num + ".tsv";
    write_file(dir / name, format_snapshot(seq, t));
  }
}

std::string format_result(const GraphSequence& seq, const DetectionResult& result, const ResultMeta& meta) {
  ojson j;
  j["format"] = "mdlseg-result";
  j["version"] = 1;
  if (!meta.timestamp.empty()) j["generated"] = meta.timestamp;
  j["seed"] = meta.seed;
  j["options"] = {{"change_point_code", code_name(meta.mdl.change_point_code)},
                  {"counting", counting_name(meta.mdl.counting)}};
  j["num_snapshots"] = seq.num_snapshots();
  j["num_nodes"] = seq.num_nodes();
  j["change_points"] = result.change_points;
  j["mdl"] = result.mdl_value;

  auto& segs = j["segments"] = ojson::array();
  auto views = segments_of(result.change_points, seq.num_snapshots());
  for (std::size_t m = 0; m < views.size(); ++m) {
    const auto& a = result.segmentation.assignments.at(m);
    ojson s;
    s["start"] = views[m].start;
    s["end"] = views[m].end - 1;
    s["num_communities"] = a.num_communities();
    ojson comm = ojson::object();
    for (std::size_t i = 0; i < a.size(); ++i) comm[seq.label(a.nodes()[i])] = a.labels()[i];
    s["communities"] = std::move(comm);
    segs.push_back(std::move(s));
  }

  auto& cands = j["candidates"] = ojson::array();
  for (const auto& c : result.candidates) cands.push_back({{"t", c.t}, {"distance", c.distance}});
  auto& trace = j["trace"] = ojson::array();
  for (const auto& e : result.trace) {
    trace.push_back({{"action", std::string(to_string(e.action))},
                     {"t", e.t},
                     {"mdl_before", e.mdl_before},
                     {"mdl_after", e.mdl_after},
                     {"accepted", e.accepted}});
  }
  j["warnings"] = result.warnings;
  j["segment_fits"] = result.segment_fits;
  return j.dump(2) + "\n";
}

StoredResult parse_result(const std::string& text) {
  StoredResult out;
  try {
    auto j = ojson::parse(text);
    if (j.value("format", std::string()) != "mdlseg-result") {
      throw Error(ErrorCode::ParseError, "not an mdlseg result document");
    }
    out.num_snapshots = j.at("num_snapshots").get<int>();
    out.change_points = j.at("change_points").get<std::vector<int>>();
    out.mdl_value = j.at("mdl").get<double>();
    if (j.contains("options")) {
      const auto& o = j["options"];
      out.mdl.change_point_code = o.value("change_point_code", std::string("gaps")) == "uniform"
                                      ? ChangePointCode::Uniform
                                      : ChangePointCode::Gaps;
      out.mdl.counting = o.value("counting", std::string("snapshot")) == "segment"
                             ? NodeCounting::SegmentActive
                             : NodeCounting::SnapshotActive;
    }
    for (const auto& s : j.at("segments")) {
      auto& seg = out.segments.emplace_back();
      for (const auto& [label, id] : s.at("communities").items()) seg.emplace_back(label, id.get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("result file: ") + e.what());
  }
  if (out.segments.size() != out.change_points.size() + 1) {
    throw Error(ErrorCode::ParseError, "result file: segment count does not match change points");
  }
  return out;
}

Segmentation to_segmentation(const GraphSequence& seq, const StoredResult& stored) {
  Segmentation s;
  s.change_points = stored.change_points;
  for (const auto& seg : stored.segments) {
    std::vector<NodeIndex> nodes;
    std::vector<int> labels;
    for (const auto& [label, id] : seg) {
      NodeIndex i = seq.index_of(label);
      if (i == seq.num_nodes()) throw Error(ErrorCode::ParseError, "unknown node label '" + label + "'");
      nodes.push_back(i);
      labels.push_back(id);
    }
    s.assignments.emplace_back(std::move(nodes), std::move(labels));
  }
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace mdlseg
