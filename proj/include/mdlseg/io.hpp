#pragma once

#include <filesystem>
#include <string>

#include "mdlseg/changepoint.hpp"
#include "mdlseg/graph.hpp"
#include "mdlseg/mdl.hpp"

namespace mdlseg {

/// Edge-list text: `a<TAB>b` per line, blank lines and `#` comments skipped,
/// a lone label registers an isolated node. `--t <k>` starts snapshot k.
EdgeLists parse_edge_lists(const std::string& text);

/// Reads a sectioned file, or a directory of `*.tsv` / `*.edges` files
/// taken in filename order.
GraphSequence read_sequence(const std::filesystem::path& path);

std::string format_snapshot(const GraphSequence& seq, int t);
std::string format_sectioned(const GraphSequence& seq);

/// Writes one zero-padded `t###.tsv` per snapshot into dir.
void write_sequence_dir(const GraphSequence& seq, const std::filesystem::path& dir);

struct ResultMeta {
  std::uint64_t seed = 0;
  MdlOptions mdl;
  std::string timestamp;  // omitted when empty
};

/// JSON result document with stable key order and 1-based times.
std::string format_result(const GraphSequence& seq, const DetectionResult& result,
                          const ResultMeta& meta);

struct StoredResult {
  int num_snapshots = 0;
  std::vector<int> change_points;
  double mdl_value = 0.0;
  MdlOptions mdl;
  /// Per segment: (label, community id).
  std::vector<std::vector<std::pair<std::string, int>>> segments;
};

StoredResult parse_result(const std::string& text);

/// Rebuilds a Segmentation over seq's node indices.
Segmentation to_segmentation(const GraphSequence& seq, const StoredResult& stored);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mdlseg
