#include "segment_model.hpp"

#include <algorithm>
#include <cmath>

#include "mdlseg/error.hpp"

namespace mdlseg::detail {

namespace {

constexpr std::int64_t kTableSize = 1 << 20;

struct LogTables {
  std::vector<double> xlog;  // x log2 x
  std::vector<double> half;  // 0.5 log2 x

  LogTables() : xlog(kTableSize), half(kTableSize) {
    for (std::int64_t x = 1; x < kTableSize; ++x) {
      double l = std::log2(static_cast<double>(x));
      xlog[x] = static_cast<double>(x) * l;
      half[x] = 0.5 * l;
    }
  }
};

const LogTables& tables() {
  static const LogTables t;
  return t;
}

inline double xlog2(std::int64_t x, const LogTables& tb) {
  if (x < kTableSize) return tb.xlog[x];
  auto d = static_cast<double>(x);
  return d * std::log2(d);
}

inline double cost(std::int64_t e, std::int64_t n, const LogTables& tb) {
  if (n <= 0) return 0.0;
  double half = n < kTableSize ? tb.half[n] : 0.5 * std::log2(static_cast<double>(n));
  return half + xlog2(n, tb) - xlog2(e, tb) - xlog2(n - e, tb);
}

inline std::int64_t within(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace

double block_cost(std::int64_t e, std::int64_t n) { return cost(e, n, tables()); }

SegmentModel::SegmentModel(const GraphSequence& seq, const SegmentView& seg, NodeCounting counting)
    : counting_(counting), T_(seg.length()) {
  nodes_ = active_nodes(seq, seg);
  const std::size_t n = nodes_.size();
  std::vector<std::uint32_t> local(seq.num_nodes(), UINT32_MAX);
  for (std::size_t i = 0; i < n; ++i) local[nodes_[i]] = static_cast<std::uint32_t>(i);

  adj_off_.assign(n + 1, 0);
  for (int t = seg.start; t < seg.end; ++t) {
    for (const auto& e : seq.snapshot(t).edges()) {
      ++adj_off_[local[e.u] + 1];
      ++adj_off_[local[e.v] + 1];
    }
  }
  for (std::size_t i = 0; i < n; ++i) adj_off_[i + 1] += adj_off_[i];
  adj_t_.resize(adj_off_[n]);
  adj_u_.resize(adj_off_[n]);
  std::vector<std::size_t> fill(adj_off_.begin(), adj_off_.end() - 1);
  for (int t = seg.start; t < seg.end; ++t) {
    auto lt = static_cast<std::uint32_t>(t - seg.start);
    for (const auto& e : seq.snapshot(t).edges()) {
      auto a = local[e.u], b = local[e.v];
      adj_t_[fill[a]] = lt;
      adj_u_[fill[a]++] = b;
      adj_t_[fill[b]] = lt;
      adj_u_[fill[b]++] = a;
    }
  }

  if (counting_ == NodeCounting::SnapshotActive) {
    time_off_.assign(n + 1, 0);
    for (int t = seg.start; t < seg.end; ++t) {
      for (NodeIndex g : seq.active_at(t)) ++time_off_[local[g] + 1];
    }
    for (std::size_t i = 0; i < n; ++i) time_off_[i + 1] += time_off_[i];
    times_.resize(time_off_[n]);
    std::vector<std::size_t> tf(time_off_.begin(), time_off_.end() - 1);
    for (int t = seg.start; t < seg.end; ++t) {
      for (NodeIndex g : seq.active_at(t)) times_[tf[local[g]]++] = static_cast<std::uint32_t>(t - seg.start);
    }
  }

  set_labels(std::vector<int>(n, 0));
}

double SegmentModel::complexity(int nonempty) const {
  if (nonempty <= 1) return 0.0;
  double c = nonempty;
  return (1.0 + static_cast<double>(nodes_.size())) * std::log2(c);
}

void SegmentModel::reserve_slots(int cap) {
  if (cap <= cap_) return;
  int new_cap = std::max(cap, std::max(4, cap_ * 2));
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(T_) * new_cap, 0);
  std::vector<std::int64_t> edges(static_cast<std::size_t>(T_) * new_cap * new_cap, 0);
  for (int t = 0; t < T_; ++t) {
    for (int x = 0; x < slots_; ++x) {
      sizes[t * new_cap + x] = size_at(t, x);
      for (int y = 0; y < slots_; ++y) edges[(t * new_cap + x) * new_cap + y] = edge_count(t, x, y);
    }
  }
  sizes_ = std::move(sizes);
  edges_ = std::move(edges);
  slot_size_.resize(new_cap, 0);
  cap_ = new_cap;
  k_.assign(static_cast<std::size_t>(T_) * cap_, 0);
  prepared_ = static_cast<std::size_t>(-1);
}

void SegmentModel::set_labels(std::vector<int> labels) {
  if (labels.size() != nodes_.size()) {
    throw Error(ErrorCode::InvariantViolation, "label vector size mismatch");
  }
  labels_ = std::move(labels);
  int max_label = -1;
  for (int l : labels_) max_label = std::max(max_label, l);
  slots_ = std::max(max_label + 1, 1);
  rebuild();
}

void SegmentModel::rebuild() {
  if (slots_ > cap_) {
    // Contents are rebuilt below, so skip the copy in reserve_slots.
    int keep = slots_;
    slots_ = 0;
    reserve_slots(keep);
    slots_ = keep;
  }
  std::fill(sizes_.begin(), sizes_.end(), 0);
  std::fill(edges_.begin(), edges_.end(), 0);
  std::fill(slot_size_.begin(), slot_size_.end(), 0);
  for (std::size_t v = 0; v < nodes_.size(); ++v) ++slot_size_[labels_[v]];
  if (counting_ == NodeCounting::SnapshotActive) {
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      for (auto i = time_off_[v]; i < time_off_[v + 1]; ++i) ++size_at(times_[i], labels_[v]);
    }
  } else {
    for (int t = 0; t < T_; ++t) {
      for (int x = 0; x < slots_; ++x) size_at(t, x) = slot_size_[x];
    }
  }
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    for (auto i = adj_off_[v]; i < adj_off_[v + 1]; ++i) {
      if (adj_u_[i] > v) {
        int a = labels_[v], b = labels_[adj_u_[i]];
        ++edge_count(adj_t_[i], a, b);
        if (a != b) ++edge_count(adj_t_[i], b, a);
      }
    }
  }
  nonempty_ = 0;
  for (int x = 0; x < slots_; ++x) nonempty_ += slot_size_[x] > 0;
  prepared_ = static_cast<std::size_t>(-1);
  recompute();
}

double SegmentModel::recompute() {
  const auto& tb = tables();
  double bits = complexity(nonempty_);
  for (int t = 0; t < T_; ++t) {
    for (int x = 0; x < slots_; ++x) {
      auto nx = size_at(t, x);
      if (nx == 0) continue;
      bits += cost(edge_count(t, x, x), within(nx), tb);
      for (int y = x + 1; y < slots_; ++y) {
        auto ny = size_at(t, y);
        if (ny > 0) bits += cost(edge_count(t, x, y), nx * ny, tb);
      }
    }
  }
  mdl_ = bits;
  return bits;
}

int SegmentModel::add_slot() {
  reserve_slots(slots_ + 1);
  int x = slots_++;
  slot_size_[x] = 0;
  for (int t = 0; t < T_; ++t) {
    size_at(t, x) = 0;
    for (int y = 0; y < slots_; ++y) edge_count(t, x, y) = edge_count(t, y, x) = 0;
  }
  return x;
}

void SegmentModel::pop_slot() {
  if (slots_ > 1 && slot_size_[slots_ - 1] == 0) --slots_;
}

void SegmentModel::compact() {
  std::vector<int> remap(slots_, -1);
  int next = 0;
  for (int x = 0; x < slots_; ++x) {
    if (slot_size_[x] > 0) remap[x] = next++;
  }
  if (next == slots_) return;
  for (auto& l : labels_) l = remap[l];
  slots_ = std::max(next, 1);
  rebuild();
}

void SegmentModel::prepare(std::size_t v) {
  std::fill(k_.begin(), k_.begin() + static_cast<std::ptrdiff_t>(T_) * cap_, 0);
  for (auto i = adj_off_[v]; i < adj_off_[v + 1]; ++i) {
    ++k_[adj_t_[i] * cap_ + labels_[adj_u_[i]]];
  }
  prepared_ = v;
}

double SegmentModel::delta(std::size_t v, int to) const {
  const int from = labels_[v];
  if (from == to) return 0.0;
  if (prepared_ != v) throw Error(ErrorCode::InvariantViolation, "delta() without prepare()");
  const auto& tb = tables();

  auto per_time = [&](int t) {
    const std::int64_t* kt = &k_[t * cap_];
    const std::int64_t na = size_at(t, from), nb = size_at(t, to);
    double before = 0.0, after = 0.0;
    for (int x = 0; x < slots_; ++x) {
      if (x == from || x == to) continue;
      auto nx = size_at(t, x);
      if (nx == 0) continue;
      auto eax = edge_count(t, from, x), ebx = edge_count(t, to, x);
      before += cost(eax, na * nx, tb) + cost(ebx, nb * nx, tb);
      after += cost(eax - kt[x], (na - 1) * nx, tb) + cost(ebx + kt[x], (nb + 1) * nx, tb);
    }
    auto eaa = edge_count(t, from, from), ebb = edge_count(t, to, to), eab = edge_count(t, from, to);
    before += cost(eaa, within(na), tb) + cost(ebb, within(nb), tb) + cost(eab, na * nb, tb);
    after += cost(eaa - kt[from], within(na - 1), tb) + cost(ebb + kt[to], within(nb + 1), tb) +
             cost(eab + kt[from] - kt[to], (na - 1) * (nb + 1), tb);
    return after - before;
  };

  double d = 0.0;
  if (counting_ == NodeCounting::SnapshotActive) {
    for (auto i = time_off_[v]; i < time_off_[v + 1]; ++i) d += per_time(static_cast<int>(times_[i]));
  } else {
    for (int t = 0; t < T_; ++t) d += per_time(t);
  }

  int nonempty = nonempty_;
  if (slot_size_[from] == 1) --nonempty;
  if (slot_size_[to] == 0) ++nonempty;
  return d + complexity(nonempty) - complexity(nonempty_);
}

void SegmentModel::move(std::size_t v, int to) {
  const int from = labels_[v];
  if (from == to) return;
  if (prepared_ != v) prepare(v);
  double d = delta(v, to);

  auto apply = [&](int t) {
    --size_at(t, from);
    ++size_at(t, to);
  };
  if (counting_ == NodeCounting::SnapshotActive) {
    for (auto i = time_off_[v]; i < time_off_[v + 1]; ++i) apply(static_cast<int>(times_[i]));
  } else {
    for (int t = 0; t < T_; ++t) apply(t);
  }
  for (auto i = adj_off_[v]; i < adj_off_[v + 1]; ++i) {
    int t = static_cast<int>(adj_t_[i]);
    int x = labels_[adj_u_[i]];
    // Edge v-u moves from block (from, x) to block (to, x).
    --edge_count(t, from, x);
    if (from != x) --edge_count(t, x, from);
    ++edge_count(t, to, x);
    if (to != x) ++edge_count(t, x, to);
  }
  if (slot_size_[from]-- == 1) --nonempty_;
  if (slot_size_[to]++ == 0) ++nonempty_;
  labels_[v] = to;
  mdl_ += d;
  prepared_ = static_cast<std::size_t>(-1);
}

double SegmentModel::merge_delta(int a, int b) const {
  if (a == b || slot_size_[a] == 0 || slot_size_[b] == 0) return 0.0;
  const auto& tb = tables();
  double d = 0.0;
  for (int t = 0; t < T_; ++t) {
    const std::int64_t na = size_at(t, a), nb = size_at(t, b), nm = na + nb;
    if (nm == 0) continue;
    double before = 0.0, after = 0.0;
    for (int x = 0; x < slots_; ++x) {
      if (x == a || x == b) continue;
      auto nx = size_at(t, x);
      if (nx == 0) continue;
      auto eax = edge_count(t, a, x), ebx = edge_count(t, b, x);
      before += cost(eax, na * nx, tb) + cost(ebx, nb * nx, tb);
      after += cost(eax + ebx, nm * nx, tb);
    }
    auto eaa = edge_count(t, a, a), ebb = edge_count(t, b, b), eab = edge_count(t, a, b);
    before += cost(eaa, within(na), tb) + cost(ebb, within(nb), tb) + cost(eab, na * nb, tb);
    after += cost(eaa + ebb + eab, within(nm), tb);
    d += after - before;
  }
  return d + complexity(nonempty_ - 1) - complexity(nonempty_);
}

void SegmentModel::merge(int a, int b) {
  if (a == b || slot_size_[b] == 0) return;
  double d = merge_delta(a, b);
  for (int t = 0; t < T_; ++t) {
    size_at(t, a) += size_at(t, b);
    size_at(t, b) = 0;
    std::int64_t eab = edge_count(t, a, b);
    edge_count(t, a, a) += edge_count(t, b, b) + eab;
    edge_count(t, b, b) = 0;
    edge_count(t, a, b) = edge_count(t, b, a) = 0;
    for (int x = 0; x < slots_; ++x) {
      if (x == a || x == b) continue;
      edge_count(t, a, x) += edge_count(t, b, x);
      edge_count(t, x, a) = edge_count(t, a, x);
      edge_count(t, b, x) = edge_count(t, x, b) = 0;
    }
  }
  for (auto& l : labels_) {
    if (l == b) l = a;
  }
  slot_size_[a] += slot_size_[b];
  slot_size_[b] = 0;
  --nonempty_;
  mdl_ += d;
  prepared_ = static_cast<std::size_t>(-1);
}

bool SegmentModel::adjacent(int a, int b) const {
  for (int t = 0; t < T_; ++t) {
    if (edge_count(t, a, b) > 0) return true;
  }
  return false;
}

std::vector<int> SegmentModel::neighbour_slots(std::size_t v) const {
  std::vector<int> out;
  for (auto i = adj_off_[v]; i < adj_off_[v + 1]; ++i) {
    int x = labels_[adj_u_[i]];
    if (x != labels_[v]) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> SegmentModel::aggregate_neighbours(std::size_t v) const {
  std::vector<std::size_t> out(adj_u_.begin() + static_cast<std::ptrdiff_t>(adj_off_[v]),
                               adj_u_.begin() + static_cast<std::ptrdiff_t>(adj_off_[v + 1]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> SegmentModel::members(int x) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (labels_[v] == x) out.push_back(v);
  }
  return out;
}

CommunityAssignment SegmentModel::to_assignment() const {
  std::vector<int> labels(labels_.size());
  for (std::size_t v = 0; v < labels_.size(); ++v) labels[v] = labels_[v] + 1;
  return CommunityAssignment(nodes_, std::move(labels)).normalized();
}

}  // namespace mdlseg::detail
