#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures/derived_values.hpp"
#include "helpers.hpp"
#include "mdlseg/mdl.hpp"
#include "mdlseg/synth.hpp"
#include "segment_model.hpp"

using namespace mdlseg;
using testing::code_of;

namespace {

// 3 nodes, edges {0,1},{1,2}, T=1.
GraphSequence path3() { return testing::from_pairs({{{0, 1}, {1, 2}}}); }

Segmentation single_community(const GraphSequence& seq, std::vector<int> tau) {
  Segmentation s;
  s.change_points = std::move(tau);
  for (const auto& seg : segments_of(s.change_points, seq.num_snapshots())) {
    s.assignments.push_back(CommunityAssignment::single(active_nodes(seq, seg)));
  }
  return s;
}

// Random change points and random partitions of each segment's active nodes.
Segmentation random_segmentation(std::mt19937_64& rng, const GraphSequence& seq) {
  const int T = seq.num_snapshots();
  Segmentation s;
  std::bernoulli_distribution cut(0.3);
  for (int t = 2; t <= T; ++t)
    if (cut(rng)) s.change_points.push_back(t);
  for (const auto& seg : segments_of(s.change_points, T)) {
    auto nodes = active_nodes(seq, seg);
    const int c = std::uniform_int_distribution<int>(1, 4)(rng);
    std::uniform_int_distribution<int> pick(1, c);
    std::vector<int> labels(nodes.size());
    for (auto& l : labels) l = pick(rng);
    s.assignments.emplace_back(nodes, labels);
  }
  return s;
}

double decomposed(const GraphSequence& seq, const Segmentation& s, const MdlOptions& opts = {}) {
  double bits = change_point_code_length(s.change_points, seq.num_snapshots(), opts.change_point_code);
  auto segs = segments_of(s.change_points, seq.num_snapshots());
  for (std::size_t m = 0; m < segs.size(); ++m) bits += segment_mdl(seq, segs[m], s.assignments[m], opts);
  return bits;
}

}  // namespace

TEST_CASE("three-node path") {
  auto seq = path3();
  auto s = single_community(seq, {});
  CHECK(model_code_length(seq, s) == doctest::Approx(derived::kModelCodeT1Path3).epsilon(1e-12));
  CHECK(residual_code_length(seq, s) == doctest::Approx(-derived::kBlockLogLikE2N3).epsilon(1e-12));
  CHECK(full_mdl(seq, s) == doctest::Approx(derived::kFullMdlT1Path3).epsilon(1e-12));
}

TEST_CASE("one community costs no assignment bits") {
  std::mt19937_64 rng(2);
  auto seq = testing::random_sequence(rng, 6, 12, 0.3);
  auto s = single_community(seq, {3, 5});
  double expected = change_point_code_length(s.change_points, 6);
  for (int t = 1; t <= 6; ++t) {
    auto n = static_cast<double>(seq.active_at(t).size());
    expected += 0.5 * std::log2(n * (n - 1) / 2);
  }
  CHECK(model_code_length(seq, s) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("adding a change point only moves the change-point terms") {
  std::mt19937_64 rng(4);
  auto seq = testing::random_sequence(rng, 8, 14, 0.25);
  // a fixed assignment over all nodes, valid for every segment once active nodes match
  auto a = single_community(seq, {});
  auto b = single_community(seq, {4});
  const double cp_a = change_point_code_length(a.change_points, 8);
  const double cp_b = change_point_code_length(b.change_points, 8);
  CHECK(cp_b != cp_a);
  CHECK(model_code_length(seq, b) - cp_b == doctest::Approx(model_code_length(seq, a) - cp_a));
  CHECK(residual_code_length(seq, b) == doctest::Approx(residual_code_length(seq, a)));
}

TEST_CASE("perfect fit has zero residual") {
  // two disjoint triangles labelled as two communities
  auto seq = testing::from_pairs({{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}});
  Segmentation s;
  s.assignments.push_back(CommunityAssignment({0, 1, 2, 3, 4, 5}, {1, 1, 1, 2, 2, 2}));
  CHECK(residual_code_length(seq, s) == 0.0);
  CHECK(segment_mdl(seq, seq.whole(), s.assignments[0]) ==
        doctest::Approx(std::log2(2.0) * 7 + 0.5 * (std::log2(3.0) * 2 + std::log2(9.0))));

  auto one = testing::from_pairs({{{0, 1}, {1, 2}, {0, 2}}, {{0, 1}, {1, 2}, {0, 2}}});
  CHECK(segment_mdl(one, one.whole(), CommunityAssignment::single({0, 1, 2})) ==
        doctest::Approx(2 * 0.5 * std::log2(3.0)));
}

TEST_CASE("repeating every snapshot doubles the residual") {
  std::mt19937_64 rng(8);
  auto seq = testing::random_sequence(rng, 3, 15, 0.3);
  auto lists = export_edge_lists(seq);
  auto twice_lists = lists;
  twice_lists.insert(twice_lists.end(), lists.begin(), lists.end());
  auto twice = build_sequence(twice_lists);
  auto r1 = residual_code_length(seq, single_community(seq, {}));
  auto r2 = residual_code_length(twice, single_community(twice, {}));
  CHECK(r2 == doctest::Approx(2 * r1).epsilon(1e-12));
}

TEST_CASE("relabelling communities leaves the criterion unchanged") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    auto seq = testing::random_sequence(rng, 5, 20, 0.2);
    auto s = random_segmentation(rng, seq);
    auto permuted = s;
    for (auto& a : permuted.assignments) {
      std::vector<int> perm(a.num_communities());
      std::iota(perm.begin(), perm.end(), 1);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> labels;
      for (int l : a.labels()) labels.push_back(perm[l - 1] + 7);
      a = CommunityAssignment(a.nodes(), labels);
    }
    CHECK(full_mdl(seq, permuted) == doctest::Approx(full_mdl(seq, s)).epsilon(1e-12));
  }
}

TEST_CASE("splitting a homogeneous one-community sequence never helps") {
  std::mt19937_64 rng(6);
  auto seq = testing::random_sequence(rng, 7, 16, 0.3);
  const double base = full_mdl(seq, single_community(seq, {}));
  for (int t = 2; t <= 7; ++t) CHECK(full_mdl(seq, single_community(seq, {t})) > base);
}

TEST_CASE("decomposition identity and bounds on random segmentations") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const int T = std::uniform_int_distribution<int>(1, 10)(rng);
    const int n = std::uniform_int_distribution<int>(3, 30)(rng);
    auto seq = testing::random_sequence(rng, T, n, 0.2);
    auto s = random_segmentation(rng, seq);
    for (auto counting : {NodeCounting::SnapshotActive, NodeCounting::SegmentActive}) {
      for (auto code : {ChangePointCode::Gaps, ChangePointCode::Uniform}) {
        MdlOptions opts{code, counting};
        CHECK(std::abs(full_mdl(seq, s, opts) - decomposed(seq, s, opts)) < 1e-9);
        CHECK(residual_code_length(seq, s, opts) >= 0.0);
        CHECK(model_code_length(seq, s, opts) >=
              std::log2(static_cast<double>(s.change_points.size()) + 1.0));
      }
    }
  }
}

TEST_CASE("explicit link probabilities never beat the per-snapshot MLE") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int rep = 0; rep < 100; ++rep) {
    auto seq = testing::random_sequence(rng, 4, 15, 0.3);
    auto s = random_segmentation(rng, seq);
    const double mle = full_mdl(seq, s);
    auto explicit_probs = s;
    auto segs = segments_of(s.change_points, seq.num_snapshots());
    for (std::size_t m = 0; m < segs.size(); ++m) {
      for (int t = segs[m].start; t < segs[m].end; ++t) {
        const int c = s.assignments[m].num_communities();
        LinkProbs p(c, c);
        for (int k = 0; k < c; ++k)
          for (int l = k; l < c; ++l) p(k, l) = p(l, k) = u(rng);
        explicit_probs.probs.push_back(p);
      }
    }
    CHECK(full_mdl(seq, explicit_probs) >= mle - 1e-9);
  }
}

TEST_CASE("uniform change-point code") {
  CHECK(change_point_code_length(std::vector<int>{}, 30, ChangePointCode::Uniform) == 0.0);
  std::vector<int> tau{6, 14};
  CHECK(change_point_code_length(tau, 30, ChangePointCode::Uniform) ==
        doctest::Approx(std::log2(3.0) + 2 * std::log2(30.0)));
  CHECK(change_point_code_length(tau, 30, ChangePointCode::Gaps) ==
        doctest::Approx(std::log2(3.0) + std::log2(6.0) + std::log2(9.0) + std::log2(18.0)));
}

TEST_CASE("invalid segmentations are rejected") {
  std::mt19937_64 rng(1);
  auto seq = testing::random_sequence(rng, 5, 10, 0.4);
  for (std::vector<int> tau : {std::vector<int>{1}, {6}, {3, 3}, {4, 2}}) {
    auto s = single_community(seq, {});
    s.change_points = tau;
    s.assignments.resize(tau.size() + 1, s.assignments[0]);
    CHECK(code_of([&] { full_mdl(seq, s); }) == ErrorCode::InvalidSegmentation);
  }
  auto s = single_community(seq, {3});
  s.assignments.pop_back();
  CHECK(code_of([&] { full_mdl(seq, s); }) == ErrorCode::InvalidSegmentation);
  CHECK(code_of([&] { segment_mdl(seq, seq.whole(), CommunityAssignment::single({0})); }) ==
        ErrorCode::UnassignedNode);
}

TEST_CASE("planted three-block segment beats one community") {
  auto spec = builtin_setting(1);
  spec.seed = 7;
  auto g = generate(spec);
  SegmentView seg{1, 6};
  auto planted = g.truth.assignments[0];
  auto nodes = active_nodes(g.sequence, seg);
  std::vector<int> labels;
  for (auto v : nodes) labels.push_back(planted.label_of(v));
  CommunityAssignment restricted(nodes, labels);
  CHECK(restricted.num_communities() == 3);
  CHECK(segment_mdl(g.sequence, seg, restricted) <
        segment_mdl(g.sequence, seg, CommunityAssignment::single(nodes)));
}

TEST_CASE("incremental segment model agrees with the direct criterion") {
  std::mt19937_64 rng(12);
  for (auto counting : {NodeCounting::SnapshotActive, NodeCounting::SegmentActive}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto seq = testing::random_sequence(rng, 4, 25, 0.2);
      SegmentView seg{1, 5};
      MdlOptions opts{ChangePointCode::Gaps, counting};
      detail::SegmentModel model(seq, seg, counting);
      const int slots = 4;
      while (model.num_slots() < slots) model.add_slot();
      std::uniform_int_distribution<int> pick(0, slots - 1);
      std::vector<int> labels(model.num_nodes());
      for (auto& l : labels) l = pick(rng);
      model.set_labels(labels);
      CHECK(model.mdl() == doctest::Approx(segment_mdl(seq, seg, model.to_assignment(), opts)));

      std::uniform_int_distribution<std::size_t> node(0, model.num_nodes() - 1);
      for (int step = 0; step < 60; ++step) {
        auto v = node(rng);
        int to = pick(rng);
        const double before = model.mdl();
        const double d = model.move_delta(v, to);
        model.move(v, to);
        CHECK(model.mdl() == doctest::Approx(before + d));
        CHECK(model.mdl() == doctest::Approx(segment_mdl(seq, seg, model.to_assignment(), opts)));
      }
      for (int a = 0; a < slots; ++a) {
        for (int b = a + 1; b < slots; ++b) {
          if (model.slot_size(a) == 0 || model.slot_size(b) == 0) continue;
          auto copy = model;
          const double d = copy.merge_delta(a, b);
          const double before = copy.mdl();
          copy.merge(a, b);
          CHECK(copy.mdl() == doctest::Approx(before + d));
          CHECK(copy.recompute() ==
                doctest::Approx(segment_mdl(seq, seg, copy.to_assignment(), opts)));
        }
      }
    }
  }
}
