#include <doctest.h>

#include <random>

#include "fixtures/derived_values.hpp"
#include "helpers.hpp"
#include "mdlseg/eval.hpp"

using namespace mdlseg;
using testing::code_of;

namespace {

CommunityAssignment labelled(std::vector<int> labels) {
  std::vector<NodeIndex> nodes(labels.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<NodeIndex>(i);
  return CommunityAssignment(nodes, labels);
}

CommunityAssignment random_partition(std::mt19937_64& rng, int n) {
  const int c = std::uniform_int_distribution<int>(1, 6)(rng);
  std::vector<int> labels(n);
  for (auto& l : labels) l = std::uniform_int_distribution<int>(1, c)(rng);
  return labelled(labels);
}

}  // namespace

TEST_CASE("nmi examples") {
  auto truth = labelled({1, 1, 2, 2, 3, 3});
  CHECK(nmi(truth, truth) == 1.0);
  CHECK(nmi(labelled({1, 1, 1, 1}), labelled({1, 1, 2, 2})) == 0.0);
  CHECK(nmi(labelled({1, 1, 1}), labelled({2, 2, 2})) == 1.0);
  CHECK(nmi(labelled({1, 2, 1, 2}), labelled({1, 1, 2, 2})) == derived::kNmiCrossed);
  CHECK(nmi(labelled({1, 1, 2, 2, 2, 2}), labelled({1, 1, 1, 2, 2, 2})) ==
        doctest::Approx(derived::kNmiPartial).epsilon(1e-14));
}

TEST_CASE("nmi over partially shared domains") {
  CommunityAssignment est({0, 1, 2, 3}, {1, 1, 2, 2});
  CommunityAssignment truth({2, 3, 4, 5}, {1, 1, 2, 2});
  double coverage = 0.0;
  CHECK(nmi(est, truth, &coverage) == 1.0);  // shared {2,3}: both trivial
  CHECK(coverage == doctest::Approx(2.0 / 6.0));
  CHECK(code_of([] { nmi(CommunityAssignment({0}, {1}), CommunityAssignment({1}, {1})); }) ==
        ErrorCode::EmptyDomain);
}

TEST_CASE("nmi is symmetric, label invariant and bounded") {
  std::mt19937_64 rng(2718);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = std::uniform_int_distribution<int>(1, 50)(rng);
    auto a = random_partition(rng, n);
    auto b = random_partition(rng, n);
    const double v = nmi(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(nmi(b, a) == doctest::Approx(v).epsilon(1e-12));

    std::vector<int> perm(a.num_communities());
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> relabelled;
    for (int l : a.labels()) relabelled.push_back(perm[l - 1]);
    CHECK(nmi(labelled(relabelled), b) == doctest::Approx(v).epsilon(1e-12));
    CHECK(nmi(a, a) == 1.0);
  }
}

TEST_CASE("overall nmi") {
  auto perfect = labelled({1, 1, 2, 2});
  auto guess = labelled({1, 2, 1, 2});
  auto r = overall_nmi({3}, {perfect, guess}, {3}, {perfect, perfect});
  CHECK(r.per_segment == std::vector<double>{1.0, 0.0});
  CHECK(r.overall == 0.5);
  CHECK(r.coverage == std::vector<double>{1.0, 1.0});

  auto all = overall_nmi({}, {perfect}, {}, {perfect});
  CHECK(all.overall == 1.0);

  CHECK(code_of([&] { overall_nmi({3}, {perfect, perfect}, {4}, {perfect, perfect}); }) ==
        ErrorCode::SegmentMismatch);
  CHECK(code_of([&] { overall_nmi({}, {perfect, perfect}, {}, {perfect}); }) ==
        ErrorCode::SegmentMismatch);
}

TEST_CASE("change-point frequency") {
  std::vector<std::vector<int>> runs(100, {6, 14});
  auto table = changepoint_frequency(runs, 30);
  CHECK(table.size() == 30);
  for (auto [t, c] : table) CHECK(c == (t == 6 || t == 14 ? 100 : 0));

  for (const auto& none : {std::vector<std::vector<int>>{}, std::vector<std::vector<int>>{{}}}) {
    auto empty = changepoint_frequency(none, 5);
    CHECK(empty.size() == 5);
    for (auto [t, c] : empty) CHECK(c == 0);
  }
  CHECK(code_of([] { changepoint_frequency({{31}}, 30); }) == ErrorCode::OutOfBounds);
}

TEST_CASE("csv output") {
  CHECK(frequency_csv(changepoint_frequency({{2}}, 3)) == "t,count\n1,0\n2,1\n3,0\n");
  NmiReport r;
  r.per_segment = {1.0, 0.5};
  r.overall = 0.75;
  CHECK(nmi_csv(r) == "segment,nmi\n1,1\n2,0.5\noverall,0.75\n");
}
