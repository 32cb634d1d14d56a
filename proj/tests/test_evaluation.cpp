#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "trajclust/error.hpp"
#include "trajclust/evaluation.hpp"

namespace trajclust {
namespace {

std::vector<std::int64_t> split(std::size_t n, std::size_t parts, bool interleave) {
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<std::int64_t>(interleave ? i % parts : i * parts / n);
  return out;
}

TEST(Nmi, IdenticalPartitionsScoreOne) {
  const std::vector<std::int64_t> a{0, 0, 1, 1, 2, 2, 2};
  const std::vector<std::int64_t> relabeled{5, 5, 9, 9, 1, 1, 1};
  EXPECT_DOUBLE_EQ(nmi(a, a), 1.0);
  EXPECT_DOUBLE_EQ(nmi(a, relabeled), 1.0);
}

TEST(Nmi, SingleClusterPartitionsScoreZero) {
  const std::vector<std::int64_t> one(10, 3);
  const std::vector<std::int64_t> two = split(10, 2, false);
  EXPECT_EQ(nmi(one, one), 0.0);
  EXPECT_EQ(nmi(one, two), 0.0);
}

// Blocks [[50,0],[0,50]] against a balanced split within each block gives a
// contingency of [[25,25],[25,25]]: independent, so MI = 0.
TEST(Nmi, MatchesContingencyOracle) {
  const std::vector<std::int64_t> a = split(100, 2, false);
  const std::vector<std::int64_t> b = split(100, 2, true);
  EXPECT_NEAR(nmi(a, b), 0.0, 1e-12);

  // Contingency [[30,10],[5,55]]: MI and entropies evaluated directly.
  std::vector<std::int64_t> x, y;
  auto add = [&](int r, int c, int n) {
    for (int i = 0; i < n; ++i) {
      x.push_back(r);
      y.push_back(c);
    }
  };
  add(0, 0, 30);
  add(0, 1, 10);
  add(1, 0, 5);
  add(1, 1, 55);
  const double n = 100.0;
  const double joint[2][2] = {{30, 10}, {5, 55}};
  const double row[2] = {40, 60}, col[2] = {35, 65};
  double mi = 0.0, hx = 0.0, hy = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) mi += joint[r][c] / n * std::log(joint[r][c] * n / (row[r] * col[c]));
  for (int r = 0; r < 2; ++r) hx -= row[r] / n * std::log(row[r] / n);
  for (int c = 0; c < 2; ++c) hy -= col[c] / n * std::log(col[c] / n);
  EXPECT_NEAR(nmi(x, y), mi / std::sqrt(hx * hy), 1e-12);
  EXPECT_NEAR(nmi(y, x), mi / std::sqrt(hx * hy), 1e-12);
}

TEST(Nmi, SymmetricBoundedAndPermutationInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> l(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> a(200), b(200);
    for (auto& v : a) v = l(rng);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = i % 3 == 0 ? l(rng) : a[i];
    const double s = nmi(a, b);
    EXPECT_NEAR(s, nmi(b, a), 1e-12);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    std::vector<std::int64_t> permuted(a);
    for (auto& v : permuted) v = (v + 3) % 5;
    EXPECT_NEAR(nmi(permuted, b), s, 1e-12);
  }
}

TEST(Nmi, IndependentRandomPartitionsScoreNearZero) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> l(0, 9);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::int64_t> a(10000), b(10000);
    for (auto& v : a) v = l(rng);
    for (auto& v : b) v = l(rng);
    EXPECT_LE(nmi(a, b), 0.01);
  }
}

TEST(Nmi, RejectsLengthMismatch) {
  const std::vector<std::int64_t> a{0, 1}, b{0, 1, 1};
  EXPECT_THROW(nmi(a, b), Error);
}

TEST(LinkAudit, AllAgreeTruthEqualEnsembleIsFullyCorrect) {
  const std::vector<std::int64_t> base{0, 0, 1, 1, 1, 2};
  const Ensemble e = testing::replicated_ensemble(base, 4);
  const MicroclusterSet mcs = build_microclusters(e);
  const SparseSimGraph msg = build_msg(compute_mca(e, mcs), mcs);
  const auto buckets = link_audit(msg, mcs, canonicalize(std::span<const std::int64_t>(base)));
  ASSERT_EQ(buckets.size(), 4u);
  for (std::size_t b = 0; b + 1 < 4; ++b) EXPECT_EQ(buckets[b].links, 0u);
  EXPECT_EQ(buckets[3].links, 1u + 3u);
  EXPECT_EQ(buckets[3].correct_rate, 1.0);
  EXPECT_EQ(buckets[3].link_fraction, 1.0);
}

// Object-pair oracle: for every pair with nonzero co-association, count it in
// its weight bucket and check whether it shares a class.
TEST(LinkAudit, MatchesObjectPairOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Ensemble e = testing::random_ensemble(rng, 70, 5, 3);
    std::vector<Label> truth(70);
    std::uniform_int_distribution<Label> l(0, 2);
    for (auto& t : truth) t = l(rng);
    const MicroclusterSet mcs = build_microclusters(e);
    const CoAssocMatrix ca = compute_ca(e);
    const auto buckets = link_audit(build_msg(compute_mca(e, mcs), mcs), mcs, truth);
    std::vector<std::uint64_t> links(5, 0), correct(5, 0);
    for (std::size_t i = 0; i < 70; ++i)
      for (std::size_t j = i + 1; j < 70; ++j)
        if (ca.count(i, j) > 0) {
          ++links[ca.count(i, j) - 1];
          correct[ca.count(i, j) - 1] += truth[i] == truth[j];
        }
    double total = 0.0;
    for (std::size_t b = 0; b < 5; ++b) {
      EXPECT_EQ(buckets[b].links, links[b]);
      EXPECT_EQ(buckets[b].correct, correct[b]);
      EXPECT_DOUBLE_EQ(buckets[b].weight, static_cast<double>(b + 1) / 5.0);
      total += buckets[b].link_fraction;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

// Two classes; every base clustering is the truth with each label flipped
// with probability 0.25. Co-assignment is likelier within a class, so the
// correct rate should rise with the weight.
TEST(LinkAudit, CorrectRateRisesWithWeightUnderLabelNoise) {
  int monotone = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(0.25);
    const std::size_t n = 200, m = 10;
    std::vector<std::int64_t> labels(n * m);
    std::vector<Label> truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = i < n / 2 ? 0 : 1;
      for (std::size_t c = 0; c < m; ++c) labels[i * m + c] = flip(rng) ? 1 - truth[i] : truth[i];
    }
    const Ensemble e = Ensemble::from_labels(n, m, labels);
    const MicroclusterSet mcs = build_microclusters(e);
    double last = -1.0;
    bool ok = true;
    for (const AuditBucket& b : link_audit(build_msg(compute_mca(e, mcs), mcs), mcs, truth)) {
      if (b.links == 0) continue;
      ok = ok && b.correct_rate >= last;
      last = b.correct_rate;
    }
    monotone += ok;
  }
  EXPECT_GE(monotone, 8);
}

TEST(LinkAudit, RejectsMissingTruth) {
  const Ensemble e = testing::chain_fixture();
  const MicroclusterSet mcs = build_microclusters(e);
  const SparseSimGraph msg = build_msg(compute_mca(e, mcs), mcs);
  EXPECT_THROW(link_audit(msg, mcs, {}), Error);
  EXPECT_THROW(link_audit(msg, mcs, std::vector<Label>{0, 1}), Error);
}

TEST(LinkAudit, CsvFormat) {
  std::vector<AuditBucket> b{{1, 0.5, 3, 1, 0.75, 1.0 / 3.0}, {2, 1.0, 1, 1, 0.25, 1.0}};
  EXPECT_EQ(format_audit_csv(b),
            "weight,links,link_fraction,correct,correct_rate\n"
            "0.500000,3,0.750000,1,0.333333\n"
            "1.000000,1,0.250000,1,1.000000\n");
}

}  // namespace
}  // namespace trajclust
