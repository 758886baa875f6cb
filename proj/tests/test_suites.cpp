#include <gtest/gtest.h>

#include <set>
#include <string>

#include "intcons/export.hpp"
#include "intcons/suites.hpp"

namespace intcons {
namespace {

TEST(Rng, UnitInterval) {
    Rng rng(1);
    for (int k = 0; k < 10000; ++k) {
        const double u = rng.unit();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const auto i = rng.index(3, 10);
        ASSERT_GE(i, 3u);
        ASSERT_LE(i, 10u);
    }
}

TEST(InstanceSeed, DistinctPerIndex) {
    std::set<std::uint64_t> seen;
    for (std::size_t k = 0; k < 1000; ++k) seen.insert(instance_seed(42, k));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(instance_seed(42, 0), instance_seed(43, 0));
}

TEST(Generators, Invariants) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const std::size_t n = rng.index(2, 10);
        const Network net = random_strongly_connected(rng, n);
        EXPECT_TRUE(net.strongly_connected());
        EXPECT_GT(net.min_weight(), 0.0);
        EXPECT_LE(max_in_weight_sum(net), 2.0 * static_cast<double>(n - 1));
        EXPECT_TRUE(interval_summary(random_intersecting_intervals(rng, n)).has_intersection);
        const auto disjoint = random_sorted_disjoint_intervals(rng, n);
        EXPECT_TRUE(interval_summary(disjoint).pairwise_disjoint);
        for (std::size_t i = 0; i + 1 < n; ++i) EXPECT_LT(disjoint[i].upper, disjoint[i + 1].lower);
    }
}

TEST(ConsensusInstance, Shape) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = consensus_instance(seed);
        const auto& s = inst.system.summary();
        EXPECT_GE(inst.system.size(), 3u);
        EXPECT_LE(inst.system.size(), 10u);
        EXPECT_TRUE(s.has_intersection);
        for (double v : inst.x0) {
            EXPECT_GE(v, s.p_under - 5);
            EXPECT_LE(v, s.q_over + 5);
        }
    }
}

TEST(RunSuite, UnknownName) { EXPECT_THROW(run_suite("nosuch", 1, 1), UnknownSuite); }

TEST(RunSuite, EveryNamedSuiteRunsAndReplays) {
    for (auto name : suite_names()) {
        const auto a = run_suite(name, 5, 2);
        const auto b = run_suite(name, 5, 2);
        ASSERT_EQ(a.size(), 2u) << name;
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_EQ(a[k].index, k);
            EXPECT_TRUE(a[k].verdict.passed()) << verdict_line(a[k]);
            EXPECT_EQ(verdict_line(a[k]), verdict_line(b[k]));
            ASSERT_TRUE(a[k].verdict.seed);
            EXPECT_EQ(*a[k].verdict.seed, instance_seed(5, k));
        }
    }
}

}  // namespace
}  // namespace intcons
