#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "intcons/equilibria.hpp"
#include "intcons/suites.hpp"

namespace intcons {
namespace {

const std::vector<Interval> kThree{{0, 1}, {2, 3}, {4, 5}};

IntervalSystem disjoint_cycle() { return IntervalSystem(make_cycle(3, std::vector<double>{1, 1, 1}), kThree); }

// Fixed-point check done by hand: e_i = clamp(e_{i+1}) around the cycle.
void expect_cycle_fixed_point(const State& e, const std::vector<Interval>& iv) {
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& next = iv[(i + 1) % e.size()];
        EXPECT_EQ(e[i], std::clamp(e[(i + 1) % e.size()], next.lower, next.upper)) << "node " << i + 1;
    }
}

TEST(CycleEquilibrium, ThreeNodes) {
    const State e = cycle_equilibrium(kThree);
    EXPECT_EQ(e, (State{3, 4, 1}));
    expect_cycle_fixed_point(e, kThree);
}

TEST(CycleEquilibrium, TwoNodes) {
    const std::vector<Interval> iv{{0, 1}, {2, 3}};
    const State e = cycle_equilibrium(iv);
    EXPECT_EQ(e, (State{2, 1}));
    expect_cycle_fixed_point(e, iv);
}

TEST(CycleEquilibrium, FourNodes) {
    const std::vector<Interval> iv{{0, 1}, {2, 6}, {7, 8}, {9, 12}};
    const State e = cycle_equilibrium(iv);
    EXPECT_EQ(e, (State{6, 8, 9, 1}));
    expect_cycle_fixed_point(e, iv);
}

TEST(CycleEquilibrium, Preconditions) {
    EXPECT_THROW(cycle_equilibrium(std::vector<Interval>{{0, 1}}), CyclePreconditionError);
    EXPECT_THROW(cycle_equilibrium(std::vector<Interval>{{2, 3}, {0, 1}}), CyclePreconditionError);
    EXPECT_THROW(cycle_equilibrium(std::vector<Interval>{{0, 2}, {1, 3}}), CyclePreconditionError);
    EXPECT_THROW(cycle_equilibrium(std::vector<Interval>{{0, 1}, {1, 2}}), CyclePreconditionError);
}

TEST(CycleEquilibrium, RandomFamiliesSatisfyIdentities) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed);
        const auto iv = random_sorted_disjoint_intervals(rng, rng.index(2, 12));
        expect_cycle_fixed_point(cycle_equilibrium(iv), iv);
    }
}

TEST(Classify, Examples) {
    const auto sys = disjoint_cycle();
    auto c = classify_equilibrium(sys, std::vector<double>{3, 4, 1}, kDefaultBoundaryTol);
    EXPECT_EQ(c.kind, EquilibriumClass::EquiConstrained);
    EXPECT_EQ(c.per_node, (std::vector<NodeStatus>{NodeStatus::Above, NodeStatus::Above, NodeStatus::Below}));

    const IntervalSystem pair = validate_system(2, std::vector<EdgeSpec>{{1, 0, 1.0}, {0, 1, 1.0}},
                                                std::vector<Interval>{{0, 2}, {1, 3}});
    EXPECT_EQ(classify_equilibrium(pair, std::vector<double>{1.5, 1.5}, kDefaultBoundaryTol).kind,
              EquilibriumClass::EquiUnconstrained);
    c = classify_equilibrium(pair, std::vector<double>{0, 1.5}, kDefaultBoundaryTol);
    EXPECT_EQ(c.kind, EquilibriumClass::Boundary);
    EXPECT_EQ(c.per_node[0], NodeStatus::AtLower);
    EXPECT_EQ(classify_equilibrium(pair, std::vector<double>{2.5, 1.5}, kDefaultBoundaryTol).kind,
              EquilibriumClass::Mixed);
}

TEST(Linearize, EquiConstrainedIsMinusDegree) {
    const auto sys = IntervalSystem(make_cycle(3, std::vector<double>{1, 2, 0.5}), kThree);
    const auto J = linearize_at(sys, std::vector<double>{3, 4, 1}, kDefaultBoundaryTol);
    ASSERT_TRUE(J);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
    expected.diagonal() << -1, -2, -0.5;
    EXPECT_EQ(*J, expected);
    EXPECT_EQ(is_hurwitz(*J), Stability::AsymptoticallyStable);
}

TEST(Linearize, EquiUnconstrainedIsMinusLaplacian) {
    const auto net = Network::create(3, std::vector<EdgeSpec>{{1, 0, 1.0}, {2, 0, 2.0}, {2, 1, 0.5}, {0, 2, 3.0}});
    const IntervalSystem sys(net, {{0, 4}, {1, 5}, {-1, 3}});
    const auto J = linearize_at(sys, std::vector<double>{2, 2, 2}, kDefaultBoundaryTol);
    ASSERT_TRUE(J);
    Eigen::MatrixXd L(3, 3);
    L << 3, -1, -2,
         0, 0.5, -0.5,
         -3, 0, 3;
    EXPECT_EQ(*J, -L);
    EXPECT_EQ(is_hurwitz(*J), Stability::MarginallyStable);
}

TEST(Linearize, UndefinedAtEndpoint) {
    EXPECT_FALSE(linearize_at(disjoint_cycle(), std::vector<double>{1, 4, 1}, kDefaultBoundaryTol));
}

TEST(Hurwitz, Examples) {
    EXPECT_EQ(is_hurwitz(-Eigen::MatrixXd::Identity(3, 3)), Stability::AsymptoticallyStable);
    Eigen::MatrixXd L(3, 3);
    L << 1, -1, 0,
         0, 1, -1,
         -1, 0, 1;
    EXPECT_EQ(is_hurwitz(-L), Stability::MarginallyStable);
    Eigen::MatrixXd rot(2, 2);
    rot << 0, 1, -1, 0;
    EXPECT_EQ(is_hurwitz(rot), Stability::MarginallyStable);
    EXPECT_EQ(is_hurwitz(Eigen::MatrixXd::Identity(2, 2)), Stability::Unstable);
    EXPECT_THROW(is_hurwitz(Eigen::MatrixXd(2, 3)), EigenSolverError);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(0, 1) = NAN;
    EXPECT_THROW(is_hurwitz(bad), EigenSolverError);
}

TEST(FindEquilibrium, DisjointCycleFromOrigin) {
    const auto r = find_equilibrium(disjoint_cycle(), std::vector<double>{0, 0, 0});
    EXPECT_LT(r.residual, 1e-10);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.point[i], (State{3, 4, 1})[i], 1e-9);
    EXPECT_EQ(r.classification, EquilibriumClass::EquiConstrained);
    EXPECT_EQ(r.stable, Stability::AsymptoticallyStable);
}

TEST(FindEquilibrium, DisjointCycleCommonLimit) {
    const auto sys = disjoint_cycle();
    std::vector<State> starts;
    Rng rng(17);
    for (int k = 0; k < 100; ++k) starts.push_back(random_state(rng, 3, -5, 10));
    const auto found = find_equilibria(sys, starts);
    EXPECT_EQ(found.failed_starts, 0u);
    ASSERT_EQ(found.equilibria.size(), 1u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(found.equilibria[0].point[i], (State{3, 4, 1})[i], 1e-6);
}

TEST(FindEquilibrium, ConsensusWhenIntervalsIntersect) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = consensus_instance(seed);
        const auto r = find_equilibrium(inst.system, inst.x0);
        const auto [lo, hi] = std::minmax_element(r.point.begin(), r.point.end());
        EXPECT_LT(*hi - *lo, 1e-8) << "seed " << seed;
        EXPECT_GE(*lo, inst.system.summary().p_star - 1e-8);
        EXPECT_LE(*hi, inst.system.summary().q_star + 1e-8);
    }
}

TEST(FindEquilibrium, RejectsNonPositiveTolerance) {
    SearchOptions opts;
    opts.tol = 0;
    EXPECT_THROW(find_equilibrium(disjoint_cycle(), std::vector<double>{0, 0, 0}, opts), std::invalid_argument);
}

}  // namespace
}  // namespace intcons
