#include <gtest/gtest.h>

#include <vector>

#include "intcons/properties.hpp"
#include "intcons/scenario.hpp"
#include "intcons/suites.hpp"

namespace intcons {
namespace {

IntervalSystem mutual_pair() {
    return validate_system(2, std::vector<EdgeSpec>{{1, 0, 1.0}, {0, 1, 1.0}}, std::vector<Interval>{{0, 2}, {1, 3}});
}

IntervalSystem disjoint_cycle() {
    return IntervalSystem(make_cycle(3, std::vector<double>{1, 1, 1}), {{0, 1}, {2, 3}, {4, 5}});
}

IntervalSystem random_system(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    return IntervalSystem(random_strongly_connected(rng, n), random_intervals(rng, n));
}

Trajectory run(const IntervalSystem& sys, State x0) {
    SimConfig config;
    config.record_every = 4;
    return integrate_continuous(sys, x0, config);
}

TEST(MonotoneFlow, IdenticalStarts) {
    const auto sys = random_system(1, 5);
    const State x0{1, -2, 3, 0, 4};
    const auto v = check_monotone_flow(sys, x0, x0, 20.0, 0.01);
    EXPECT_TRUE(v.passed());
    EXPECT_LE(v.worst_violation, 0.0);
}

TEST(MonotoneFlow, OrderedStartsStayOrdered) {
    const auto sys = random_system(2, 5);
    const State z0{1, -2, 3, 0, 4};
    State y0 = z0;
    for (auto& v : y0) v -= 1.0;
    EXPECT_TRUE(check_monotone_flow(sys, y0, z0, 30.0, 0.01).passed());
}

TEST(MonotoneFlow, UnorderedStartsRejected) {
    const auto sys = random_system(3, 3);
    EXPECT_THROW(check_monotone_flow(sys, State{0, 1, 0}, State{1, 0, 1}, 1.0, 0.01), PreconditionError);
}

TEST(MonotoneFlow, InjectedCrossingFails) {
    const auto sys = random_system(4, 3);
    SimConfig config;
    config.stop_on_consensus = config.stop_on_settle = false;
    config.t_end = 5.0;
    const auto lower = integrate_continuous(sys, State{0, 0, 0}, config);
    auto upper = integrate_continuous(sys, State{1, 1, 1}, config);
    upper.states[upper.states.size() / 2][1] = lower.states[upper.states.size() / 2][1] - 0.01;
    const auto v = compare_ordered_runs(lower, upper);
    EXPECT_EQ(v.outcome, Outcome::Fail);
    EXPECT_NEAR(v.worst_violation, 0.01, 1e-12);
    EXPECT_TRUE(v.witness);
}

TEST(DiagnosticMonotonicity, ConstantTrajectory) {
    const auto sys = mutual_pair();
    const auto traj = run(sys, {1.5, 1.5});
    const auto v = check_diagnostic_monotonicity(traj, sys.summary());
    EXPECT_TRUE(v.passed());
    EXPECT_EQ(v.worst_violation, 0.0);
}

TEST(DiagnosticMonotonicity, InjectedUptickFails) {
    const auto sys = mutual_pair();
    auto traj = run(sys, {0, 3});
    ASSERT_GT(traj.diagnostics.size(), 3u);
    traj.diagnostics[2].H = traj.diagnostics[1].H + 0.1;
    const auto v = check_diagnostic_monotonicity(traj, sys.summary());
    EXPECT_EQ(v.outcome, Outcome::Fail);
    EXPECT_NEAR(v.worst_violation, 0.1, 1e-12);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->time, traj.times[2]);
}

TEST(DiagnosticMonotonicity, RefusesEmptyIntersection) {
    const auto sys = disjoint_cycle();
    EXPECT_THROW(check_diagnostic_monotonicity(run(sys, {0, 0, 0}), sys.summary()), PreconditionError);
}

TEST(DiagnosticMonotonicity, StoredNonMonotoneScenario) {
    const auto sc = load_scenario(INTCONS_SCENARIO_DIR "/nonmonotone_diameter.json");
    const auto traj = simulate(sc.system, sc.initial_states().front(), sc.config_for(sc.sim.mode));
    EXPECT_TRUE(check_diagnostic_monotonicity(traj, sc.system.summary()).passed());
}

TEST(HullInvariance, CornerAndRandomStarts) {
    const auto sys = random_system(5, 4);
    const auto& s = sys.summary();
    EXPECT_TRUE(check_hull_invariance(run(sys, State(4, s.p_under)), s).passed());
    Rng rng(6);
    for (int k = 0; k < 10; ++k) {
        EXPECT_TRUE(check_hull_invariance(run(sys, random_state(rng, 4, s.p_under, s.q_over)), s).passed());
    }
}

TEST(HullInvariance, OutsideStartRejected) {
    const auto sys = mutual_pair();
    EXPECT_THROW(check_hull_invariance(run(sys, {-1, 3}), sys.summary()), PreconditionError);
}

TEST(HullInvariance, InjectedExcursionFails) {
    const auto sys = mutual_pair();
    auto traj = run(sys, {0, 3});
    traj.states.back()[1] = 3.5;
    const auto v = check_hull_invariance(traj, sys.summary());
    EXPECT_EQ(v.outcome, Outcome::Fail);
    EXPECT_NEAR(v.worst_violation, 0.5, 1e-12);
}

TEST(HullAttraction, FarStartIsPulledIn) {
    const auto sys = random_system(7, 5);
    const auto traj = run(sys, State(5, sys.summary().q_over + 10));
    const auto v = check_hull_attraction(sys, traj);
    EXPECT_EQ(v.outcome, Outcome::Pass);
}

TEST(HullAttraction, InsideStartHasZeroDistance) {
    const auto sys = mutual_pair();
    const auto v = check_hull_attraction(sys, run(sys, {0.5, 2.5}));
    EXPECT_TRUE(v.passed());
    EXPECT_EQ(v.worst_violation, 0.0);
}

TEST(HullAttraction, ShortHorizonIsInconclusive) {
    const auto sys = mutual_pair();
    SimConfig config;
    config.t_end = 0.05;
    const auto v = check_hull_attraction(sys, integrate_continuous(sys, State{50, 50}, config));
    EXPECT_EQ(v.outcome, Outcome::Inconclusive);
    EXPECT_FALSE(v.passed());
}

TEST(HullAttraction, InjectedFinalStateFails) {
    const auto sys = mutual_pair();
    auto traj = run(sys, {50, 50});
    ASSERT_NE(traj.terminal_reason, TerminalReason::Horizon);
    traj.states.back() = {0, 4};
    EXPECT_EQ(check_hull_attraction(sys, traj).outcome, Outcome::Fail);
}

TEST(HullAttraction, NeedsStrongConnectivity) {
    const IntervalSystem chain(Network::create(2, std::vector<EdgeSpec>{{0, 1, 1.0}}), {{0, 1}, {0, 1}});
    EXPECT_THROW(check_hull_attraction(chain, run(chain, {0, 0})), PreconditionError);
}

TEST(BruteForce, MutualPairGrid) {
    const auto v = brute_force_small_instance(mutual_pair(), 21);
    EXPECT_TRUE(v.passed()) << v.worst_violation;
}

TEST(BruteForce, DisjointCycleGrid) {
    const auto v = brute_force_small_instance(disjoint_cycle(), 11);
    EXPECT_TRUE(v.passed()) << v.worst_violation;
}

TEST(BruteForce, SingletonIntersection) {
    const IntervalSystem sys = validate_system(2, std::vector<EdgeSpec>{{1, 0, 1.0}, {0, 1, 0.5}},
                                               std::vector<Interval>{{0, 2}, {2, 3}});
    EXPECT_TRUE(brute_force_small_instance(sys, 15).passed());
}

TEST(BruteForce, TruncatedIntegrationFails) {
    BruteForceOptions opts;
    opts.max_steps = 10;
    EXPECT_EQ(brute_force_small_instance(mutual_pair(), 5, opts).outcome, Outcome::Fail);
}

TEST(BruteForce, Preconditions) {
    EXPECT_THROW(brute_force_small_instance(random_system(8, 4), 5), PreconditionError);
    EXPECT_THROW(brute_force_small_instance(mutual_pair(), 1), PreconditionError);
}

}  // namespace
}  // namespace intcons
