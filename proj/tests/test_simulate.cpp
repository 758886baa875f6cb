#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "intcons/simulate.hpp"
#include "intcons/suites.hpp"

namespace intcons {
namespace {

IntervalSystem mutual_pair() {
    return validate_system(2, std::vector<EdgeSpec>{{1, 0, 1.0}, {0, 1, 1.0}}, std::vector<Interval>{{0, 2}, {1, 3}});
}

IntervalSystem disjoint_cycle() {
    return IntervalSystem(make_cycle(3, std::vector<double>{1, 1, 1}), {{0, 1}, {2, 3}, {4, 5}});
}

// Hand-written forward Euler at dt = 1e-5, independent of the library
// integrator, for the mutual pair from (0, 3).
double mutual_pair_reference_limit() {
    double a = 0.0, b = 3.0;
    const double dt = 1e-5;
    for (int k = 0; k < 3'000'000 && std::abs(a - b) > 1e-12; ++k) {
        const double fa = std::clamp(b, 1.0, 3.0) - a;
        const double fb = std::clamp(a, 0.0, 2.0) - b;
        a += dt * fa;
        b += dt * fb;
    }
    return 0.5 * (a + b);
}

TEST(IntegrateContinuous, MutualPairConsensusValue) {
    const double oracle = mutual_pair_reference_limit();
    // Both states stay inside their own intervals, so the sum is conserved.
    ASSERT_NEAR(oracle, 1.5, 1e-9);

    const auto sys = mutual_pair();
    SimConfig config;
    config.step = 1e-3;
    const auto traj = integrate_continuous(sys, std::vector<double>{0, 3}, config);
    EXPECT_EQ(traj.terminal_reason, TerminalReason::Consensus);
    const auto& x = traj.final_state();
    EXPECT_LT(std::abs(x[0] - x[1]), 1e-6);
    const auto c = detect_consensus(traj, sys.summary(), 1e-6);
    ASSERT_TRUE(c.value);
    EXPECT_NEAR(*c.value, oracle, 1e-6);
    EXPECT_FALSE(c.anomaly);
}

TEST(IntegrateContinuous, ConstantStartSettlesImmediately) {
    const auto traj = integrate_continuous(mutual_pair(), std::vector<double>{1.25, 1.25}, SimConfig{});
    EXPECT_EQ(traj.terminal_reason, TerminalReason::Settled);
    EXPECT_EQ(traj.steps, 0u);
    ASSERT_EQ(traj.states.size(), 1u);
    EXPECT_EQ(traj.final_state(), (State{1.25, 1.25}));
}

TEST(IntegrateContinuous, DisjointCycleSettlesAtClosedForm) {
    const auto sys = disjoint_cycle();
    for (const State x0 : {State{0, 0, 0}, State{-5, 10, 2}, State{9, -4, 7}}) {
        const auto traj = integrate_continuous(sys, x0, SimConfig{});
        EXPECT_EQ(traj.terminal_reason, TerminalReason::Settled);
        const State expected{3, 4, 1};
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(traj.final_state()[i], expected[i], 1e-6);
    }
}

TEST(IntegrateContinuous, RejectsStepAboveGuard) {
    SimConfig config;
    config.step = 0.2;
    EXPECT_THROW(integrate_continuous(mutual_pair(), std::vector<double>{0, 3}, config), SimConfigError);
    config.step = 0.1;
    EXPECT_NO_THROW(integrate_continuous(mutual_pair(), std::vector<double>{0, 3}, config));
}

TEST(IntegrateContinuous, RejectsBadInput) {
    EXPECT_THROW(integrate_continuous(mutual_pair(), std::vector<double>{0}, SimConfig{}), DimensionError);
    EXPECT_THROW(integrate_continuous(mutual_pair(), std::vector<double>{0, NAN}, SimConfig{}), SimConfigError);
    SimConfig config;
    config.record_every = 0;
    EXPECT_THROW(integrate_continuous(mutual_pair(), std::vector<double>{0, 3}, config), SimConfigError);
}

TEST(IntegrateContinuous, HorizonAndRecording) {
    SimConfig config;
    config.step = 0.01;
    config.t_end = 1.0;
    config.record_every = 7;
    config.stop_on_consensus = false;
    config.stop_on_settle = false;
    const auto traj = integrate_continuous(mutual_pair(), std::vector<double>{0, 3}, config);
    EXPECT_EQ(traj.terminal_reason, TerminalReason::Horizon);
    EXPECT_EQ(traj.steps, 100u);
    EXPECT_NEAR(traj.times.back(), 1.0, 1e-12);
    EXPECT_EQ(traj.times.size(), traj.diagnostics.size());
    EXPECT_DOUBLE_EQ(traj.times[1], 0.07);
}

TEST(IntegrateContinuous, Deterministic) {
    Rng rng(3);
    const IntervalSystem sys(random_strongly_connected(rng, 8), random_intervals(rng, 8));
    const State x0 = random_state(rng, 8, -10, 10);
    const auto a = integrate_continuous(sys, x0, SimConfig{});
    const auto b = integrate_continuous(sys, x0, SimConfig{});
    EXPECT_EQ(a.states, b.states);
    EXPECT_EQ(a.times, b.times);
}

TEST(RunDiscrete, MutualPair) {
    const auto sys = mutual_pair();
    SimConfig config;
    config.mode = SimMode::Discrete;
    config.step = 0.25;
    const auto traj = run_discrete(sys, std::vector<double>{0, 3}, config);
    ASSERT_GE(traj.states.size(), 2u);
    EXPECT_EQ(traj.states[1], (State{0.75, 2.25}));
    EXPECT_EQ(traj.terminal_reason, TerminalReason::Consensus);
    const auto c = detect_consensus(traj, sys.summary(), 1e-6);
    ASSERT_TRUE(c.value);
    EXPECT_GE(*c.value, 1.0 - 1e-6);
    EXPECT_LE(*c.value, 2.0 + 1e-6);
    EXPECT_TRUE(traj.warnings.empty());
}

TEST(RunDiscrete, StepAtBoundWarns) {
    SimConfig config;
    config.mode = SimMode::Discrete;
    config.step = 1.0;
    config.max_steps = 50;
    const auto traj = run_discrete(mutual_pair(), std::vector<double>{0, 3}, config);
    EXPECT_EQ(traj.warnings.size(), 1u);
}

TEST(RunDiscrete, ConstantAtCycleEquilibrium) {
    SimConfig config;
    config.mode = SimMode::Discrete;
    config.step = 0.5;
    config.max_steps = 20;
    config.stop_on_settle = false;
    const auto traj = simulate(disjoint_cycle(), std::vector<double>{3, 4, 1}, config);
    for (const auto& x : traj.states) EXPECT_EQ(x, (State{3, 4, 1}));
}

Trajectory final_only(State x) {
    Trajectory t;
    t.times.push_back(0.0);
    t.states.push_back(std::move(x));
    return t;
}

TEST(DetectConsensus, Examples) {
    const auto s = interval_summary(std::vector<Interval>{{0, 2}, {1, 3}});
    auto c = detect_consensus(final_only({1.5, 1.5}), s, 1e-6);
    ASSERT_TRUE(c.value);
    EXPECT_EQ(*c.value, 1.5);

    c = detect_consensus(final_only({0.9, 2.4}), s, 1e-6);
    EXPECT_FALSE(c.value);
    EXPECT_FALSE(c.anomaly);

    c = detect_consensus(final_only({0.5, 0.5}), s, 1e-6);
    EXPECT_FALSE(c.value);
    EXPECT_TRUE(c.anomaly);

    EXPECT_FALSE(detect_consensus(Trajectory{}, s, 1e-6).value);
}

TEST(Defaults, DerivedFromWeights) {
    const auto net = make_cycle(3, std::vector<double>{0.5, 2, 4});
    EXPECT_EQ(max_continuous_dt(net), 0.1 / 4);
    EXPECT_EQ(default_eps(net), 0.9 / 4);
    EXPECT_EQ(default_horizon(net), 100.0);
}

}  // namespace
}  // namespace intcons
