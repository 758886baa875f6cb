#include "intcons/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <optional>

#include "intcons/equilibria.hpp"
#include "intcons/simulate.hpp"

namespace intcons {

std::uint64_t instance_seed(std::uint64_t suite_seed, std::size_t index) {
    // splitmix64 finalizer over (seed, index)
    std::uint64_t z = suite_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Network random_strongly_connected(Rng& rng, std::size_t n, double extra_edge_prob, double max_weight) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(0, i - 1)]);
    }
    const auto weight = [&] { return max_weight * (1.0 - rng.unit()); };  // (0, max_weight]

    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    std::vector<EdgeSpec> edges;
    if (n > 1) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t from = order[k], to = order[(k + 1) % n];
            used[from][to] = true;
            edges.push_back({from, to, weight()});
        }
    }
    for (std::size_t from = 0; from < n; ++from) {
        for (std::size_t to = 0; to < n; ++to) {
            if (from != to && !used[from][to] && rng.chance(extra_edge_prob)) {
                edges.push_back({from, to, weight()});
            }
        }
    }
    return Network::create(n, edges);
}

std::vector<Interval> random_intersecting_intervals(Rng& rng, std::size_t n) {
    const double c = rng.uniform(-5.0, 5.0);
    std::vector<Interval> out(n);
    for (auto& iv : out) {
        iv.lower = c - rng.uniform(0.0, 4.0);
        iv.upper = c + rng.uniform(0.0, 4.0);
    }
    return out;
}

std::vector<Interval> random_intervals(Rng& rng, std::size_t n) {
    std::vector<Interval> out(n);
    for (auto& iv : out) {
        const double centre = rng.uniform(-6.0, 6.0);
        const double half = rng.uniform(0.2, 2.5);
        iv = {centre - half, centre + half};
    }
    return out;
}

std::vector<Interval> random_sorted_disjoint_intervals(Rng& rng, std::size_t n) {
    std::vector<Interval> out(n);
    double cursor = rng.uniform(-5.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double lower = cursor + (k == 0 ? 0.0 : rng.uniform(0.2, 2.0));
        const double upper = lower + rng.uniform(0.2, 3.0);
        out[k] = {lower, upper};
        cursor = upper;
    }
    return out;
}

State random_state(Rng& rng, std::size_t n, double lo, double hi) {
    State x(n);
    for (auto& v : x) v = rng.uniform(lo, hi);
    return x;
}

Instance consensus_instance(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = rng.index(3, 10);
    Network net = random_strongly_connected(rng, n);
    auto intervals = random_intersecting_intervals(rng, n);
    IntervalSystem system(std::move(net), std::move(intervals));
    const auto& s = system.summary();
    State x0 = random_state(rng, n, s.p_under - 5.0, s.q_over + 5.0);
    return {std::move(system), std::move(x0)};
}

namespace {

constexpr std::array<std::string_view, 9> kSuites = {
    "monotone", "diagnostics", "hull", "attraction", "consensus", "discrete_consensus", "cycle_oracle", "brute_force", "disjoint",
};

// Long horizons: the slowest node relaxes at a rate set by its smallest
// in-weight, and runs stop early once they reach consensus or settle.
SimConfig long_run(const Network& net, SimMode mode) {
    SimConfig config;
    config.mode = mode;
    config.consensus_tol = 1e-7;
    // A node whose in-weights are tiny can have a small derivative while
    // still far from its limit, so the settle threshold scales with them.
    config.settle_tol = 1e-9 * std::min(1.0, net.min_weight());
    const double horizon = 1000.0 * default_horizon(net) / 50.0;
    if (mode == SimMode::Continuous) {
        config.t_end = horizon;
    } else {
        config.max_steps = static_cast<std::size_t>(std::ceil(horizon / default_eps(net)));
    }
    return config;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

void fail(PropertyVerdict& v, const std::string& why) {
    v.outcome = Outcome::Fail;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += why;
}

PropertyVerdict consensus_membership(const IntervalSystem& system, std::span<const double> x0, const Trajectory& traj) {
    const auto& s = system.summary();
    const State& x = traj.final_state();
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    double outside = 0.0;
    for (double v : x) outside = std::max({outside, s.p_star - v, v - s.q_star});

    PropertyVerdict v;
    v.name = "consensus_membership";
    v.tolerance = 1e-6;
    v.worst_violation = std::max(*mx - *mn, outside);
    const auto c = detect_consensus(traj, s, v.tolerance);
    v.outcome = (c.value && v.worst_violation <= v.tolerance) ? Outcome::Pass : Outcome::Fail;
    v.detail = std::string("terminal=") + to_string(traj.terminal_reason);
    if (c.anomaly) v.detail += "; consensus outside [p*, q*]";
    if (!v.passed()) v.witness = Witness{system, State(x0.begin(), x0.end()), traj.times.back()};
    return v;
}

PropertyVerdict suite_consensus(std::uint64_t seed) {
    auto inst = consensus_instance(seed);
    auto config = long_run(inst.system.network(), SimMode::Continuous);
    config.record_every = 16;
    const auto traj = integrate_continuous(inst.system, inst.x0, config);
    return consensus_membership(inst.system, inst.x0, traj);
}

PropertyVerdict suite_discrete_consensus(std::uint64_t seed) {
    auto inst = consensus_instance(seed);
    auto config = long_run(inst.system.network(), SimMode::Discrete);
    config.step = 0.9 / max_in_weight_sum(inst.system.network());
    config.record_every = 16;
    const auto traj = run_discrete(inst.system, inst.x0, config);
    auto v = consensus_membership(inst.system, inst.x0, traj);
    for (const auto& w : traj.warnings) fail(v, w);
    return v;
}

PropertyVerdict suite_diagnostics(std::uint64_t seed) {
    auto inst = consensus_instance(seed);
    const auto traj = integrate_continuous(inst.system, inst.x0, long_run(inst.system.network(), SimMode::Continuous));
    auto v = check_diagnostic_monotonicity(traj, inst.system.summary());
    if (v.witness) v.witness->system = inst.system;
    return v;
}

PropertyVerdict suite_monotone(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = rng.index(2, 8);
    IntervalSystem system(random_strongly_connected(rng, n), random_intervals(rng, n));
    const auto& s = system.summary();
    State y0 = random_state(rng, n, s.p_under - 5.0, s.q_over + 5.0);
    State z0 = y0;
    for (auto& v : z0) {
        if (!rng.chance(0.2)) v += rng.uniform(0.0, 3.0);
    }
    const double horizon = std::min(200.0, 10.0 / system.network().min_weight());
    return check_monotone_flow(system, y0, z0, horizon, default_dt(system.network()));
}

PropertyVerdict suite_hull(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = rng.index(3, 10);
    IntervalSystem system(random_strongly_connected(rng, n), random_intervals(rng, n));
    const auto& s = system.summary();
    State x0 = rng.chance(0.1) ? State(n, s.p_under) : random_state(rng, n, s.p_under, s.q_over);
    SimConfig config;
    config.t_end = default_horizon(system.network());
    const auto traj = integrate_continuous(system, x0, config);
    auto v = check_hull_invariance(traj, s);
    if (v.witness) v.witness->system = system;
    return v;
}

PropertyVerdict suite_attraction(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = rng.index(3, 10);
    IntervalSystem system(random_strongly_connected(rng, n), random_intervals(rng, n));
    const auto& s = system.summary();
    // Start strictly outside the hull on at least one side.
    State x0 = rng.chance(0.5) ? State(n, s.q_over + 10.0) : random_state(rng, n, s.p_under - 10.0, s.q_over + 10.0);
    x0[0] = s.p_under - 10.0;
    auto config = long_run(system.network(), SimMode::Continuous);
    config.record_every = 16;
    const auto traj = integrate_continuous(system, x0, config);
    auto v = check_hull_attraction(system, traj);
    if (!s.has_intersection) v.detail += v.detail.empty() ? "empty intersection" : "; empty intersection";
    return v;
}

// Checks shared by the disjoint-interval suites on one found equilibrium.
void check_disjoint_equilibrium(PropertyVerdict& v, const IntervalSystem& system, const EquilibriumReport& r) {
    const auto& s = system.summary();
    if (!(r.residual < 1e-9)) fail(v, "residual " + std::to_string(r.residual));
    for (double e : r.point) {
        if (e < s.p_under - 1e-9 || e > s.q_over + 1e-9) fail(v, "equilibrium outside the interval hull");
        // Sorted disjoint intervals: q_1 = q*, p_n = p*.
        if (e < s.q_star - 1e-6 || e > s.p_star + 1e-6) fail(v, "equilibrium outside [q*, p*]");
    }
    if (r.classification == EquilibriumClass::EquiUnconstrained) fail(v, "equi_unconstrained equilibrium found");
    if (r.classification != EquilibriumClass::Boundary && r.stable != Stability::AsymptoticallyStable) {
        fail(v, std::string("non-boundary equilibrium is ") + to_string(r.stable));
    }
    if (r.classification == EquilibriumClass::EquiConstrained) {
        const auto& net = system.network();
        for (Eigen::Index i = 0; i < r.jacobian->rows(); ++i) {
            for (Eigen::Index j = 0; j < r.jacobian->cols(); ++j) {
                const double expected = i == j ? -net.in_weight_sum(static_cast<std::size_t>(i)) : 0.0;
                if ((*r.jacobian)(i, j) != expected) fail(v, "equi_constrained Jacobian differs from -D");
            }
        }
    }
}

PropertyVerdict suite_cycle_oracle(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = rng.index(2, 8);
    auto intervals = random_sorted_disjoint_intervals(rng, n);
    std::vector<double> weights(n);
    for (auto& w : weights) w = 2.0 * (1.0 - rng.unit());
    IntervalSystem system(make_cycle(n, weights), intervals);
    const auto& s = system.summary();

    const State closed = cycle_equilibrium(intervals);
    double identity_gap = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t next = (m + 1) % n;
        identity_gap = std::max(identity_gap, std::abs(closed[m] - saturate(closed[next], intervals[next])));
    }

    PropertyVerdict v;
    v.name = "cycle_closed_form";
    v.tolerance = 1e-6;
    v.outcome = Outcome::Pass;
    State worst_start;
    for (int k = 0; k < 10; ++k) {
        State x0 = random_state(rng, n, s.p_under - 5.0, s.q_over + 5.0);
        const auto r = find_equilibrium(system, x0);
        const double gap = max_abs_diff(r.point, closed);
        if (gap >= v.worst_violation) {
            v.worst_violation = gap;
            worst_start = x0;
        }
        check_disjoint_equilibrium(v, system, r);
    }
    if (v.worst_violation > v.tolerance) fail(v, "simulation disagrees with closed form");
    if (identity_gap > 1e-12) fail(v, "fixed-point identity gap " + std::to_string(identity_gap));
    if (!v.passed()) v.witness = Witness{system, worst_start, 0.0};
    return v;
}

PropertyVerdict suite_disjoint(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = rng.index(3, 8);
    Network net = random_strongly_connected(rng, n);
    auto sorted = random_sorted_disjoint_intervals(rng, n);
    // Scatter the sorted intervals over the nodes.
    std::vector<Interval> intervals(n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(0, i - 1)]);
    for (std::size_t i = 0; i < n; ++i) intervals[perm[i]] = sorted[i];
    IntervalSystem system(std::move(net), std::move(intervals));
    const auto& s = system.summary();

    std::vector<State> starts;
    for (int k = 0; k < 50; ++k) starts.push_back(random_state(rng, n, s.p_under - 5.0, s.q_over + 5.0));
    const auto found = find_equilibria(system, starts);

    PropertyVerdict v;
    v.name = "disjoint_equilibria";
    v.tolerance = 0.0;
    v.outcome = Outcome::Pass;
    v.worst_violation = static_cast<double>(found.failed_starts);
    if (found.failed_starts > 0) fail(v, std::to_string(found.failed_starts) + " starts did not settle");
    std::size_t constrained = 0;
    for (const auto& r : found.equilibria) {
        check_disjoint_equilibrium(v, system, r);
        constrained += r.classification == EquilibriumClass::EquiConstrained ? 1 : 0;
    }
    v.detail += (v.detail.empty() ? "" : "; ") + std::to_string(found.equilibria.size()) + " distinct, " +
                std::to_string(constrained) + " equi_constrained";
    if (!v.passed()) v.witness = Witness{system, starts.front(), 0.0};
    return v;
}

PropertyVerdict suite_brute_force(std::uint64_t seed, std::size_t index) {
    Rng rng(seed);
    switch (index % 3) {
        case 0: {
            std::vector<EdgeSpec> edges{{1, 0, 2.0 * (1.0 - rng.unit())}, {0, 1, 2.0 * (1.0 - rng.unit())}};
            IntervalSystem system(Network::create(2, edges), random_intersecting_intervals(rng, 2));
            return brute_force_small_instance(system, 21);
        }
        case 1: {
            auto intervals = random_sorted_disjoint_intervals(rng, 3);
            std::vector<double> weights{2.0 * (1.0 - rng.unit()), 2.0 * (1.0 - rng.unit()), 2.0 * (1.0 - rng.unit())};
            IntervalSystem system(make_cycle(3, weights), intervals);
            auto v = brute_force_small_instance(system, 11);
            const State closed = cycle_equilibrium(intervals);
            const State centre(3, 0.5 * (system.summary().p_under + system.summary().q_over));
            const double gap = max_abs_diff(find_equilibrium(system, centre).point, closed);
            if (gap > kBruteForceTol) fail(v, "grid limits disagree with the closed form by " + std::to_string(gap));
            return v;
        }
        default: {
            // Intersection is the single point c.
            const std::size_t n = rng.index(2, 3);
            const double c = rng.uniform(-3.0, 3.0);
            std::vector<Interval> intervals(n);
            for (auto& iv : intervals) iv = {c - rng.uniform(0.5, 3.0), c + rng.uniform(0.5, 3.0)};
            intervals[0].upper = c;
            intervals[1].lower = c;
            IntervalSystem system(random_strongly_connected(rng, n, 0.5), intervals);
            return brute_force_small_instance(system, n == 2 ? 21 : 11);
        }
    }
}

}  // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

std::string_view canonical_suite_name(std::string_view name) {
    // Older spellings kept working for existing scripts.
    if (name == "theorem1") return "consensus";
    if (name == "theorem6") return "discrete_consensus";
    return name;
}

std::vector<SuiteVerdict> run_suite(std::string_view requested, std::uint64_t seed, std::size_t count) {
    const std::string_view name = canonical_suite_name(requested);
    std::function<PropertyVerdict(std::uint64_t, std::size_t)> body;
    if (name == "consensus") body = [](auto s, auto) { return suite_consensus(s); };
    else if (name == "discrete_consensus") body = [](auto s, auto) { return suite_discrete_consensus(s); };
    else if (name == "diagnostics") body = [](auto s, auto) { return suite_diagnostics(s); };
    else if (name == "monotone") body = [](auto s, auto) { return suite_monotone(s); };
    else if (name == "hull") body = [](auto s, auto) { return suite_hull(s); };
    else if (name == "attraction") body = [](auto s, auto) { return suite_attraction(s); };
    else if (name == "cycle_oracle") body = [](auto s, auto) { return suite_cycle_oracle(s); };
    else if (name == "disjoint") body = [](auto s, auto) { return suite_disjoint(s); };
    else if (name == "brute_force") body = [](auto s, auto i) { return suite_brute_force(s, i); };
    else throw UnknownSuite("unknown suite '" + std::string(requested) + "'");

    std::vector<SuiteVerdict> out(count);
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        const auto index = static_cast<std::size_t>(k);
        const std::uint64_t s = instance_seed(seed, index);
        PropertyVerdict v;
        try {
            v = body(s, index);
        } catch (const std::exception& e) {
            v.name = std::string(name);
            v.outcome = Outcome::Fail;
            v.worst_violation = std::numeric_limits<double>::infinity();
            v.detail = e.what();
        }
        v.seed = s;
        out[index] = SuiteVerdict{std::string(name), index, std::move(v)};
    }
    return out;
}

}  // namespace intcons
