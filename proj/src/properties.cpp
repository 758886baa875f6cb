#include "intcons/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "intcons/equilibria.hpp"

namespace intcons {

const char* to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

PropertyVerdict make_verdict(std::string name, double worst, double tol) {
    PropertyVerdict v;
    v.name = std::move(name);
    v.worst_violation = worst;
    v.tolerance = tol;
    v.outcome = worst <= tol ? Outcome::Pass : Outcome::Fail;
    return v;
}

double hull_excursion(std::span<const double> x, const IntervalSummary& s) {
    double worst = 0.0;
    for (double v : x) {
        worst = std::max({worst, s.p_under - v, v - s.q_over});
    }
    return worst;
}

}  // namespace

PropertyVerdict check_monotone_flow(const IntervalSystem& system, std::span<const double> y0,
                                    std::span<const double> z0, double horizon, double dt) {
    if (y0.size() != system.size() || z0.size() != system.size()) {
        throw DimensionError("initial states do not match system dimension");
    }
    for (std::size_t i = 0; i < y0.size(); ++i) {
        if (!(y0[i] <= z0[i])) {
            throw PreconditionError("monotone flow check needs y0 <= z0 componentwise (fails at node " +
                                    std::to_string(i + 1) + ")");
        }
    }
    SimConfig config;
    config.step = dt;
    config.t_end = horizon;
    config.stop_on_consensus = false;
    config.stop_on_settle = false;
    const Trajectory ty = integrate_continuous(system, y0, config);
    const Trajectory tz = integrate_continuous(system, z0, config);
    auto v = compare_ordered_runs(ty, tz);
    if (!v.passed()) {
        v.witness->system = system;
        std::string z = "z0 =";
        for (double c : z0) z += " " + std::to_string(c);
        v.detail = z;
    }
    return v;
}

PropertyVerdict compare_ordered_runs(const Trajectory& lower, const Trajectory& upper) {
    if (lower.states.size() != upper.states.size()) {
        throw DimensionError("runs were not sampled on the same grid");
    }
    double worst = -std::numeric_limits<double>::infinity();
    double worst_time = 0.0;
    for (std::size_t k = 0; k < lower.states.size(); ++k) {
        for (std::size_t i = 0; i < lower.states[k].size(); ++i) {
            const double gap = lower.states[k][i] - upper.states[k][i];
            if (gap > worst) {
                worst = gap;
                worst_time = lower.times[k];
            }
        }
    }
    auto v = make_verdict("monotone_flow", worst, kMonotoneFlowTol);
    if (!v.passed()) {
        v.witness = Witness{std::nullopt, lower.states.front(), worst_time};
    }
    return v;
}

PropertyVerdict check_diagnostic_monotonicity(const Trajectory& trajectory, const IntervalSummary& summary) {
    if (!summary.has_intersection) {
        throw PreconditionError("H/h monotonicity is only claimed when the intervals intersect");
    }
    double worst = 0.0;
    double worst_time = 0.0;
    const auto& d = trajectory.diagnostics;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
        const double rise = std::max(d[k + 1].H - d[k].H, d[k].h - d[k + 1].h);
        if (rise > worst) {
            worst = rise;
            worst_time = trajectory.times[k + 1];
        }
    }
    auto v = make_verdict("diagnostic_monotonicity", worst, kDiagnosticStepTol);
    if (!v.passed()) {
        v.witness = Witness{std::nullopt, trajectory.states.front(), worst_time};
    }
    return v;
}

PropertyVerdict check_hull_invariance(const Trajectory& trajectory, const IntervalSummary& summary) {
    if (trajectory.empty()) {
        throw PreconditionError("empty trajectory");
    }
    if (hull_excursion(trajectory.states.front(), summary) > 0.0) {
        throw PreconditionError("hull invariance needs x(0) inside [p_under, q_over]^n");
    }
    double worst = 0.0;
    double worst_time = 0.0;
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const double e = hull_excursion(trajectory.states[k], summary);
        if (e > worst) {
            worst = e;
            worst_time = trajectory.times[k];
        }
    }
    auto v = make_verdict("hull_invariance", worst, kHullInvarianceTol);
    if (!v.passed()) {
        v.witness = Witness{std::nullopt, trajectory.states.front(), worst_time};
    }
    return v;
}

PropertyVerdict check_hull_attraction(const IntervalSystem& system, const Trajectory& trajectory) {
    if (!system.network().strongly_connected()) {
        throw PreconditionError("hull attraction needs a strongly connected graph");
    }
    if (trajectory.empty()) {
        throw PreconditionError("empty trajectory");
    }
    const double dist = hull_excursion(trajectory.final_state(), system.summary());
    auto v = make_verdict("hull_attraction", dist, kHullAttractionTol);
    if (trajectory.terminal_reason == TerminalReason::Horizon) {
        v.outcome = Outcome::Inconclusive;
        v.detail = "run reached the horizon before settling";
    }
    if (v.outcome == Outcome::Fail) {
        v.witness = Witness{system, trajectory.states.front(), trajectory.times.back()};
    }
    return v;
}

PropertyVerdict brute_force_small_instance(const IntervalSystem& system, std::size_t resolution,
                                           const BruteForceOptions& options) {
    const std::size_t n = system.size();
    if (n > 3) {
        throw PreconditionError("brute-force oracle is limited to n <= 3");
    }
    if (resolution < 2) {
        throw PreconditionError("grid resolution must be at least 2");
    }
    const auto& s = system.summary();
    const double lo = s.p_under - 2.0;
    const double hi = s.q_over + 2.0;
    const double spacing = (hi - lo) / static_cast<double>(resolution - 1);

    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= resolution;
    const auto grid_point = [&](std::size_t index) {
        State x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = lo + spacing * static_cast<double>(index % resolution);
            index /= resolution;
        }
        return x;
    };

    std::vector<State> known;
    if (!s.has_intersection) {
        std::vector<State> starts;
        for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
            State x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = (corner >> i) & 1U ? hi : lo;
            starts.push_back(std::move(x));
        }
        starts.emplace_back(n, 0.5 * (lo + hi));
        for (auto& r : find_equilibria(system, starts).equilibria) known.push_back(std::move(r.point));
    }

    const double d = max_in_weight_sum(system.network());
    const double h = options.step_fraction / (d > 0.0 ? d : 1.0);

    std::vector<double> violation(total, 0.0);
    const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        State x = grid_point(static_cast<std::size_t>(k));
        State f(n);
        bool settled = false;
        for (std::size_t step = 0; step < options.max_steps; ++step) {
            reference::vector_field_into(system, x, f);
            double r = 0.0;
            for (double v : f) r = std::max(r, std::abs(v));
            if (r < options.settle_residual) {
                settled = true;
                break;
            }
            for (std::size_t i = 0; i < n; ++i) x[i] += h * f[i];
        }
        double worst = settled ? 0.0 : std::numeric_limits<double>::infinity();
        if (s.has_intersection) {
            const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
            double outside = 0.0;
            for (double v : x) outside = std::max({outside, s.p_star - v, v - s.q_star});
            worst = std::max({worst, *mx - *mn, outside});
        } else {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& e : known) {
                double dist = 0.0;
                for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, std::abs(e[i] - x[i]));
                nearest = std::min(nearest, dist);
            }
            worst = std::max(worst, nearest);
        }
        violation[static_cast<std::size_t>(k)] = worst;
    }

    const auto it = std::max_element(violation.begin(), violation.end());
    auto v = make_verdict("brute_force", *it, kBruteForceTol);
    v.detail = std::to_string(total) + " grid starts";
    if (!v.passed()) {
        v.witness = Witness{system, grid_point(static_cast<std::size_t>(it - violation.begin())), 0.0};
    }
    return v;
}

}  // namespace intcons
