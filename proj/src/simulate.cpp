#include "intcons/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace intcons {

const char* to_string(TerminalReason reason) noexcept {
    switch (reason) {
        case TerminalReason::Horizon: return "horizon";
        case TerminalReason::Consensus: return "consensus";
        case TerminalReason::Settled: return "settled";
    }
    return "unknown";
}

const char* to_string(SimMode mode) noexcept {
    return mode == SimMode::Continuous ? "continuous" : "discrete";
}

double max_continuous_dt(const Network& network) {
    const double d = max_in_weight_sum(network);
    return d > 0.0 ? 0.1 / d : 0.1;
}

double default_horizon(const Network& network) {
    const double w = network.min_weight();
    return w > 0.0 ? 50.0 / w : 50.0;
}

double default_dt(const Network& network) { return max_continuous_dt(network); }

double default_eps(const Network& network) {
    const double d = max_in_weight_sum(network);
    return d > 0.0 ? 0.9 / d : 0.9;
}

namespace {

void check_initial(const IntervalSystem& system, std::span<const double> x0) {
    if (x0.size() != system.size()) {
        throw DimensionError("initial state has " + std::to_string(x0.size()) + " entries, system has " +
                             std::to_string(system.size()) + " nodes");
    }
    if (!std::all_of(x0.begin(), x0.end(), [](double v) { return std::isfinite(v); })) {
        throw SimConfigError("initial state contains non-finite values");
    }
    if (system.size() == 0) {
        throw DimensionError("empty system");
    }
}

// Without a common point there is no guaranteed consensus limit, so those
// runs only stop by settling.
bool is_consensus(const IntervalSummary& summary, const Diagnostics& d, std::span<const double> x, double tol) {
    if (!summary.has_intersection || !(d.diameter < tol)) {
        return false;
    }
    return std::all_of(x.begin(), x.end(), [&](double v) {
        return v >= summary.p_star - tol && v <= summary.q_star + tol;
    });
}

// Shared driver: `advance(x, next)` performs one step; the field buffer is
// reused for the settled check.
template <typename Advance>
Trajectory run(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config,
               std::size_t total_steps, double time_per_step, Advance&& advance) {
    if (config.record_every == 0) {
        throw SimConfigError("record_every must be positive");
    }
    Trajectory traj;
    State x(x0.begin(), x0.end());
    State next(x.size());
    State field(x.size());

    const auto record = [&](std::size_t step) {
        traj.times.push_back(static_cast<double>(step) * time_per_step);
        traj.states.push_back(x);
        traj.diagnostics.push_back(diagnostics(system, x));
    };

    // Returns true when the run should stop.
    const auto check = [&]() {
        if (config.stop_on_settle) {
            vector_field_into(system, x, field);
            double worst = 0.0;
            for (double v : field) {
                worst = std::max(worst, std::abs(v));
            }
            if (worst < config.settle_tol) {
                traj.terminal_reason = TerminalReason::Settled;
                return true;
            }
        }
        if (config.stop_on_consensus &&
            is_consensus(system.summary(), traj.diagnostics.back(), x, config.consensus_tol)) {
            traj.terminal_reason = TerminalReason::Consensus;
            return true;
        }
        return false;
    };

    record(0);
    if (check()) {
        return traj;
    }
    std::size_t step = 0;
    while (step < total_steps) {
        advance(x, next);
        x.swap(next);
        ++step;
        if (step % config.record_every == 0) {
            record(step);
            if (check()) {
                traj.steps = step;
                return traj;
            }
        }
    }
    if (traj.times.back() != static_cast<double>(step) * time_per_step) {
        record(step);
    }
    traj.steps = step;
    traj.terminal_reason = TerminalReason::Horizon;
    return traj;
}

}  // namespace

Trajectory integrate_continuous(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config) {
    check_initial(system, x0);
    const double dt = config.step.value_or(default_dt(system.network()));
    const double guard = max_continuous_dt(system.network());
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw SimConfigError("dt must be positive and finite");
    }
    if (dt > guard) {
        throw SimConfigError("dt = " + std::to_string(dt) + " exceeds the stability guard 0.1 / max in-weight sum = " +
                             std::to_string(guard));
    }
    const double t_end = config.t_end.value_or(default_horizon(system.network()));
    if (!(t_end > 0.0)) {
        throw SimConfigError("t_end must be positive");
    }
    const auto total = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));

    const std::size_t n = system.size();
    State k1(n), k2(n), k3(n), k4(n), stage(n);
    Trajectory traj = run(system, x0, config, total, dt, [&](const State& x, State& out) {
        vector_field_into(system, x, k1);
        for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k1[i];
        vector_field_into(system, stage, k2);
        for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k2[i];
        vector_field_into(system, stage, k3);
        for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + dt * k3[i];
        vector_field_into(system, stage, k4);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    });
    traj.step_size = dt;
    return traj;
}

Trajectory run_discrete(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config) {
    check_initial(system, x0);
    const double eps = config.step.value_or(default_eps(system.network()));
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw SimConfigError("eps must be positive and finite");
    }
    const std::size_t total =
        config.max_steps.value_or(static_cast<std::size_t>(std::ceil(default_horizon(system.network()) / eps)));

    Trajectory traj = run(system, x0, config, total, 1.0, [&](const State& x, State& out) {
        discrete_step_into(system, x, eps, out);
    });
    traj.step_size = eps;
    if (!step_within_bound(system.network(), eps)) {
        traj.warnings.push_back("eps = " + std::to_string(eps) +
                                " is not below 1 / max in-weight sum; convergence is not guaranteed");
    }
    return traj;
}

Trajectory simulate(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config) {
    return config.mode == SimMode::Continuous ? integrate_continuous(system, x0, config)
                                              : run_discrete(system, x0, config);
}

ConsensusCheck detect_consensus(const Trajectory& trajectory, const IntervalSummary& summary, double tol) {
    ConsensusCheck out;
    if (trajectory.empty()) {
        return out;
    }
    const State& x = trajectory.final_state();
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (!(*hi - *lo < tol)) {
        return out;
    }
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    if (summary.has_intersection && (mean < summary.p_star - tol || mean > summary.q_star + tol)) {
        out.anomaly = true;
        return out;
    }
    out.value = mean;
    return out;
}

}  // namespace intcons
