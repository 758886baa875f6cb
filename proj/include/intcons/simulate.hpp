#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "intcons/dynamics.hpp"
#include "intcons/model.hpp"

namespace intcons {

enum class SimMode { Continuous, Discrete };

enum class TerminalReason { Horizon, Consensus, Settled };

const char* to_string(TerminalReason reason) noexcept;
const char* to_string(SimMode mode) noexcept;

class SimConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SimConfig {
    SimMode mode = SimMode::Continuous;
    /// dt (continuous) or eps (discrete). Unset picks the mode default:
    /// 0.1 / max d_i for dt, 0.9 / max d_i for eps.
    std::optional<double> step;
    /// Continuous horizon. Unset uses 50 / (smallest edge weight).
    std::optional<double> t_end;
    /// Discrete iteration cap. Unset uses ceil(default horizon / eps).
    std::optional<std::size_t> max_steps;
    std::size_t record_every = 1;
    double consensus_tol = 1e-6;
    double settle_tol = 1e-9;
    bool stop_on_consensus = true;
    bool stop_on_settle = true;
};

struct Trajectory {
    std::vector<double> times;  // t for continuous runs, iteration index for discrete
    std::vector<State> states;
    std::vector<Diagnostics> diagnostics;
    TerminalReason terminal_reason = TerminalReason::Horizon;
    std::size_t steps = 0;
    double step_size = 0.0;
    std::vector<std::string> warnings;

    [[nodiscard]] bool empty() const noexcept { return states.empty(); }
    [[nodiscard]] const State& final_state() const { return states.back(); }
};

/// Largest dt accepted by integrate_continuous for this network.
double max_continuous_dt(const Network& network);
double default_horizon(const Network& network);
double default_dt(const Network& network);
double default_eps(const Network& network);

/// Classical fixed-step RK4. Throws DimensionError or SimConfigError
/// (dt above 0.1 / max d_i, non-finite x0).
Trajectory integrate_continuous(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config);

/// Iterates the discrete protocol. An eps at or above 1 / max d_i runs but
/// attaches a warning to the trajectory.
Trajectory run_discrete(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config);

/// Dispatches on config.mode.
Trajectory simulate(const IntervalSystem& system, std::span<const double> x0, const SimConfig& config);

struct ConsensusCheck {
    std::optional<double> value;
    /// Final state is a consensus outside [p*, q*] although the intervals
    /// intersect. Cannot happen for a correct integrator.
    bool anomaly = false;
};

ConsensusCheck detect_consensus(const Trajectory& trajectory, const IntervalSummary& summary, double tol);

}  // namespace intcons
