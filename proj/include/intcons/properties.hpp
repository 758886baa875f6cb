#pragma once

// Executable checks for the qualitative behaviour of interval consensus:
// order preservation of the flow, monotone H/h envelopes, invariance and
// attraction of the interval hull, and a brute-force grid oracle for very
// small systems.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "intcons/dynamics.hpp"
#include "intcons/model.hpp"
#include "intcons/simulate.hpp"

namespace intcons {

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Outcome { Pass, Fail, Inconclusive };

const char* to_string(Outcome o) noexcept;

struct Witness {
    std::optional<IntervalSystem> system;
    State x0;
    double time = 0.0;
};

struct PropertyVerdict {
    std::string name;
    Outcome outcome = Outcome::Inconclusive;
    /// Largest observed violation measure; passes iff <= tolerance.
    double worst_violation = 0.0;
    double tolerance = 0.0;
    std::optional<std::uint64_t> seed;
    std::optional<Witness> witness;  // set on failure
    std::string detail;

    [[nodiscard]] bool passed() const noexcept { return outcome == Outcome::Pass; }
};

inline constexpr double kMonotoneFlowTol = 1e-8;
inline constexpr double kDiagnosticStepTol = 1e-9;
inline constexpr double kHullInvarianceTol = 1e-9;
inline constexpr double kHullAttractionTol = 1e-6;
inline constexpr double kBruteForceTol = 1e-5;

/// Simulates from y0 and z0 on the same time grid; the violation is the
/// largest y_i(t) - z_i(t) over recorded samples. Requires y0 <= z0.
PropertyVerdict check_monotone_flow(const IntervalSystem& system, std::span<const double> y0,
                                    std::span<const double> z0, double horizon, double dt);

/// The comparison behind check_monotone_flow, for runs already sampled on a
/// common grid.
PropertyVerdict compare_ordered_runs(const Trajectory& lower, const Trajectory& upper);

/// Largest per-sample increase of H or decrease of h. Refuses systems whose
/// intervals do not intersect.
PropertyVerdict check_diagnostic_monotonicity(const Trajectory& trajectory, const IntervalSummary& summary);

/// Largest excursion outside [p_under, q_over]^n. Requires x(0) inside.
PropertyVerdict check_hull_invariance(const Trajectory& trajectory, const IntervalSummary& summary);

/// Max-norm distance of the final sample to [p_under, q_over]^n.
/// Inconclusive when the run ended at the horizon. Requires strong
/// connectivity.
PropertyVerdict check_hull_attraction(const IntervalSystem& system, const Trajectory& trajectory);

struct BruteForceOptions {
    /// Integration step as a fraction of 1 / max d_i.
    double step_fraction = 0.01;
    double settle_residual = 1e-11;
    std::size_t max_steps = 5'000'000;
};

/// Grid of `resolution`^n starts over [p_under - 2, q_over + 2]^n, each
/// driven to rest by small-step explicit Euler on the serial reference
/// kernel. Nonempty intersection: every limit must be a consensus in
/// [p*, q*]. Empty intersection: every limit must match an equilibrium
/// returned by find_equilibria. Only n <= 3.
PropertyVerdict brute_force_small_instance(const IntervalSystem& system, std::size_t resolution,
                                           const BruteForceOptions& options = {});

}  // namespace intcons
