#pragma once

// Saturated consensus kernel.
//
//   dx_i/dt = sum_{j in N_i} a_ij (psi_j(x_j) - x_i)
//   x_i+    = (1 - eps d_i) x_i + eps sum_{j in N_i} a_ij psi_j(x_j)
//
// The functions in this header are OpenMP-parallel over nodes once the
// system is large enough to amortize the fork. Each node's sum is
// accumulated in the same order regardless of thread count, so results are
// bit-identical to the serial versions in namespace `reference`.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "intcons/model.hpp"

namespace intcons {

using State = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Systems at least this large take the parallel path.
inline constexpr std::size_t kParallelNodeThreshold = 2048;

[[nodiscard]] inline double saturate(double z, const Interval& interval) noexcept {
    if (z < interval.lower) {
        return interval.lower;
    }
    if (z > interval.upper) {
        return interval.upper;
    }
    return z;
}

/// Writes dx/dt into `out`. No allocation; sizes must match.
void vector_field_into(const IntervalSystem& system, std::span<const double> x, std::span<double> out);
State vector_field(const IntervalSystem& system, std::span<const double> x);

/// One step of the discrete protocol, evaluated in the
/// (1 - eps d_i) x_i + eps sum a_ij psi_j(x_j) form. Throws on eps <= 0.
void discrete_step_into(const IntervalSystem& system, std::span<const double> x, double eps, std::span<double> out);
State discrete_step(const IntervalSystem& system, std::span<const double> x, double eps);

/// True when eps is strictly below 1 / max_i d_i, the range in which the
/// discrete protocol is guaranteed to converge.
bool step_within_bound(const Network& network, double eps);

/// Max-norm of the vector field.
double residual(const IntervalSystem& system, std::span<const double> x);

struct Diagnostics {
    double H = 0.0;         // max(max_i x_i, q*)
    double h = 0.0;         // min(min_i x_i, p*)
    double V = 0.0;         // H - h
    double diameter = 0.0;  // max_i x_i - min_i x_i
    /// Set when the intervals do not intersect: H and h are still computed
    /// by formula but carry no monotonicity guarantee.
    bool informational = false;
};

Diagnostics diagnostics(const IntervalSystem& system, std::span<const double> x);

namespace reference {

// Plain serial loops, kept as the oracle for the parallel kernels.
void vector_field_into(const IntervalSystem& system, std::span<const double> x, std::span<double> out);
void discrete_step_into(const IntervalSystem& system, std::span<const double> x, double eps, std::span<double> out);

}  // namespace reference

}  // namespace intcons
