#pragma once

// Equilibrium search, classification by where each component sits relative
// to its own interval, local linearization, and the closed-form equilibrium
// of the directed cycle with sorted disjoint intervals.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "intcons/dynamics.hpp"
#include "intcons/model.hpp"

namespace intcons {

enum class NodeStatus { Below, Interior, Above, AtLower, AtUpper };

enum class EquilibriumClass {
    EquiUnconstrained,  // every component strictly inside its interval
    EquiConstrained,    // every component strictly outside its interval
    Mixed,
    Boundary,           // some component within boundary_tol of an endpoint
};

enum class Stability { AsymptoticallyStable, MarginallyStable, Unstable, Undefined };

const char* to_string(NodeStatus s) noexcept;
const char* to_string(EquilibriumClass c) noexcept;
const char* to_string(Stability s) noexcept;

inline constexpr double kDefaultBoundaryTol = 1e-7;
inline constexpr double kHurwitzTol = 1e-9;

class EquilibriumNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Classification {
    EquilibriumClass kind = EquilibriumClass::Boundary;
    std::vector<NodeStatus> per_node;
};

struct EquilibriumReport {
    State point;
    double residual = 0.0;
    EquilibriumClass classification = EquilibriumClass::Boundary;
    std::vector<NodeStatus> per_node_status;
    std::optional<Eigen::MatrixXd> jacobian;  // empty at boundary points
    Stability stable = Stability::Undefined;
};

struct SearchOptions {
    double tol = 1e-10;
    double boundary_tol = kDefaultBoundaryTol;
    /// Integration horizon before polishing; unset uses 20x the default.
    std::optional<double> t_end;
    std::size_t max_polish_iterations = 1'000'000;
};

Classification classify_equilibrium(const IntervalSystem& system, std::span<const double> e, double boundary_tol);

/// Jacobian of the vector field at e: J_ii = -d_i, J_ij = a_ij when e_j is
/// strictly inside its interval. Empty when any component lies within
/// boundary_tol of an endpoint, where the field is not differentiable.
std::optional<Eigen::MatrixXd> linearize_at(const IntervalSystem& system, std::span<const double> e,
                                            double boundary_tol);

/// Verdict from the largest real part of the spectrum against kHurwitzTol.
/// Throws EigenSolverError if the matrix is not square/finite or the
/// solver fails.
Stability is_hurwitz(const Eigen::MatrixXd& matrix);

/// Integrates to a settled state from x0, then polishes with damped
/// fixed-point steps until the residual is below options.tol. Throws
/// EquilibriumNotFound when the residual target is not met.
EquilibriumReport find_equilibrium(const IntervalSystem& system, std::span<const double> x0,
                                   const SearchOptions& options = {});

/// Residual, classification, linearization, and stability for a point.
EquilibriumReport describe_equilibrium(const IntervalSystem& system, std::span<const double> e,
                                       double boundary_tol = kDefaultBoundaryTol);

/// Runs find_equilibrium from every start (in parallel) and keeps one
/// representative per cluster at `dedup_tol` max-norm resolution, in order
/// of first appearance. Starts that fail to settle are skipped and counted.
struct MultiStartResult {
    std::vector<EquilibriumReport> equilibria;
    std::size_t failed_starts = 0;
};
MultiStartResult find_equilibria(const IntervalSystem& system, std::span<const State> starts,
                                 const SearchOptions& options = {}, double dedup_tol = 1e-6);

class CyclePreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed-form equilibrium of the directed cycle (node i listens to i+1,
/// the last node to the first) for intervals with strictly increasing lower
/// and upper ends that are pairwise disjoint. Verifies the fixed-point
/// identities e_i = psi_{i+1}(e_{i+1}), e_n = psi_1(e_1) before returning.
State cycle_equilibrium(std::span<const Interval> intervals);

}  // namespace intcons
