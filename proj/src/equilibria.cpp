#include "intcons/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intcons/simulate.hpp"

namespace intcons {

const char* to_string(NodeStatus s) noexcept {
    switch (s) {
        case NodeStatus::Below: return "below";
        case NodeStatus::Interior: return "interior";
        case NodeStatus::Above: return "above";
        case NodeStatus::AtLower: return "at_lower";
        case NodeStatus::AtUpper: return "at_upper";
    }
    return "unknown";
}

const char* to_string(EquilibriumClass c) noexcept {
    switch (c) {
        case EquilibriumClass::EquiUnconstrained: return "equi_unconstrained";
        case EquilibriumClass::EquiConstrained: return "equi_constrained";
        case EquilibriumClass::Mixed: return "mixed";
        case EquilibriumClass::Boundary: return "boundary";
    }
    return "unknown";
}

const char* to_string(Stability s) noexcept {
    switch (s) {
        case Stability::AsymptoticallyStable: return "asymptotically_stable";
        case Stability::MarginallyStable: return "marginally_stable";
        case Stability::Unstable: return "unstable";
        case Stability::Undefined: return "undefined";
    }
    return "unknown";
}

Classification classify_equilibrium(const IntervalSystem& system, std::span<const double> e, double boundary_tol) {
    if (e.size() != system.size()) {
        throw DimensionError("point dimension does not match system");
    }
    Classification out;
    out.per_node.reserve(e.size());
    bool any_at = false, all_interior = true, all_outside = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& iv = system.interval(i);
        NodeStatus s;
        if (std::abs(e[i] - iv.lower) <= boundary_tol) {
            s = NodeStatus::AtLower;
        } else if (std::abs(e[i] - iv.upper) <= boundary_tol) {
            s = NodeStatus::AtUpper;
        } else if (e[i] < iv.lower) {
            s = NodeStatus::Below;
        } else if (e[i] > iv.upper) {
            s = NodeStatus::Above;
        } else {
            s = NodeStatus::Interior;
        }
        any_at = any_at || s == NodeStatus::AtLower || s == NodeStatus::AtUpper;
        all_interior = all_interior && s == NodeStatus::Interior;
        all_outside = all_outside && (s == NodeStatus::Below || s == NodeStatus::Above);
        out.per_node.push_back(s);
    }
    if (any_at) {
        out.kind = EquilibriumClass::Boundary;
    } else if (all_interior) {
        out.kind = EquilibriumClass::EquiUnconstrained;
    } else if (all_outside) {
        out.kind = EquilibriumClass::EquiConstrained;
    } else {
        out.kind = EquilibriumClass::Mixed;
    }
    return out;
}

std::optional<Eigen::MatrixXd> linearize_at(const IntervalSystem& system, std::span<const double> e,
                                            double boundary_tol) {
    const auto cls = classify_equilibrium(system, e, boundary_tol);
    if (cls.kind == EquilibriumClass::Boundary) {
        return std::nullopt;
    }
    const std::size_t n = system.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto& net = system.network();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        J(row, row) = -net.in_weight_sum(i);
        for (const auto& in : net.in_neighbors(i)) {
            if (cls.per_node[in.source] == NodeStatus::Interior) {
                J(row, static_cast<Eigen::Index>(in.source)) = in.weight;
            }
        }
    }
    return J;
}

Stability is_hurwitz(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw EigenSolverError("is_hurwitz needs a non-empty square matrix");
    }
    if (!matrix.allFinite()) {
        throw EigenSolverError("matrix has non-finite entries");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw EigenSolverError("eigenvalue computation did not converge");
    }
    const double max_real = solver.eigenvalues().real().maxCoeff();
    if (max_real < -kHurwitzTol) {
        return Stability::AsymptoticallyStable;
    }
    if (std::abs(max_real) <= kHurwitzTol) {
        return Stability::MarginallyStable;
    }
    return Stability::Unstable;
}

EquilibriumReport describe_equilibrium(const IntervalSystem& system, std::span<const double> e, double boundary_tol) {
    EquilibriumReport r;
    r.point.assign(e.begin(), e.end());
    r.residual = residual(system, e);
    auto cls = classify_equilibrium(system, e, boundary_tol);
    r.classification = cls.kind;
    r.per_node_status = std::move(cls.per_node);
    r.jacobian = linearize_at(system, e, boundary_tol);
    r.stable = r.jacobian ? is_hurwitz(*r.jacobian) : Stability::Undefined;
    return r;
}

EquilibriumReport find_equilibrium(const IntervalSystem& system, std::span<const double> x0,
                                   const SearchOptions& options) {
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("equilibrium tolerance must be positive");
    }
    // Distance to the equilibrium scales like residual / (smallest weight),
    // so search to a correspondingly tighter residual.
    const double target = options.tol * std::min(1.0, system.network().min_weight() > 0.0 ? system.network().min_weight() : 1.0);
    SimConfig config;
    config.t_end = options.t_end.value_or(20.0 * default_horizon(system.network()));
    config.stop_on_consensus = false;
    config.settle_tol = target;
    config.record_every = 64;
    const Trajectory traj = integrate_continuous(system, x0, config);

    // Damped fixed-point polish: explicit Euler at half the stability limit
    // of the linear parts.
    State x = traj.final_state();
    State f(x.size());
    const double d = max_in_weight_sum(system.network());
    const double eta = d > 0.0 ? 0.5 / d : 0.5;
    double res = 0.0;
    for (std::size_t it = 0;; ++it) {
        vector_field_into(system, x, f);
        res = 0.0;
        for (double v : f) {
            res = std::max(res, std::abs(v));
        }
        if (res < target || it >= options.max_polish_iterations) {
            break;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += eta * f[i];
        }
    }
    if (!(res < options.tol)) {
        throw EquilibriumNotFound("did not settle: residual " + std::to_string(res) + " after horizon " +
                                  std::to_string(*config.t_end));
    }
    return describe_equilibrium(system, x, options.boundary_tol);
}

MultiStartResult find_equilibria(const IntervalSystem& system, std::span<const State> starts,
                                 const SearchOptions& options, double dedup_tol) {
    std::vector<std::optional<EquilibriumReport>> found(starts.size());
    const auto count = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            found[static_cast<std::size_t>(k)] = find_equilibrium(system, starts[static_cast<std::size_t>(k)], options);
        } catch (const EquilibriumNotFound&) {
        }
    }

    MultiStartResult out;
    for (auto& report : found) {
        if (!report) {
            ++out.failed_starts;
            continue;
        }
        const bool duplicate = std::any_of(out.equilibria.begin(), out.equilibria.end(), [&](const auto& kept) {
            for (std::size_t i = 0; i < kept.point.size(); ++i) {
                if (std::abs(kept.point[i] - report->point[i]) > dedup_tol) {
                    return false;
                }
            }
            return true;
        });
        if (!duplicate) {
            out.equilibria.push_back(std::move(*report));
        }
    }
    return out;
}

State cycle_equilibrium(std::span<const Interval> intervals) {
    const std::size_t n = intervals.size();
    if (n < 2) {
        throw CyclePreconditionError("cycle equilibrium needs at least two intervals");
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!(intervals[k].lower < intervals[k + 1].lower) || !(intervals[k].upper < intervals[k + 1].upper)) {
            throw CyclePreconditionError("interval ends must be strictly increasing");
        }
        if (!(intervals[k].upper < intervals[k + 1].lower)) {
            throw CyclePreconditionError("intervals must be pairwise disjoint");
        }
    }
    for (const auto& iv : intervals) {
        if (iv.lower > iv.upper) {
            throw CyclePreconditionError("inverted interval");
        }
    }

    // 1-based recursion: e_n = q_1, e_{n-1} = p_n, and for i = 2..n-1
    // e_{n-i} = q_{n-i+1} if p_n > q_{n-i+1}, else p_n.
    const auto p = [&](std::size_t m) { return intervals[m - 1].lower; };
    const auto q = [&](std::size_t m) { return intervals[m - 1].upper; };
    State e(n);
    const auto at = [&](std::size_t m) -> double& { return e[m - 1]; };
    at(n) = q(1);
    at(n - 1) = p(n);
    for (std::size_t i = 2; i <= n - 1; ++i) {
        at(n - i) = p(n) > q(n - i + 1) ? q(n - i + 1) : p(n);
    }

    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t next = (m + 1) % n;
        const double expected = saturate(e[next], intervals[next]);
        if (std::abs(e[m] - expected) > 1e-12) {
            throw std::logic_error("cycle equilibrium fails the fixed-point identity at node " +
                                   std::to_string(m + 1));
        }
    }
    return e;
}

}  // namespace intcons
