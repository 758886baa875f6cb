#include "intcons/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace intcons {

namespace {

void check_dimensions(const IntervalSystem& system, std::size_t x_size, std::size_t out_size) {
    if (x_size != system.size() || out_size != system.size()) {
        throw DimensionError("state has " + std::to_string(x_size) + " entries, system has " +
                             std::to_string(system.size()) + " nodes");
    }
}

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("discrete step size must be positive and finite");
    }
}

inline double node_field(const IntervalSystem& system, std::span<const double> x, std::size_t i) {
    const double xi = x[i];
    double acc = 0.0;
    for (const auto& in : system.network().in_neighbors(i)) {
        acc += in.weight * (saturate(x[in.source], system.interval(in.source)) - xi);
    }
    return acc;
}

inline double node_step(const IntervalSystem& system, std::span<const double> x, double eps, std::size_t i) {
    double pulled = 0.0;
    for (const auto& in : system.network().in_neighbors(i)) {
        pulled += in.weight * saturate(x[in.source], system.interval(in.source));
    }
    return (1.0 - eps * system.network().in_weight_sum(i)) * x[i] + eps * pulled;
}

}  // namespace

void vector_field_into(const IntervalSystem& system, std::span<const double> x, std::span<double> out) {
    check_dimensions(system, x.size(), out.size());
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelNodeThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = node_field(system, x, static_cast<std::size_t>(i));
    }
}

State vector_field(const IntervalSystem& system, std::span<const double> x) {
    State out(x.size());
    vector_field_into(system, x, out);
    return out;
}

void discrete_step_into(const IntervalSystem& system, std::span<const double> x, double eps, std::span<double> out) {
    check_dimensions(system, x.size(), out.size());
    check_eps(eps);
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelNodeThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = node_step(system, x, eps, static_cast<std::size_t>(i));
    }
}

State discrete_step(const IntervalSystem& system, std::span<const double> x, double eps) {
    State out(x.size());
    discrete_step_into(system, x, eps, out);
    return out;
}

bool step_within_bound(const Network& network, double eps) {
    const double bound = max_in_weight_sum(network);
    return bound == 0.0 || eps * bound < 1.0;
}

double residual(const IntervalSystem& system, std::span<const double> x) {
    State f = vector_field(system, x);
    double worst = 0.0;
    for (double v : f) {
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

Diagnostics diagnostics(const IntervalSystem& system, std::span<const double> x) {
    check_dimensions(system, x.size(), x.size());
    const auto& s = system.summary();
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    Diagnostics d;
    d.H = std::max(*hi, s.q_star);
    d.h = std::min(*lo, s.p_star);
    d.V = d.H - d.h;
    d.diameter = *hi - *lo;
    d.informational = !s.has_intersection;
    return d;
}

namespace reference {

void vector_field_into(const IntervalSystem& system, std::span<const double> x, std::span<double> out) {
    check_dimensions(system, x.size(), out.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = node_field(system, x, i);
    }
}

void discrete_step_into(const IntervalSystem& system, std::span<const double> x, double eps, std::span<double> out) {
    check_dimensions(system, x.size(), out.size());
    check_eps(eps);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = node_step(system, x, eps, i);
    }
}

}  // namespace reference

}  // namespace intcons
