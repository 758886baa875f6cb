#pragma once

// Seeded random instance generators and the named verification suites run
// by `intcons verify` and the acceptance binary.
//
// Every instance derives its own 64-bit seed from (suite seed, index), so a
// verdict can be replayed from the seed it records. Suites run instances in
// parallel and return verdicts in index order.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "intcons/model.hpp"
#include "intcons/properties.hpp"

namespace intcons {

/// Uniform draws computed from raw mt19937_64 output, so sequences do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1)
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Integer in [lo, hi].
    std::size_t index(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(unit() * static_cast<double>(hi - lo + 1));
    }
    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t instance_seed(std::uint64_t suite_seed, std::size_t index);

/// A random Hamiltonian cycle plus each remaining ordered pair with
/// probability `extra_edge_prob`; weights in (0, max_weight].
Network random_strongly_connected(Rng& rng, std::size_t n, double extra_edge_prob = 0.25, double max_weight = 2.0);
/// All intervals share a common point.
std::vector<Interval> random_intersecting_intervals(Rng& rng, std::size_t n);
/// Independent random intervals; intersection may or may not be empty.
std::vector<Interval> random_intervals(Rng& rng, std::size_t n);
/// Strictly increasing ends, pairwise disjoint.
std::vector<Interval> random_sorted_disjoint_intervals(Rng& rng, std::size_t n);
State random_state(Rng& rng, std::size_t n, double lo, double hi);

struct Instance {
    IntervalSystem system;
    State x0;
};

/// Strongly connected digraph with n in 3..10, weights in (0,2],
/// intersecting intervals, and x0 in [p_under - 5, q_over + 5]^n.
Instance consensus_instance(std::uint64_t seed);

class UnknownSuite : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::span<const std::string_view> suite_names();
/// Maps accepted alternate spellings onto names from suite_names().
std::string_view canonical_suite_name(std::string_view name);

struct SuiteVerdict {
    std::string suite;
    std::size_t index = 0;
    PropertyVerdict verdict;
};

/// Runs `count` instances of the named suite (alternate spellings
/// accepted). Throws UnknownSuite.
std::vector<SuiteVerdict> run_suite(std::string_view name, std::uint64_t seed, std::size_t count);

}  // namespace intcons
