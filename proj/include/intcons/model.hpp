#pragma once

// Domain types for interval consensus: per-node intervals, weighted
// digraphs stored by in-neighborhood, and the combined system.
//
// Node indices are 0-based in this API. Scenario files use 1-based indices
// and are converted at load time (see scenario.hpp).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace intcons {

/// Raised when raw input violates a model invariant.
class ModelError : public std::invalid_argument {
public:
    enum class Kind {
        NonPositiveWeight,
        SelfLoop,
        DuplicateEdge,
        NodeOutOfRange,
        InvertedInterval,
        NonFiniteValue,
        CountMismatch,
        EmptyInput,
        NotStronglyConnected,
    };

    ModelError(Kind kind, const std::string& what)
        : std::invalid_argument(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] bool contains(double z) const noexcept { return lower <= z && z <= upper; }
    [[nodiscard]] bool interior(double z) const noexcept { return lower < z && z < upper; }
};

/// Directed edge source -> target: `source` influences `target`, i.e.
/// source is in N_target and the weight is a_{target,source}.
struct EdgeSpec {
    std::size_t source = 0;
    std::size_t target = 0;
    double weight = 0.0;
};

struct InEdge {
    std::size_t source;
    double weight;
};

/// Weighted simple digraph. Immutable once built; in-neighbor lists are
/// stored contiguously (CSR) since the dynamics sum over N_i.
class Network {
public:
    /// Validates and builds. Throws ModelError on self-loops, duplicate
    /// edges, out-of-range nodes, or weights that are not positive and finite.
    static Network create(std::size_t node_count, std::span<const EdgeSpec> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return in_edges_.size(); }

    [[nodiscard]] std::span<const InEdge> in_neighbors(std::size_t node) const noexcept {
        return {in_edges_.data() + offsets_[node], in_edges_.data() + offsets_[node + 1]};
    }

    /// d_i = sum of a_ij over j in N_i.
    [[nodiscard]] double in_weight_sum(std::size_t node) const noexcept { return in_weight_sums_[node]; }
    [[nodiscard]] std::span<const double> in_weight_sums() const noexcept { return in_weight_sums_; }

    [[nodiscard]] bool strongly_connected() const noexcept { return strongly_connected_; }

    /// Smallest edge weight; 0 if the graph has no edges.
    [[nodiscard]] double min_weight() const noexcept { return min_weight_; }

    /// Edges in (target, source) order, for serialization.
    [[nodiscard]] std::vector<EdgeSpec> edges() const;

private:
    Network() = default;

    std::vector<std::size_t> offsets_{0};
    std::vector<InEdge> in_edges_;
    std::vector<double> in_weight_sums_;
    double min_weight_ = 0.0;
    bool strongly_connected_ = true;
};

struct IntervalSummary {
    double p_star = 0.0;   // max lower
    double q_star = 0.0;   // min upper
    double p_under = 0.0;  // min lower
    double q_over = 0.0;   // max upper
    bool has_intersection = false;
    bool pairwise_disjoint = false;
};

/// Throws ModelError(EmptyInput) on an empty list. Touching intervals
/// such as [0,1] and [1,2] are not disjoint.
IntervalSummary interval_summary(std::span<const Interval> intervals);

/// Network plus one interval per node.
class IntervalSystem {
public:
    IntervalSystem(Network network, std::vector<Interval> intervals);

    [[nodiscard]] const Network& network() const noexcept { return network_; }
    [[nodiscard]] std::span<const Interval> intervals() const noexcept { return intervals_; }
    [[nodiscard]] const Interval& interval(std::size_t node) const noexcept { return intervals_[node]; }
    [[nodiscard]] const IntervalSummary& summary() const noexcept { return summary_; }
    [[nodiscard]] std::size_t size() const noexcept { return intervals_.size(); }

    /// Throws ModelError(NotStronglyConnected) naming `analysis`.
    void require_strongly_connected(const std::string& analysis) const;

private:
    Network network_;
    std::vector<Interval> intervals_;
    IntervalSummary summary_;
};

/// Builds and validates a system from raw edge and interval lists.
IntervalSystem validate_system(std::size_t node_count, std::span<const EdgeSpec> edges,
                               std::span<const Interval> intervals);

bool is_strongly_connected(const Network& network);

/// Directed cycle in which node i listens to node i+1 and the last node
/// listens to node 0. weights[i] is the weight of node i's single in-edge.
Network make_cycle(std::size_t n, std::span<const double> weights);

/// max_i d_i; bounds the admissible discrete step size.
double max_in_weight_sum(const Network& network);

}  // namespace intcons
