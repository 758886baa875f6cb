#include "intcons/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace intcons {

namespace {

// Nodes reachable from node 0 along the given adjacency lists.
std::vector<bool> reach_from_zero(std::size_t n, std::span<const std::vector<std::size_t>> adjacency) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : adjacency[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

std::string node_label(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

Network Network::create(std::size_t node_count, std::span<const EdgeSpec> edges) {
    if (node_count == 0) {
        throw ModelError(ModelError::Kind::EmptyInput, "network must have at least one node");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
        if (e.source >= node_count || e.target >= node_count) {
            throw ModelError(ModelError::Kind::NodeOutOfRange,
                             "edge " + node_label(e.source) + "->" + node_label(e.target) +
                                 " references a node outside 1.." + std::to_string(node_count));
        }
        if (e.source == e.target) {
            throw ModelError(ModelError::Kind::SelfLoop, "self-loop at node " + node_label(e.source));
        }
        if (!std::isfinite(e.weight) || e.weight <= 0.0) {
            throw ModelError(ModelError::Kind::NonPositiveWeight,
                             "edge " + node_label(e.source) + "->" + node_label(e.target) +
                                 " has non-positive or non-finite weight");
        }
        if (!seen.emplace(e.source, e.target).second) {
            throw ModelError(ModelError::Kind::DuplicateEdge,
                             "duplicate edge " + node_label(e.source) + "->" + node_label(e.target));
        }
    }

    Network net;
    std::vector<std::vector<InEdge>> lists(node_count);
    for (const auto& e : edges) {
        lists[e.target].push_back({e.source, e.weight});
    }
    net.offsets_.assign(1, 0);
    net.in_weight_sums_.reserve(node_count);
    net.min_weight_ = edges.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (auto& list : lists) {
        std::sort(list.begin(), list.end(), [](const InEdge& a, const InEdge& b) { return a.source < b.source; });
        double sum = 0.0;
        for (const auto& in : list) {
            sum += in.weight;
            net.min_weight_ = std::min(net.min_weight_, in.weight);
            net.in_edges_.push_back(in);
        }
        net.in_weight_sums_.push_back(sum);
        net.offsets_.push_back(net.in_edges_.size());
    }
    net.strongly_connected_ = is_strongly_connected(net);
    return net;
}

std::vector<EdgeSpec> Network::edges() const {
    std::vector<EdgeSpec> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < node_count(); ++i) {
        for (const auto& in : in_neighbors(i)) {
            out.push_back({in.source, i, in.weight});
        }
    }
    return out;
}

bool is_strongly_connected(const Network& network) {
    const std::size_t n = network.node_count();
    if (n <= 1) {
        return true;
    }
    std::vector<std::vector<std::size_t>> forward(n), backward(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& in : network.in_neighbors(i)) {
            forward[in.source].push_back(i);
            backward[i].push_back(in.source);
        }
    }
    const auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
    return all(reach_from_zero(n, forward)) && all(reach_from_zero(n, backward));
}

IntervalSummary interval_summary(std::span<const Interval> intervals) {
    if (intervals.empty()) {
        throw ModelError(ModelError::Kind::EmptyInput, "interval list is empty");
    }
    IntervalSummary s;
    s.p_star = s.p_under = intervals.front().lower;
    s.q_star = s.q_over = intervals.front().upper;
    for (const auto& iv : intervals) {
        s.p_star = std::max(s.p_star, iv.lower);
        s.p_under = std::min(s.p_under, iv.lower);
        s.q_star = std::min(s.q_star, iv.upper);
        s.q_over = std::max(s.q_over, iv.upper);
    }
    s.has_intersection = s.p_star <= s.q_star;

    // Pairwise disjoint iff, after sorting by lower end, each interval ends
    // strictly before the next one starts.
    std::vector<Interval> sorted(intervals.begin(), intervals.end());
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
        return a.lower < b.lower || (a.lower == b.lower && a.upper < b.upper);
    });
    s.pairwise_disjoint = true;
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        if (!(sorted[k].upper < sorted[k + 1].lower)) {
            s.pairwise_disjoint = false;
            break;
        }
    }
    return s;
}

IntervalSystem::IntervalSystem(Network network, std::vector<Interval> intervals)
    : network_(std::move(network)), intervals_(std::move(intervals)) {
    if (intervals_.size() != network_.node_count()) {
        throw ModelError(ModelError::Kind::CountMismatch,
                         "expected " + std::to_string(network_.node_count()) + " intervals, got " +
                             std::to_string(intervals_.size()));
    }
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto& iv = intervals_[i];
        if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper)) {
            throw ModelError(ModelError::Kind::NonFiniteValue, "interval " + node_label(i) + " is not finite");
        }
        if (iv.lower > iv.upper) {
            throw ModelError(ModelError::Kind::InvertedInterval,
                             "interval " + node_label(i) + " has lower > upper");
        }
    }
    summary_ = interval_summary(intervals_);
}

void IntervalSystem::require_strongly_connected(const std::string& analysis) const {
    if (!network_.strongly_connected()) {
        throw ModelError(ModelError::Kind::NotStronglyConnected,
                         analysis + " requires a strongly connected graph");
    }
}

IntervalSystem validate_system(std::size_t node_count, std::span<const EdgeSpec> edges,
                               std::span<const Interval> intervals) {
    return IntervalSystem(Network::create(node_count, edges), {intervals.begin(), intervals.end()});
}

Network make_cycle(std::size_t n, std::span<const double> weights) {
    if (n < 2) {
        throw ModelError(ModelError::Kind::EmptyInput, "a cycle needs at least two nodes");
    }
    if (weights.size() != n) {
        throw ModelError(ModelError::Kind::CountMismatch,
                         "cycle of " + std::to_string(n) + " nodes needs " + std::to_string(n) + " weights");
    }
    std::vector<EdgeSpec> edges;
    edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({(i + 1) % n, i, weights[i]});
    }
    return Network::create(n, edges);
}

double max_in_weight_sum(const Network& network) {
    const auto sums = network.in_weight_sums();
    return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

}  // namespace intcons
