#pragma once

// Scenario files (JSON, schema 1). Node indices are 1-based in the file.
//
// {
//   "schema": 1,
//   "name": "optional label",
//   "description": "optional free text",
//   "nodes": 3,
//   "edges": [{"from": 2, "to": 1, "weight": 1.0}, ...],
//   "intervals": [{"p": 0.0, "q": 1.0}, ...],
//   "initial": [0.0, 1.0, 2.0]
//           | {"seed": 7, "count": 10, "low": -5.0, "high": 5.0},
//   "sim": {"mode": "continuous" | "discrete", "dt": 1e-3, "eps": 0.25,
//           "t_end": 100.0, "max_steps": 100000, "record_every": 10,
//           "consensus_tol": 1e-6, "settle_tol": 1e-9},
//   "outputs": {"dir": "out", "csv": true, "summary": true}
// }
//
// Edge direction is influencer -> influenced: {"from": j, "to": i} puts j in
// N_i. Unknown keys are rejected at every level.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "intcons/model.hpp"
#include "intcons/simulate.hpp"

namespace intcons {

inline constexpr int kScenarioSchema = 1;

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    /// JSON path of the offending field, e.g. "/edges/2/weight".
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct SamplerSpec {
    std::uint64_t seed = 0;
    std::size_t count = 1;
    double low = 0.0;
    double high = 0.0;
};

struct OutputSpec {
    std::optional<std::string> dir;
    bool csv = true;
    bool summary = true;
};

struct Scenario {
    std::string name;
    std::string description;
    IntervalSystem system;
    std::variant<State, SamplerSpec> initial;
    SimConfig sim;  // `step` left unset; see dt / eps
    std::optional<double> dt;
    std::optional<double> eps;
    OutputSpec outputs;

    /// The explicit state, or `count` states drawn uniformly from the box.
    [[nodiscard]] std::vector<State> initial_states() const;
    /// Copy of `sim` with mode and step resolved.
    [[nodiscard]] SimConfig config_for(SimMode mode) const;
};

Scenario parse_scenario(const nlohmann::json& doc);
/// Reads and parses; JSON syntax errors are reported with line and column.
Scenario load_scenario(const std::filesystem::path& path);

/// System part of a scenario document, 1-based, for witnesses and reports.
nlohmann::json system_to_json(const IntervalSystem& system);

}  // namespace intcons
