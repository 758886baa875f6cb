#include "intcons/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>
#include <string_view>

#include "intcons/suites.hpp"

namespace intcons {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ScenarioError(path + "/" + key, "unknown key");
        }
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ScenarioError(path + "/" + key, "missing required field");
    }
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ScenarioError(path, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ScenarioError(path, "expected a finite number");
    }
    return d;
}

double positive(const json& v, const std::string& path) {
    const double d = number(v, path);
    if (!(d > 0.0)) {
        throw ScenarioError(path, "expected a positive number");
    }
    return d;
}

std::size_t count(const json& v, const std::string& path, std::size_t min = 1) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < static_cast<std::int64_t>(min)) {
        throw ScenarioError(path, "expected an integer >= " + std::to_string(min));
    }
    return v.get<std::size_t>();
}

bool flag(const json& v, const std::string& path) {
    if (!v.is_boolean()) {
        throw ScenarioError(path, "expected true or false");
    }
    return v.get<bool>();
}

const json& object(const json& v, const std::string& path) {
    if (!v.is_object()) {
        throw ScenarioError(path, "expected an object");
    }
    return v;
}

const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) {
        throw ScenarioError(path, "expected an array");
    }
    return v;
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ScenarioError(path, "expected a string");
    }
    return v.get<std::string>();
}

IntervalSystem parse_system(const json& doc) {
    const std::size_t n = count(require(doc, "", "nodes"), "/nodes");

    std::vector<EdgeSpec> edges;
    const auto& raw_edges = array(require(doc, "", "edges"), "/edges");
    for (std::size_t k = 0; k < raw_edges.size(); ++k) {
        const std::string path = "/edges/" + std::to_string(k);
        const auto& e = object(raw_edges[k], path);
        reject_unknown(e, path, {"from", "to", "weight"});
        const std::size_t from = count(require(e, path, "from"), path + "/from");
        const std::size_t to = count(require(e, path, "to"), path + "/to");
        if (from > n || to > n) {
            throw ScenarioError(path, "node index outside 1.." + std::to_string(n));
        }
        edges.push_back({from - 1, to - 1, number(require(e, path, "weight"), path + "/weight")});
    }

    std::vector<Interval> intervals;
    const auto& raw_intervals = array(require(doc, "", "intervals"), "/intervals");
    for (std::size_t k = 0; k < raw_intervals.size(); ++k) {
        const std::string path = "/intervals/" + std::to_string(k);
        const auto& iv = object(raw_intervals[k], path);
        reject_unknown(iv, path, {"p", "q"});
        intervals.push_back({number(require(iv, path, "p"), path + "/p"), number(require(iv, path, "q"), path + "/q")});
    }

    try {
        return validate_system(n, edges, intervals);
    } catch (const ModelError& e) {
        const bool about_intervals = e.kind() == ModelError::Kind::InvertedInterval ||
                                     e.kind() == ModelError::Kind::CountMismatch ||
                                     e.kind() == ModelError::Kind::NonFiniteValue;
        throw ScenarioError(about_intervals ? "/intervals" : "/edges", e.what());
    }
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    object(doc, "");
    reject_unknown(doc, "", {"schema", "name", "description", "nodes", "edges", "intervals", "initial", "sim", "outputs"});
    const auto& schema = require(doc, "", "schema");
    if (!schema.is_number_integer() || schema.get<int>() != kScenarioSchema) {
        throw ScenarioError("/schema", "unsupported schema version (expected " + std::to_string(kScenarioSchema) + ")");
    }

    IntervalSystem system = parse_system(doc);
    const std::size_t n = system.size();

    std::variant<State, SamplerSpec> initial;
    const auto& init = require(doc, "", "initial");
    if (init.is_array()) {
        if (init.size() != n) {
            throw ScenarioError("/initial", "expected " + std::to_string(n) + " values");
        }
        State x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = number(init[i], "/initial/" + std::to_string(i));
        initial = std::move(x);
    } else if (init.is_object()) {
        reject_unknown(init, "/initial", {"seed", "count", "low", "high"});
        SamplerSpec s;
        const auto& seed = require(init, "/initial", "seed");
        if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
            throw ScenarioError("/initial/seed", "expected a non-negative integer");
        }
        s.seed = seed.get<std::uint64_t>();
        if (init.contains("count")) s.count = count(init["count"], "/initial/count");
        s.low = number(require(init, "/initial", "low"), "/initial/low");
        s.high = number(require(init, "/initial", "high"), "/initial/high");
        if (!(s.low <= s.high)) {
            throw ScenarioError("/initial", "low must not exceed high");
        }
        initial = s;
    } else {
        throw ScenarioError("/initial", "expected an array of values or a sampler object");
    }

    Scenario sc{"", "", std::move(system), std::move(initial), {}, std::nullopt, std::nullopt, {}};
    if (doc.contains("name")) sc.name = text(doc["name"], "/name");
    if (doc.contains("description")) sc.description = text(doc["description"], "/description");

    if (doc.contains("sim")) {
        const auto& sim = object(doc["sim"], "/sim");
        reject_unknown(sim, "/sim",
                       {"mode", "dt", "eps", "t_end", "max_steps", "record_every", "consensus_tol", "settle_tol"});
        if (sim.contains("mode")) {
            const std::string mode = text(sim["mode"], "/sim/mode");
            if (mode == "continuous") sc.sim.mode = SimMode::Continuous;
            else if (mode == "discrete") sc.sim.mode = SimMode::Discrete;
            else throw ScenarioError("/sim/mode", "expected \"continuous\" or \"discrete\"");
        }
        if (sim.contains("dt")) sc.dt = positive(sim["dt"], "/sim/dt");
        if (sim.contains("eps")) sc.eps = positive(sim["eps"], "/sim/eps");
        if (sim.contains("t_end")) sc.sim.t_end = positive(sim["t_end"], "/sim/t_end");
        if (sim.contains("max_steps")) sc.sim.max_steps = count(sim["max_steps"], "/sim/max_steps");
        if (sim.contains("record_every")) sc.sim.record_every = count(sim["record_every"], "/sim/record_every");
        if (sim.contains("consensus_tol")) sc.sim.consensus_tol = positive(sim["consensus_tol"], "/sim/consensus_tol");
        if (sim.contains("settle_tol")) sc.sim.settle_tol = positive(sim["settle_tol"], "/sim/settle_tol");
    }

    if (doc.contains("outputs")) {
        const auto& out = object(doc["outputs"], "/outputs");
        reject_unknown(out, "/outputs", {"dir", "csv", "summary"});
        if (out.contains("dir")) sc.outputs.dir = text(out["dir"], "/outputs/dir");
        if (out.contains("csv")) sc.outputs.csv = flag(out["csv"], "/outputs/csv");
        if (out.contains("summary")) sc.outputs.summary = flag(out["summary"], "/outputs/summary");
    }
    return sc;
}

std::vector<State> Scenario::initial_states() const {
    if (const auto* x = std::get_if<State>(&initial)) {
        return {*x};
    }
    const auto& s = std::get<SamplerSpec>(initial);
    std::vector<State> out;
    out.reserve(s.count);
    for (std::size_t k = 0; k < s.count; ++k) {
        Rng rng(instance_seed(s.seed, k));
        out.push_back(random_state(rng, system.size(), s.low, s.high));
    }
    return out;
}

SimConfig Scenario::config_for(SimMode mode) const {
    SimConfig c = sim;
    c.mode = mode;
    c.step = mode == SimMode::Continuous ? dt : eps;
    return c;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError("", "cannot open " + path.string());
    }
    const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line:column.
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
            if (content[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ScenarioError("", path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                    ": invalid JSON");
    }
    return parse_scenario(doc);
}

json system_to_json(const IntervalSystem& system) {
    json edges = json::array();
    for (const auto& e : system.network().edges()) {
        edges.push_back({{"from", e.source + 1}, {"to", e.target + 1}, {"weight", e.weight}});
    }
    json intervals = json::array();
    for (const auto& iv : system.intervals()) {
        intervals.push_back({{"p", iv.lower}, {"q", iv.upper}});
    }
    return {{"nodes", system.size()}, {"edges", std::move(edges)}, {"intervals", std::move(intervals)}};
}

}  // namespace intcons
