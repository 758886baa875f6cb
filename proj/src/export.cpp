#include "intcons/export.hpp"

#include <cmath>
#include <cstdio>

#include "intcons/scenario.hpp"

namespace intcons {

using nlohmann::json;

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const std::size_t n = trajectory.empty() ? 0 : trajectory.states.front().size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ',' << csv_field("x_" + std::to_string(i));
    out << ",H,h,V,diameter\r\n";
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        out << format_real(trajectory.times[k]);
        for (double v : trajectory.states[k]) out << ',' << format_real(v);
        const auto& d = trajectory.diagnostics[k];
        out << ',' << format_real(d.H) << ',' << format_real(d.h) << ',' << format_real(d.V) << ','
            << format_real(d.diameter) << "\r\n";
    }
}

json to_json(const IntervalSummary& s) {
    json j{{"p_star", s.p_star},
           {"q_star", s.q_star},
           {"p_under", s.p_under},
           {"q_over", s.q_over},
           {"has_intersection", s.has_intersection},
           {"pairwise_disjoint", s.pairwise_disjoint}};
    if (s.has_intersection) {
        j["intersection"] = {s.p_star, s.q_star};
    }
    return j;
}

json to_json(const EquilibriumReport& r) {
    json status = json::array();
    for (auto s : r.per_node_status) status.push_back(to_string(s));
    json jac;
    if (r.jacobian) {
        const auto& m = *r.jacobian;
        json data = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
        }
        jac = {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
    } else {
        jac = "undefined (boundary)";
    }
    return {{"point", r.point},
            {"residual", r.residual},
            {"classification", to_string(r.classification)},
            {"per_node_status", std::move(status)},
            {"jacobian", std::move(jac)},
            {"stable", to_string(r.stable)}};
}

json to_json(const PropertyVerdict& v) {
    json j{{"name", v.name},
           {"passed", v.passed()},
           {"outcome", to_string(v.outcome)},
           // JSON has no infinity; a non-finite violation means the check
           // could not be evaluated and is emitted as null.
           {"worst_violation", std::isfinite(v.worst_violation) ? json(v.worst_violation) : json(nullptr)},
           {"tolerance", v.tolerance}};
    if (v.seed) j["seed"] = *v.seed;
    if (!v.detail.empty()) j["detail"] = v.detail;
    if (v.witness) {
        json w{{"x0", v.witness->x0}, {"time", v.witness->time}};
        if (v.witness->system) w["system"] = system_to_json(*v.witness->system);
        j["witness"] = std::move(w);
    }
    return j;
}

std::string verdict_line(const SuiteVerdict& sv) {
    json j = to_json(sv.verdict);
    j["suite"] = sv.suite;
    j["index"] = sv.index;
    return j.dump();
}

}  // namespace intcons
