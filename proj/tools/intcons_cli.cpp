// intcons: simulate, analyze, and verify interval consensus scenarios.
//
// Exit codes: 0 success, 1 property failure or anomaly, 2 usage/input error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "intcons/equilibria.hpp"
#include "intcons/export.hpp"
#include "intcons/model.hpp"
#include "intcons/scenario.hpp"
#include "intcons/simulate.hpp"
#include "intcons/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace intcons;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

constexpr const char* kOutputEnv = "INTCONS_OUTPUT_DIR";

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path output_dir(const std::optional<std::string>& flag, const std::optional<std::string>& from_scenario) {
    fs::path dir;
    if (flag) {
        dir = *flag;
    } else if (from_scenario) {
        dir = *from_scenario;
    } else if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') {
        dir = env;
    } else {
        dir = ".";
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw InputError("cannot create output directory " + dir.string());
    }
    return dir;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
}

struct SimulateArgs {
    std::string scenario;
    std::optional<std::string> out;
    bool discrete = false;
    std::optional<double> dt, eps, t_end;
    std::optional<std::size_t> max_steps, record_every;
    bool no_timestamp = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const Scenario sc = load_scenario(args.scenario);
    const SimMode mode = args.discrete ? SimMode::Discrete : sc.sim.mode;
    SimConfig config = sc.config_for(mode);
    if (mode == SimMode::Continuous && args.dt) config.step = args.dt;
    if (mode == SimMode::Discrete && args.eps) config.step = args.eps;
    if (args.t_end) config.t_end = args.t_end;
    if (args.max_steps) config.max_steps = args.max_steps;
    if (args.record_every) config.record_every = *args.record_every;

    const fs::path dir = output_dir(args.out, sc.outputs.dir);
    const auto starts = sc.initial_states();
    const auto& summary = sc.system.summary();

    json runs = json::array();
    bool anomaly = false;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        Trajectory traj;
        try {
            traj = simulate(sc.system, starts[k], config);
        } catch (const SimConfigError& e) {
            throw InputError(e.what());
        }
        const auto consensus = detect_consensus(traj, summary, config.consensus_tol);
        anomaly = anomaly || consensus.anomaly;

        double h_min = traj.diagnostics.front().h, H_max = traj.diagnostics.front().H, diam_max = 0.0;
        for (const auto& d : traj.diagnostics) {
            h_min = std::min(h_min, d.h);
            H_max = std::max(H_max, d.H);
            diam_max = std::max(diam_max, d.diameter);
        }
        const auto& last = traj.diagnostics.back();
        json run{{"index", k + 1},
                 {"x0", starts[k]},
                 {"terminal_reason", to_string(traj.terminal_reason)},
                 {"steps", traj.steps},
                 {"final_time", traj.times.back()},
                 {"final_state", traj.final_state()},
                 {"residual", residual(sc.system, traj.final_state())},
                 {"consensus", consensus.value ? json(*consensus.value) : json(nullptr)},
                 {"anomaly", consensus.anomaly},
                 {"diagnostics",
                  {{"H_max", H_max},
                   {"H_final", last.H},
                   {"h_min", h_min},
                   {"h_final", last.h},
                   {"V_final", last.V},
                   {"diameter_max", diam_max},
                   {"diameter_final", last.diameter},
                   {"informational", last.informational}}},
                 {"warnings", traj.warnings}};
        if (traj.terminal_reason == TerminalReason::Settled) {
            run["equilibrium"] = traj.final_state();
        }
        if (sc.outputs.csv) {
            const std::string name =
                starts.size() == 1 ? "trajectory.csv" : "trajectory_" + std::to_string(k + 1) + ".csv";
            std::ostringstream csv;
            write_trajectory_csv(csv, traj);
            write_file(dir / name, csv.str());
            run["csv"] = name;
        }
        for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';
        runs.push_back(std::move(run));
    }

    if (sc.outputs.summary) {
        json doc{{"scenario", sc.name},
                 {"mode", to_string(mode)},
                 {"step", config.step ? json(*config.step)
                                      : json(mode == SimMode::Continuous ? default_dt(sc.system.network())
                                                                         : default_eps(sc.system.network()))},
                 {"strongly_connected", sc.system.network().strongly_connected()},
                 {"interval_summary", to_json(summary)},
                 {"anomaly", anomaly},
                 {"runs", std::move(runs)}};
        if (!args.no_timestamp) doc["generated_at"] = utc_timestamp();
        write_file(dir / "summary.json", doc.dump(2) + "\n");
    }
    if (anomaly) {
        std::cerr << "anomaly: consensus value outside [p*, q*]\n";
        return kExitFailure;
    }
    return kExitOk;
}

struct AnalyzeArgs {
    std::string scenario;
    std::optional<std::string> out;
    std::size_t starts = 20;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    double boundary_tol = kDefaultBoundaryTol;
    bool no_timestamp = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
    const Scenario sc = load_scenario(args.scenario);
    const fs::path dir = output_dir(args.out, sc.outputs.dir);
    const auto& system = sc.system;
    const auto& s = system.summary();
    const bool sc_graph = system.network().strongly_connected();

    std::vector<State> starts = sc.initial_states();
    for (std::size_t k = 0; k < args.starts; ++k) {
        Rng rng(instance_seed(args.seed, k));
        starts.push_back(random_state(rng, system.size(), s.p_under - 5.0, s.q_over + 5.0));
    }
    SearchOptions opts;
    opts.tol = args.tol;
    opts.boundary_tol = args.boundary_tol;
    const auto found = find_equilibria(system, starts, opts);

    json eqs = json::array();
    bool in_hull = true;
    bool any_unconstrained = false;
    // Consensus points form a continuum in [p*, q*]; summarize them as one family.
    std::size_t family_count = 0;
    double family_min = 0.0, family_max = 0.0;
    std::set<std::string> family_stability;
    for (const auto& r : found.equilibria) {
        eqs.push_back(to_json(r));
        for (double e : r.point) in_hull = in_hull && e >= s.p_under - 1e-9 && e <= s.q_over + 1e-9;
        any_unconstrained = any_unconstrained || r.classification == EquilibriumClass::EquiUnconstrained;
        const auto [lo, hi] = std::minmax_element(r.point.begin(), r.point.end());
        if (*hi - *lo < 1e-6) {
            family_min = family_count == 0 ? *lo : std::min(family_min, *lo);
            family_max = family_count == 0 ? *hi : std::max(family_max, *hi);
            ++family_count;
            if (r.stable != Stability::Undefined) family_stability.insert(to_string(r.stable));
        }
    }

    const json unsupported = "unsupported (graph not strongly connected)";
    json guarantees{
        {"equilibria_within_hull", sc_graph ? json(in_hull) : unsupported},
        {"consensus_in_intersection", sc_graph && s.has_intersection ? json(true)
                                      : sc_graph                     ? json("not applicable (empty intersection)")
                                                                     : unsupported},
        {"no_equi_unconstrained", sc_graph && s.pairwise_disjoint ? json(!any_unconstrained)
                                  : sc_graph                      ? json("not applicable (intervals overlap)")
                                                                  : unsupported},
    };

    json doc{{"scenario", sc.name},
             {"strongly_connected", sc_graph},
             {"interval_summary", to_json(s)},
             {"starts", starts.size()},
             {"failed_starts", found.failed_starts},
             {"equilibria", std::move(eqs)},
             {"consensus_family", family_count == 0 ? json(nullptr)
                                                    : json{{"count", family_count},
                                                           {"min", family_min},
                                                           {"max", family_max},
                                                           {"stability", family_stability}}},
             {"guarantees", std::move(guarantees)}};
    if (!args.no_timestamp) doc["generated_at"] = utc_timestamp();
    write_file(dir / "report.json", doc.dump(2) + "\n");
    return kExitOk;
}

struct VerifyArgs {
    std::string suite;
    std::uint64_t seed = 42;
    std::size_t count = 20;
    std::optional<std::string> out;
};

int cmd_verify(const VerifyArgs& args) {
    std::vector<SuiteVerdict> verdicts;
    try {
        verdicts = run_suite(args.suite, args.seed, args.count);
    } catch (const UnknownSuite& e) {
        throw InputError(e.what());
    }
    fs::path file;
    if (args.out) {
        file = *args.out;
        if (file.has_parent_path()) fs::create_directories(file.parent_path());
    } else {
        file = output_dir(std::nullopt, std::nullopt) / (args.suite + ".jsonl");
    }
    std::string content;
    std::size_t passed = 0;
    for (const auto& v : verdicts) {
        content += verdict_line(v) + "\n";
        passed += v.verdict.passed() ? 1 : 0;
    }
    write_file(file, content);
    std::cout << args.suite << ": " << passed << "/" << verdicts.size() << " passed -> " << file.string() << '\n';
    return passed == verdicts.size() ? kExitOk : kExitFailure;
}

struct BatchArgs {
    std::vector<std::string> scenarios;
    std::optional<std::string> out;
    bool discrete = false;
    bool no_timestamp = false;
};

// Each scenario gets its own subdirectory named after the file stem.
int cmd_batch(const BatchArgs& args) {
    const fs::path root = output_dir(args.out, std::nullopt);
    int worst = kExitOk;
    for (const auto& path : args.scenarios) {
        SimulateArgs sim;
        sim.scenario = path;
        sim.out = (root / fs::path(path).stem()).string();
        sim.discrete = args.discrete;
        sim.no_timestamp = args.no_timestamp;
        int code = kExitOk;
        try {
            code = cmd_simulate(sim);
        } catch (const ScenarioError& e) {
            std::cerr << "error: " << e.what() << '\n';
            code = kExitInput;
        } catch (const InputError& e) {
            std::cerr << "error: " << path << ": " << e.what() << '\n';
            code = kExitInput;
        }
        std::cout << path << ": exit " << code << " -> " << *sim.out << '\n';
        worst = std::max(worst, code);
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval consensus simulation and analysis"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a scenario and write trajectory CSV + summary.json");
    simulate_cmd->add_option("scenario", sim.scenario, "Scenario JSON file")->required();
    simulate_cmd->add_option("-o,--out", sim.out, "Output directory (default: scenario outputs.dir, $INTCONS_OUTPUT_DIR, or .)");
    simulate_cmd->add_flag("--discrete", sim.discrete, "Use the discrete protocol (eps defaults to 0.9 / max in-weight sum)");
    simulate_cmd->add_option("--dt", sim.dt, "Continuous step size")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--eps", sim.eps, "Discrete step size")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--t-end", sim.t_end, "Continuous horizon")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--max-steps", sim.max_steps, "Discrete iteration cap")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--record-every", sim.record_every, "Record every k-th step")->check(CLI::PositiveNumber);
    simulate_cmd->add_flag("--no-timestamp", sim.no_timestamp, "Omit generated_at from summary.json");

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Multi-start equilibrium search; writes report.json");
    analyze_cmd->add_option("scenario", an.scenario, "Scenario JSON file")->required();
    analyze_cmd->add_option("-o,--out", an.out, "Output directory");
    analyze_cmd->add_option("--starts", an.starts, "Random starts in addition to the scenario's initial states");
    analyze_cmd->add_option("--seed", an.seed, "Seed for random starts");
    analyze_cmd->add_option("--tol", an.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--boundary-tol", an.boundary_tol, "Endpoint tolerance for classification")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_flag("--no-timestamp", an.no_timestamp, "Omit generated_at from report.json");

    VerifyArgs ver;
    auto* verify_cmd = app.add_subcommand("verify", "Run a property suite; writes JSON-lines verdicts");
    std::string suites_help = "One of:";
    for (auto name : suite_names()) suites_help += " " + std::string(name);
    verify_cmd->add_option("suite", ver.suite, suites_help)->required();
    verify_cmd->add_option("--seed", ver.seed, "Suite seed");
    verify_cmd->add_option("--count", ver.count, "Number of instances");
    verify_cmd->add_option("-o,--out", ver.out, "Verdict file (default: <output dir>/<suite>.jsonl)");

    BatchArgs batch;
    auto* batch_cmd = app.add_subcommand("batch", "Simulate several scenarios into <out>/<scenario name>/");
    batch_cmd->add_option("scenarios", batch.scenarios, "Scenario JSON files")->required();
    batch_cmd->add_option("-o,--out", batch.out, "Root output directory");
    batch_cmd->add_flag("--discrete", batch.discrete, "Use the discrete protocol for every scenario");
    batch_cmd->add_flag("--no-timestamp", batch.no_timestamp, "Omit generated_at from summaries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (simulate_cmd->parsed()) return cmd_simulate(sim);
        if (analyze_cmd->parsed()) return cmd_analyze(an);
        if (verify_cmd->parsed()) return cmd_verify(ver);
        if (batch_cmd->parsed()) return cmd_batch(batch);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInput;
}
