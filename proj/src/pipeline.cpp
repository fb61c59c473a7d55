#include "trivirus/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "trivirus/examples.hpp"

namespace trivirus {
namespace {

namespace fs = std::filesystem;

// Errors meaning "this analysis does not apply to the system"; they are
// reported alongside successful analyses rather than aborting the run.
bool not_applicable(ErrorCode code) {
    switch (code) {
    case ErrorCode::SubThresholdSystem:
    case ErrorCode::NotIrreducible:
    case ErrorCode::ConstructionMismatch:
    case ErrorCode::EigvecMismatch:
    case ErrorCode::UnsupportedVirusCount: return true;
    default: return false;
    }
}

template <class Body>
Json guarded(Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        if (!not_applicable(e.code())) throw;
        return Json{{"error", to_json(e)}};
    }
}

Json software() { return {{"name", kSoftwareName}, {"version", kSoftwareVersion}}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

EquilibriumDescriptor boundary_descriptor(const MultiVirusSystem& system, const BoundaryVerdict& v) {
    EquilibriumDescriptor d;
    d.kind = EquilibriumKind::Boundary;
    d.virus = v.virus;
    d.base_point = SystemState::zeros(system.node_count(), system.virus_count());
    d.base_point.virus(v.virus) = v.endemic;
    d.residual = equilibrium_residual(system, d.base_point);
    return d;
}

int report_error(std::ostream& err, const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
}

template <class Body>
int run_command(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        return report_error(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

struct SimulationFiles {
    fs::path report;
    fs::path csv;
    std::string report_text;
    std::string csv_text;
    bool converged = false;
};

SimulationFiles simulate_to_files(const Scenario& scenario, const fs::path& out_dir, const std::string& stem) {
    const auto start = std::chrono::steady_clock::now();
    const SimulationOutcome outcome = run_simulation(scenario);
    SimulationFiles files;
    files.csv = out_dir / (stem + ".trajectory.csv");
    files.report = out_dir / (stem + ".report.json");
    files.csv_text = trajectory_csv(outcome.trajectory);
    files.report_text =
        simulation_report(scenario, outcome, seconds_since(start), files.csv.filename().string()).dump(2) + "\n";
    files.converged = outcome.convergence.converged;
    return files;
}

void write_simulation_files(const SimulationFiles& files) {
    write_file_atomic(files.csv, files.csv_text);
    write_file_atomic(files.report, files.report_text);
}

} // namespace

AnalysisOutcome run_analyses(const MultiVirusSystem& system, const Scenario& scenario, double tol) {
    AnalysisOutcome outcome;
    Json& json = outcome.json;
    const bool tri = system.virus_count() == 3;
    const Error not_tri(ErrorCode::UnsupportedVirusCount, "analysis needs exactly three viruses");

    if (scenario.requests(Analysis::Dfe)) {
        outcome.dfe = dfe_report(system, tol);
        json["dfe"] = to_json(*outcome.dfe);
    }

    if (scenario.requests(Analysis::Boundary)) {
        if (!tri) {
            json["boundary"] = {{"error", to_json(not_tri)}};
        } else {
            json["boundary"] = Json::array();
            for (int k = 0; k < 3; ++k) {
                json["boundary"].push_back(guarded([&] {
                    outcome.boundary.push_back(boundary_stability(system, k, tol));
                    Json entry = to_json(outcome.boundary.back());
                    entry["residual"] = boundary_descriptor(system, outcome.boundary.back()).residual;
                    return entry;
                }));
                if (json["boundary"].back().contains("error")) json["boundary"].back()["virus"] = k + 1;
            }
        }
    }

    if (scenario.requests(Analysis::Line)) {
        json["line"] = guarded([&] {
            if (!tri) throw not_tri;
            LineConstruction construction =
                scenario.line_c
                    ? construct_line_system(system.infection(0), system.infection(2), *scenario.line_c).second
                    : line_construction_of(system);
            const LineVerdict verdict = line_stability(system, construction, tol);
            Json entry = to_json(verdict, construction);
            entry["residual"] = line_descriptor(system, construction).residual;
            outcome.line = std::move(construction);
            outcome.line_verdict = verdict;
            return entry;
        });
    }

    if (scenario.requests(Analysis::Plane)) {
        json["plane"] = guarded([&] {
            if (!tri) throw not_tri;
            const bool identical = check_identical_viruses(system);
            if (scenario.identical.value_or(false) && !identical) {
                throw Error(ErrorCode::ConstructionMismatch, "scenario declares identical viruses but they differ");
            }
            Json entry{{"identical", identical}};
            if (identical) {
                outcome.plane = lyapunov_certificate(system.healing(0), system.infection(0), tol);
                entry["certificate"] = to_json(*outcome.plane);
                entry["residual"] =
                    plane_descriptor(system, outcome.plane->x_tilde, std::vector<double>(3, 1.0 / 3.0)).residual;
            }
            return entry;
        });
    }

    if (scenario.requests(Analysis::Monotonicity)) {
        const SignedGraph graph = signed_jacobian_graph(system);
        json["monotonicity"] = to_json(is_consistent(graph), graph, system.node_count());
    }
    return outcome;
}

EquilibriumDescriptor select_target(const MultiVirusSystem& system, const AnalysisOutcome& outcome,
                                    const SystemState& final_state) {
    if (outcome.line_verdict && outcome.line_verdict->verdict == LineStability::LocallyExponentiallyAttractive) {
        return line_descriptor(system, *outcome.line);
    }
    std::optional<EquilibriumDescriptor> best;
    double best_distance = 0.0;
    for (const auto& v : outcome.boundary) {
        if (v.verdict != BoundaryStability::LocallyExponentiallyStable) continue;
        auto d = boundary_descriptor(system, v);
        const double dist = distance_to_target(d, final_state);
        if (!best || dist < best_distance) {
            best = std::move(d);
            best_distance = dist;
        }
    }
    if (best) return *best;
    if (outcome.plane) {
        const auto projection = plane_projection(outcome.plane->x_tilde, final_state);
        return plane_descriptor(system, outcome.plane->x_tilde, projection.alpha);
    }
    EquilibriumDescriptor dfe;
    dfe.kind = EquilibriumKind::DFE;
    dfe.base_point = SystemState::zeros(system.node_count(), system.virus_count());
    return dfe;
}

SimulationOutcome run_simulation(const Scenario& scenario, double tol) {
    const MultiVirusSystem system = scenario.system();
    const SystemState x0 = scenario.initial_condition();
    SimulationOutcome out;
    out.trajectory = integrate(system, x0, scenario.t_end, scenario.integrator);
    if (out.trajectory.terminated_reason == Termination::StepFailure) {
        throw Error(ErrorCode::StepFailure, "step size collapsed at t = " + std::to_string(out.trajectory.times.back()));
    }
    out.analyses = run_analyses(system, scenario, tol);
    const auto target = select_target(system, out.analyses, out.trajectory.final_state());
    out.convergence = detect_convergence(out.trajectory, target, scenario.convergence_tol);
    return out;
}

Json analysis_report(const Scenario& scenario, double tol) {
    const auto start = std::chrono::steady_clock::now();
    const MultiVirusSystem system = scenario.system();
    Json report{{"software", software()}, {"command", "analyze"}, {"scenario", scenario_to_json(scenario)}};
    report["analyses"] = run_analyses(system, scenario, tol).json;
    report["duration_seconds"] = seconds_since(start);
    return report;
}

Json simulation_report(const Scenario& scenario, const SimulationOutcome& outcome, double duration_seconds,
                       const std::string& csv_name) {
    Json report{{"software", software()}, {"command", "simulate"}, {"scenario", scenario_to_json(scenario)}};
    report["analyses"] = outcome.analyses.json;
    Json sim = trajectory_summary(outcome.trajectory, scenario.integrator);
    sim["t_end"] = scenario.t_end;
    if (scenario.seed && !scenario.initial_state) sim["seed"] = *scenario.seed;
    sim["trajectory_csv"] = csv_name;
    report["simulation"] = sim;
    report["convergence"] = to_json(outcome.convergence);
    report["duration_seconds"] = duration_seconds;
    return report;
}

Scenario example_scenario(int example, std::uint64_t seed) {
    Scenario s = scenario_for(example_system(example), "example" + std::to_string(example));
    s.seed = seed;
    return s;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::IoError:
    case ErrorCode::NonPositiveHealingRate:
    case ErrorCode::NegativeInfectionRate:
    case ErrorCode::NegativeEntry:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ParameterOutOfRange:
    case ErrorCode::InitialStateOutsideDomain:
    case ErrorCode::EmptyTrajectory:
    case ErrorCode::UnsupportedVirusCount: return 2;
    default: return 3;
    }
}

fs::path default_output_dir() {
    const char* env = std::getenv("TRIVIRUS_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        const Scenario scenario = load_scenario(args.scenario);
        const std::string text = analysis_report(scenario, args.tol).dump(2) + "\n";
        if (args.out) {
            write_file_atomic(*args.out, text);
            out << args.out->string() << '\n';
        } else {
            out << text;
        }
        return 0;
    });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        Scenario scenario = load_scenario(args.scenario);
        if (args.seed) {
            scenario.seed = *args.seed;
            scenario.initial_state.reset();
        }
        if (args.t_end) scenario.t_end = *args.t_end;
        const auto files =
            simulate_to_files(scenario, args.out_dir.value_or(default_output_dir()), args.scenario.stem().string());
        write_simulation_files(files);
        out << files.csv.string() << '\n' << files.report.string() << '\n';
        out << "converged: " << (files.converged ? "true" : "false") << '\n';
        return 0;
    });
}

int cmd_example(const ExampleArgs& args, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        const Scenario scenario = example_scenario(args.example, args.seed);
        const fs::path dir = args.out_dir.value_or(default_output_dir());
        const std::string stem = "example" + std::to_string(args.example);
        const auto files = simulate_to_files(scenario, dir, stem);
        const fs::path scenario_path = dir / (stem + ".scenario.json");
        write_file_atomic(scenario_path, scenario_to_json(scenario).dump(2) + "\n");
        write_simulation_files(files);
        out << scenario_path.string() << '\n' << files.csv.string() << '\n' << files.report.string() << '\n';
        out << "converged: " << (files.converged ? "true" : "false") << '\n';
        return 0;
    });
}

int cmd_monotonicity(const fs::path& scenario_path, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        const Scenario scenario = load_scenario(scenario_path);
        const MultiVirusSystem system = scenario.system();
        const SignedGraph graph = signed_jacobian_graph(system);
        Json report{{"software", software()},
                    {"command", "monotonicity"},
                    {"monotonicity", to_json(is_consistent(graph), graph, system.node_count())}};
        out << report.dump(2) << '\n';
        return 0;
    });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        std::error_code ec;
        if (!fs::is_directory(args.dir, ec)) throw Error(ErrorCode::IoError, args.dir.string() + " is not a directory");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(args.dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        const fs::path dir = args.out_dir.value_or(default_output_dir());

        std::vector<int> codes(files.size(), 0);
        std::vector<std::string> messages(files.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < files.size(); i = next++) {
                std::ostringstream log;
                codes[i] = run_command(log, [&] {
                    const Scenario scenario = load_scenario(files[i]);
                    const std::string stem = files[i].stem().string();
                    if (scenario.seed || scenario.initial_state) {
                        write_simulation_files(simulate_to_files(scenario, dir, stem));
                    } else {
                        write_file_atomic(dir / (stem + ".analysis.json"), analysis_report(scenario).dump(2) + "\n");
                    }
                    return 0;
                });
                messages[i] = log.str();
            }
        };
        unsigned threads = args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        int worst = 0;
        for (std::size_t i = 0; i < files.size(); ++i) {
            out << files[i].filename().string() << ": exit " << codes[i] << '\n';
            if (!messages[i].empty()) err << files[i].filename().string() << ": " << messages[i];
            worst = std::max(worst, codes[i]);
        }
        return worst;
    });
}

} // namespace trivirus
