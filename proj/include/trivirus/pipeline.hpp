#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trivirus/report.hpp"

namespace trivirus {

/// Typed results behind an analysis report. A failed analysis leaves its
/// slot empty and records the error in `json`.
struct AnalysisOutcome {
    Json json = Json::object();
    std::optional<DfeReport> dfe;
    std::vector<BoundaryVerdict> boundary;
    std::optional<LineConstruction> line;
    std::optional<LineVerdict> line_verdict;
    std::optional<LyapunovCertificate> plane;
};

/// Runs the scenario's requested analyses. Errors that mean an analysis does
/// not apply (sub-threshold virus, reducible layer, not a line system, m != 3)
/// are recorded; solver failures propagate.
AnalysisOutcome run_analyses(const MultiVirusSystem& system, const Scenario& scenario, double tol = kVerdictTol);

/// Convergence target for a run ending at final_state, by preference:
/// attractive line, stable boundary (closest one if several), plane of
/// identical viruses, DFE.
EquilibriumDescriptor select_target(const MultiVirusSystem& system, const AnalysisOutcome& outcome,
                                    const SystemState& final_state);

struct SimulationOutcome {
    Trajectory trajectory;
    ConvergenceReport convergence;
    AnalysisOutcome analyses;
};

/// Errors: everything integrate() raises, SchemaError without an initial
/// condition, StepFailure when the integrator gave up.
SimulationOutcome run_simulation(const Scenario& scenario, double tol = kVerdictTol);

/// Full report documents, including the scenario echo, software version and
/// wall-clock duration.
Json analysis_report(const Scenario& scenario, double tol = kVerdictTol);
Json simulation_report(const Scenario& scenario, const SimulationOutcome& outcome, double duration_seconds,
                       const std::string& csv_name);

Scenario example_scenario(int example, std::uint64_t seed);

/// 0 success, 2 schema or input error, 3 numerical failure.
int exit_code_for(ErrorCode code);

/// Output directory when none is given: $TRIVIRUS_OUT_DIR, else ".".
std::filesystem::path default_output_dir();

struct AnalyzeArgs {
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> out;
    double tol = kVerdictTol;
};

struct SimulateArgs {
    std::filesystem::path scenario;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
    std::optional<std::filesystem::path> out_dir;
};

struct ExampleArgs {
    int example = 1;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> out_dir;
};

struct SweepArgs {
    std::filesystem::path dir;
    std::optional<std::filesystem::path> out_dir;
    unsigned threads = 0;
};

/// Command bodies shared by the executable and the tests. Each returns the
/// process exit code and reports diagnostics on `err`.
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_example(const ExampleArgs& args, std::ostream& out, std::ostream& err);
int cmd_monotonicity(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

} // namespace trivirus
