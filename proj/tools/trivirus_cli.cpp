#include <iostream>

#include <CLI11.hpp>

#include "trivirus/pipeline.hpp"

int main(int argc, char** argv) {
    using namespace trivirus;
    CLI::App app{"Simulate and analyze competitive multi-virus networked SIS models"};
    app.set_version_flag("--version", std::string(kSoftwareVersion));
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* a = app.add_subcommand("analyze", "Run the scenario's analyses and write a report");
    a->add_option("scenario", analyze.scenario, "Scenario file")->required();
    a->add_option("--out", analyze.out, "Report file (default: standard output)");
    a->add_option("--tol", analyze.tol, "Verdict tolerance around spectral thresholds");

    SimulateArgs simulate;
    auto* s = app.add_subcommand("simulate", "Integrate the scenario and check convergence");
    s->add_option("scenario", simulate.scenario, "Scenario file")->required();
    s->add_option("--seed", simulate.seed, "Random initial condition seed (overrides the scenario)");
    s->add_option("--t-end", simulate.t_end, "Final time (overrides the scenario)");
    s->add_option("--out", simulate.out_dir, "Output directory (default: $TRIVIRUS_OUT_DIR or .)");

    ExampleArgs example;
    auto* e = app.add_subcommand("example", "Analyze and simulate built-in example 1-4");
    e->add_option("id", example.example, "Example number")->required();
    e->add_option("--seed", example.seed, "Random initial condition seed");
    e->add_option("--out", example.out_dir, "Output directory (default: $TRIVIRUS_OUT_DIR or .)");

    std::filesystem::path mono_scenario;
    auto* mono = app.add_subcommand("monotonicity", "Signed-graph consistency of the Jacobian sign pattern");
    mono->add_option("scenario", mono_scenario, "Scenario file")->required();

    SweepArgs sweep;
    auto* sw = app.add_subcommand("sweep", "Process every scenario (*.json) in a directory concurrently");
    sw->add_option("dir", sweep.dir, "Scenario directory")->required();
    sw->add_option("--out", sweep.out_dir, "Output directory (default: $TRIVIRUS_OUT_DIR or .)");
    sw->add_option("--threads", sweep.threads, "Worker threads (default: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    if (a->parsed()) return cmd_analyze(analyze, std::cout, std::cerr);
    if (s->parsed()) return cmd_simulate(simulate, std::cout, std::cerr);
    if (e->parsed()) return cmd_example(example, std::cout, std::cerr);
    if (mono->parsed()) return cmd_monotonicity(mono_scenario, std::cout, std::cerr);
    return cmd_sweep(sweep, std::cout, std::cerr);
}
