#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trivirus/model.hpp"
#include "trivirus/simulator.hpp"

namespace trivirus {

using Json = nlohmann::ordered_json;

enum class Analysis { Dfe, Boundary, Line, Plane, Monotonicity };

std::string to_string(Analysis a);

/// A system definition plus what to do with it. On disk this is a JSON
/// object:
///
///   n, m            integers
///   D               m vectors of length n (healing-rate diagonals)
///   B               m row-major n x n matrices
///   name            optional label
///   initial_condition  optional {"seed": N} or {"state": m vectors of length n}
///   t_end           optional, default 1e4
///   integrator      optional {rel_tol, abs_tol, max_step, invariance_tol,
///                   max_samples, steady_state_tol}
///   convergence_tol optional, default 1e-6
///   analyses        optional subset of "dfe" "boundary" "line" "plane"
///                   "monotonicity", default all
///   line            optional {"C": n x n matrix}
///   plane           optional {"identical": bool}
///
/// Unknown keys are schema errors.
struct Scenario {
    std::string name;
    int n = 0;
    int m = 0;
    std::vector<Vector> healing;
    std::vector<Matrix> infection;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<Vector>> initial_state;
    double t_end = 1e4;
    IntegratorOptions integrator;
    double convergence_tol = 1e-6;
    std::vector<Analysis> analyses{Analysis::Dfe, Analysis::Boundary, Analysis::Line, Analysis::Plane,
                                   Analysis::Monotonicity};
    std::optional<Matrix> line_c;
    std::optional<bool> identical;

    bool requests(Analysis a) const;
    /// Validated system; errors from build_system propagate.
    MultiVirusSystem system() const;
    /// Explicit state, else the seeded random draw. Throws SchemaError when
    /// neither is present.
    SystemState initial_condition() const;
};

/// Errors: SchemaError (missing or mistyped field, unknown key, bad shape).
Scenario parse_scenario(const Json& doc);
Scenario parse_scenario_text(const std::string& text);
/// Errors: IoError, SchemaError.
Scenario load_scenario(const std::filesystem::path& path);

Json scenario_to_json(const Scenario& scenario);

/// Scenario for an existing system with default options.
Scenario scenario_for(const MultiVirusSystem& system, std::string name = {});

Json to_json(const Vector& v);
Json to_json(const Matrix& a);

} // namespace trivirus
