#include "trivirus/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace trivirus {
namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::SchemaError, where + ": " + what);
}

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) schema_error(where, "expected an object");
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) schema_error(where, "unknown key '" + item.key() + "'");
    }
}

double number(const Json& v, const std::string& where) {
    if (!v.is_number()) schema_error(where, "expected a number");
    return v.get<double>();
}

int integer(const Json& v, const std::string& where) {
    if (!v.is_number_integer()) schema_error(where, "expected an integer");
    return v.get<int>();
}

Vector vector_of(const Json& v, int length, const std::string& where) {
    if (!v.is_array()) schema_error(where, "expected a list of numbers");
    if (static_cast<int>(v.size()) != length) {
        schema_error(where, "expected " + std::to_string(length) + " entries, got " + std::to_string(v.size()));
    }
    Vector out(length);
    for (int i = 0; i < length; ++i) out(i) = number(v[static_cast<std::size_t>(i)], where);
    return out;
}

// Nested rows, or a flat row-major list of n * n numbers.
Matrix matrix_of(const Json& v, int n, const std::string& where) {
    if (!v.is_array()) schema_error(where, "expected a matrix");
    Matrix out(n, n);
    if (static_cast<int>(v.size()) == n * n && (v.empty() || v[0].is_number())) {
        for (int i = 0; i < n * n; ++i) out(i / n, i % n) = number(v[static_cast<std::size_t>(i)], where);
        return out;
    }
    if (static_cast<int>(v.size()) != n) schema_error(where, "expected " + std::to_string(n) + " rows");
    for (int i = 0; i < n; ++i) {
        out.row(i) = vector_of(v[static_cast<std::size_t>(i)], n, where + "[" + std::to_string(i) + "]").transpose();
    }
    return out;
}

const std::vector<std::pair<Analysis, std::string>>& analysis_names() {
    static const std::vector<std::pair<Analysis, std::string>> names{
        {Analysis::Dfe, "dfe"},
        {Analysis::Boundary, "boundary"},
        {Analysis::Line, "line"},
        {Analysis::Plane, "plane"},
        {Analysis::Monotonicity, "monotonicity"},
    };
    return names;
}

} // namespace

std::string to_string(Analysis a) {
    for (const auto& [value, name] : analysis_names()) {
        if (value == a) return name;
    }
    return "unknown";
}

bool Scenario::requests(Analysis a) const { return std::find(analyses.begin(), analyses.end(), a) != analyses.end(); }

MultiVirusSystem Scenario::system() const { return build_system(healing, infection); }

SystemState Scenario::initial_condition() const {
    if (initial_state) return SystemState::from_blocks(*initial_state);
    if (seed) return random_initial_condition(n, m, *seed);
    throw Error(ErrorCode::SchemaError, "scenario has neither an initial state nor a seed");
}

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const Matrix& a) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) out.push_back(to_json(Vector(a.row(i).transpose())));
    return out;
}

Scenario parse_scenario(const Json& doc) {
    check_keys(doc, "scenario",
               {"name", "n", "m", "D", "B", "initial_condition", "t_end", "integrator", "convergence_tol", "analyses",
                "line", "plane"});
    for (const char* key : {"n", "m", "D", "B"}) {
        if (!doc.contains(key)) schema_error("scenario", std::string("missing required key '") + key + "'");
    }
    Scenario s;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) schema_error("name", "expected a string");
        s.name = doc["name"].get<std::string>();
    }
    s.n = integer(doc["n"], "n");
    s.m = integer(doc["m"], "m");
    if (s.n < 2) schema_error("n", "need at least two nodes");
    if (s.m < 1) schema_error("m", "need at least one virus");

    const Json& d = doc["D"];
    const Json& b = doc["B"];
    if (!d.is_array() || static_cast<int>(d.size()) != s.m) schema_error("D", "expected m healing vectors");
    if (!b.is_array() || static_cast<int>(b.size()) != s.m) schema_error("B", "expected m infection matrices");
    for (int k = 0; k < s.m; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        s.healing.push_back(vector_of(d[idx], s.n, "D[" + std::to_string(k) + "]"));
        s.infection.push_back(matrix_of(b[idx], s.n, "B[" + std::to_string(k) + "]"));
    }

    if (doc.contains("initial_condition")) {
        const Json& ic = doc["initial_condition"];
        check_keys(ic, "initial_condition", {"seed", "state"});
        if (ic.contains("seed")) {
            if (!ic["seed"].is_number_unsigned() && !(ic["seed"].is_number_integer() && ic["seed"].get<long long>() >= 0)) {
                schema_error("initial_condition.seed", "expected a nonnegative integer");
            }
            s.seed = ic["seed"].get<std::uint64_t>();
        }
        if (ic.contains("state")) {
            const Json& st = ic["state"];
            if (!st.is_array() || static_cast<int>(st.size()) != s.m) {
                schema_error("initial_condition.state", "expected m vectors");
            }
            std::vector<Vector> blocks;
            for (int k = 0; k < s.m; ++k) {
                blocks.push_back(vector_of(st[static_cast<std::size_t>(k)], s.n, "initial_condition.state"));
            }
            s.initial_state = std::move(blocks);
        }
    }
    if (doc.contains("t_end")) s.t_end = number(doc["t_end"], "t_end");
    if (doc.contains("convergence_tol")) s.convergence_tol = number(doc["convergence_tol"], "convergence_tol");

    if (doc.contains("integrator")) {
        const Json& in = doc["integrator"];
        check_keys(in, "integrator",
                   {"rel_tol", "abs_tol", "max_step", "invariance_tol", "max_samples", "steady_state_tol"});
        auto& o = s.integrator;
        if (in.contains("rel_tol")) o.rel_tol = number(in["rel_tol"], "integrator.rel_tol");
        if (in.contains("abs_tol")) o.abs_tol = number(in["abs_tol"], "integrator.abs_tol");
        if (in.contains("max_step")) o.max_step = number(in["max_step"], "integrator.max_step");
        if (in.contains("invariance_tol")) o.invariance_tol = number(in["invariance_tol"], "integrator.invariance_tol");
        if (in.contains("steady_state_tol")) {
            o.steady_state_tol = number(in["steady_state_tol"], "integrator.steady_state_tol");
        }
        if (in.contains("max_samples")) {
            const int samples = integer(in["max_samples"], "integrator.max_samples");
            if (samples < 2) schema_error("integrator.max_samples", "need at least two samples");
            o.max_samples = static_cast<std::size_t>(samples);
        }
    }

    if (doc.contains("analyses")) {
        const Json& list = doc["analyses"];
        if (!list.is_array()) schema_error("analyses", "expected a list of names");
        s.analyses.clear();
        for (const auto& item : list) {
            if (!item.is_string()) schema_error("analyses", "expected a list of names");
            const auto name = item.get<std::string>();
            const auto& names = analysis_names();
            const auto it = std::find_if(names.begin(), names.end(), [&](const auto& p) { return p.second == name; });
            if (it == names.end()) schema_error("analyses", "unknown analysis '" + name + "'");
            if (!s.requests(it->first)) s.analyses.push_back(it->first);
        }
    }
    if (doc.contains("line")) {
        check_keys(doc["line"], "line", {"C"});
        if (doc["line"].contains("C")) s.line_c = matrix_of(doc["line"]["C"], s.n, "line.C");
    }
    if (doc.contains("plane")) {
        check_keys(doc["plane"], "plane", {"identical"});
        if (doc["plane"].contains("identical")) {
            if (!doc["plane"]["identical"].is_boolean()) schema_error("plane.identical", "expected true or false");
            s.identical = doc["plane"]["identical"].get<bool>();
        }
    }
    return s;
}

Scenario parse_scenario_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, std::string("malformed scenario: ") + e.what());
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

Json scenario_to_json(const Scenario& s) {
    Json doc;
    if (!s.name.empty()) doc["name"] = s.name;
    doc["n"] = s.n;
    doc["m"] = s.m;
    doc["D"] = Json::array();
    doc["B"] = Json::array();
    for (int k = 0; k < s.m; ++k) {
        doc["D"].push_back(to_json(s.healing[static_cast<std::size_t>(k)]));
        doc["B"].push_back(to_json(s.infection[static_cast<std::size_t>(k)]));
    }
    if (s.seed || s.initial_state) {
        Json ic = Json::object();
        if (s.seed) ic["seed"] = *s.seed;
        if (s.initial_state) {
            ic["state"] = Json::array();
            for (const auto& block : *s.initial_state) ic["state"].push_back(to_json(block));
        }
        doc["initial_condition"] = ic;
    }
    doc["t_end"] = s.t_end;
    const auto& o = s.integrator;
    doc["integrator"] = {{"rel_tol", o.rel_tol},
                         {"abs_tol", o.abs_tol},
                         {"max_step", o.max_step},
                         {"invariance_tol", o.invariance_tol},
                         {"max_samples", o.max_samples},
                         {"steady_state_tol", o.steady_state_tol}};
    doc["convergence_tol"] = s.convergence_tol;
    doc["analyses"] = Json::array();
    for (Analysis a : s.analyses) doc["analyses"].push_back(to_string(a));
    if (s.line_c) doc["line"] = {{"C", to_json(*s.line_c)}};
    if (s.identical) doc["plane"] = {{"identical", *s.identical}};
    return doc;
}

Scenario scenario_for(const MultiVirusSystem& system, std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.n = system.node_count();
    s.m = system.virus_count();
    s.healing = system.healing();
    s.infection = system.infection();
    return s;
}

} // namespace trivirus
