#include "trivirus/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace trivirus {
namespace {

Json labelled_blocks(const SystemState& s) {
    Json out = Json::array();
    for (int k = 0; k < s.m; ++k) out.push_back(to_json(Vector(s.virus(k))));
    return out;
}

void append_double(std::string& out, double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    out += buffer;
}

} // namespace

Json json_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
}

double number_from_json(const Json& value) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw Error(ErrorCode::SchemaError, "expected a number");
}

std::string state_label(int index, int n) {
    return "x" + std::to_string(index / n + 1) + "_" + std::to_string(index % n + 1);
}

Json to_json(const Error& error) {
    return {{"code", std::string(to_string(error.code()))}, {"message", error.what()}};
}

Json to_json(const EquilibriumDescriptor& d) {
    Json out{{"kind", to_string(d.kind)}};
    if (d.kind == EquilibriumKind::Boundary) out["virus"] = d.virus + 1;
    out["point"] = labelled_blocks(d.base_point);
    if (d.generator.size() > 0) out["generator"] = to_json(d.generator);
    if (!d.weights.empty()) out["weights"] = d.weights;
    out["residual"] = json_number(d.residual);
    return out;
}

Json to_json(const DfeReport& r) {
    Json abscissas = Json::array();
    for (double s : r.abscissas) abscissas.push_back(json_number(s));
    return {{"abscissas", abscissas}, {"verdict", to_string(r.verdict)}, {"tol", r.tol}};
}

Json to_json(const BoundaryVerdict& v) {
    Json rho = Json::object();
    for (std::size_t i = 0; i < 2; ++i) rho[std::to_string(v.competitors[i] + 1)] = json_number(v.rho_values[i]);
    return {{"virus", v.virus + 1},         {"endemic", to_json(v.endemic)}, {"rho", rho},
            {"verdict", to_string(v.verdict)}, {"tol", v.tol}};
}

Json to_json(const LineVerdict& v, const LineConstruction& construction) {
    Json reduced = Json::array();
    for (double s : v.reduced_abscissas) reduced.push_back(json_number(s));
    return {{"z", to_json(construction.z)},
            {"C", to_json(construction.c)},
            {"abscissa", json_number(v.abscissa)},
            {"rho", json_number(v.rho)},
            {"verdict", to_string(v.verdict)},
            {"reduced_abscissas", reduced},
            {"tol", v.tol}};
}

Json to_json(const LyapunovCertificate& c) {
    Json spectrum = Json::array();
    for (double s : c.q_bar_spectrum) spectrum.push_back(json_number(s));
    return {{"x_tilde", to_json(c.x_tilde)},
            {"u_tilde", to_json(c.u_tilde)},
            {"p", to_json(c.p)},
            {"q_bar_spectrum", spectrum},
            {"lambda2", json_number(c.lambda2)},
            {"p_max", json_number(c.p_max)},
            {"p_min", json_number(c.p_min)},
            {"lambda_bar", json_number(c.lambda_bar)},
            {"tol", c.tol}};
}

Json to_json(const ConsistencyVerdict& v, const SignedGraph& graph, int n) {
    Json out{{"consistent", v.consistent}, {"nodes", graph.node_count}, {"edges", graph.edges.size()}};
    if (!v.consistent) {
        Json labels = Json::array();
        for (int node : v.witness_cycle) labels.push_back(state_label(node, n));
        out["witness_cycle"] = v.witness_cycle;
        out["witness_labels"] = labels;
        out["witness_sign"] = cycle_sign(graph, v.witness_cycle);
    } else {
        out["gauge"] = v.gauge;
        out["gauge_verified"] = gauge_balances(graph, v.gauge);
    }
    return out;
}

Json to_json(const ConvergenceReport& r) {
    Json out{{"target", to_json(r.target)},
             {"final_distance", json_number(r.final_distance)},
             {"fitted_rate", json_number(r.fitted_rate)},
             {"fitted_amplitude", json_number(r.fitted_amplitude)},
             {"converged", r.converged},
             {"tol", r.tol}};
    if (!std::isnan(r.beta1)) out["beta1"] = r.beta1;
    if (!r.alpha.empty()) out["alpha"] = r.alpha;
    return out;
}

Json trajectory_summary(const Trajectory& t, const IntegratorOptions& options) {
    Json out{{"samples", t.size()},
             {"terminated_reason", to_string(t.terminated_reason)},
             {"domain_violation_max", json_number(t.domain_violation_max)},
             {"invariance_tol", options.invariance_tol},
             {"rel_tol", options.rel_tol},
             {"abs_tol", options.abs_tol},
             {"accepted_steps", t.accepted_steps},
             {"rejected_steps", t.rejected_steps},
             {"domain_rejections", t.domain_rejections},
             {"clamp_events", t.clamp_events}};
    if (!t.empty()) {
        out["t_final"] = t.times.back();
        out["final_state"] = labelled_blocks(t.final_state());
    }
    return out;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string out = "t";
    for (int i = 0; i < t.n * t.m; ++i) out += "," + state_label(i, t.n);
    out += '\n';
    for (std::size_t s = 0; s < t.size(); ++s) {
        append_double(out, t.times[s]);
        const Vector& x = t.states[s];
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            out += ',';
            append_double(out, x(i));
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into " + path.string());
    }
}

} // namespace trivirus
