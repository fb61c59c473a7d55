#include "trivirus/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trivirus/spectral.hpp"

namespace trivirus {

std::string to_string(DfeVerdict v) {
    switch (v) {
    case DfeVerdict::GES: return "GES";
    case DfeVerdict::AsymptoticallyStableUnique: return "AsymptoticallyStableUnique";
    case DfeVerdict::NotUnique: return "NotUnique";
    }
    return "Unknown";
}

std::string to_string(BoundaryStability v) {
    switch (v) {
    case BoundaryStability::LocallyExponentiallyStable: return "LocallyExponentiallyStable";
    case BoundaryStability::Unstable: return "Unstable";
    case BoundaryStability::Marginal: return "Marginal";
    }
    return "Unknown";
}

std::string to_string(LineStability v) {
    switch (v) {
    case LineStability::LocallyExponentiallyAttractive: return "LocallyExponentiallyAttractive";
    case LineStability::Unstable: return "Unstable";
    case LineStability::Marginal: return "Marginal";
    }
    return "Unknown";
}

DfeReport dfe_report(const MultiVirusSystem& system, double tol) {
    DfeReport report;
    report.tol = tol;
    bool any_positive = false;
    bool all_negative = true;
    for (int k = 0; k < system.virus_count(); ++k) {
        const Matrix growth = system.infection(k) - Matrix(system.healing(k).asDiagonal());
        const double s = spectral_abscissa_metzler(growth);
        report.abscissas.push_back(s);
        any_positive = any_positive || s > tol;
        all_negative = all_negative && s < -tol;
    }
    report.verdict = any_positive   ? DfeVerdict::NotUnique
                     : all_negative ? DfeVerdict::GES
                                    : DfeVerdict::AsymptoticallyStableUnique;
    return report;
}

BoundaryVerdict boundary_stability(const MultiVirusSystem& system, int virus, double tol) {
    system.require_tri_virus();
    require(virus >= 0 && virus < 3, ErrorCode::ParameterOutOfRange, "virus index must be 0, 1 or 2");
    system.require_irreducible();

    BoundaryVerdict out;
    out.virus = virus;
    out.tol = tol;
    out.endemic = single_virus_endemic(system.healing(virus), system.infection(virus));
    const Vector susceptible = Vector::Ones(system.node_count()) - out.endemic;

    std::size_t slot = 0;
    for (int l = 0; l < 3; ++l) {
        if (l == virus) continue;
        const Matrix invasion =
            susceptible.cwiseQuotient(system.healing(l)).asDiagonal() * system.infection(l);
        out.competitors[slot] = l;
        out.rho_values[slot] = perron(invasion).rho;
        ++slot;
    }
    const double worst = std::max(out.rho_values[0], out.rho_values[1]);
    out.verdict = worst < 1.0 - tol   ? BoundaryStability::LocallyExponentiallyStable
                  : worst > 1.0 + tol ? BoundaryStability::Unstable
                                      : BoundaryStability::Marginal;
    return out;
}

LineVerdict line_stability(const MultiVirusSystem& system, const LineConstruction& construction, double tol) {
    system.require_tri_virus();
    const int n = system.node_count();
    const Vector& z = construction.z;
    require(z.size() == n && construction.b2.rows() == n && construction.c.rows() == n,
            ErrorCode::ConstructionMismatch, "construction dimension differs from the system");
    for (int k = 0; k < 3; ++k) {
        require((system.healing(k).array() == 1.0).all(), ErrorCode::ConstructionMismatch,
                "line systems have unit healing rates");
    }
    const Vector ones = Vector::Ones(n);
    const double z_residual =
        (-z + (ones - z).cwiseProduct(system.infection(0) * z)).lpNorm<Eigen::Infinity>();
    require(z_residual <= kLineTol, ErrorCode::ConstructionMismatch, "z is not the endemic equilibrium of B1");
    const double b2_gap = (system.infection(1) - construction.b2).cwiseAbs().maxCoeff();
    require(b2_gap <= 1e-12 * std::max(1.0, construction.b2.cwiseAbs().maxCoeff()), ErrorCode::ConstructionMismatch,
            "B2 differs from (I - Z)^{-1} C");
    require((construction.c * z - z).lpNorm<Eigen::Infinity>() <= kLineTol, ErrorCode::ConstructionMismatch,
            "C z differs from z");

    LineVerdict out;
    out.tol = tol;
    const Matrix invasion = (ones - z).asDiagonal() * system.infection(2);
    out.abscissa = spectral_abscissa_metzler(invasion - Matrix::Identity(n, n));
    out.rho = spectral_radius_nonnegative(invasion);
    out.verdict = out.abscissa < -tol  ? LineStability::LocallyExponentiallyAttractive
                  : out.abscissa > tol ? LineStability::Unstable
                                       : LineStability::Marginal;

    // The virus-1/2 block of the Jacobian on the segment, conjugated by diag(I, -I).
    Vector flip = Vector::Ones(2 * n);
    flip.tail(n).setConstant(-1.0);
    const std::array<double, 3> betas{0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const Matrix j = jacobian(system, line_point(z, betas[i]));
        const Matrix reduced = flip.asDiagonal() * j.topLeftCorner(2 * n, 2 * n) * flip.asDiagonal();
        double s;
        try {
            s = spectral_abscissa_metzler(reduced);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotMetzler) throw;
            throw Error(ErrorCode::ConstructionMismatch, "conjugated segment Jacobian is not Metzler");
        }
        out.reduced_abscissas[i] = s;
        require(std::abs(s) <= tol, ErrorCode::ConstructionMismatch,
                "conjugated segment Jacobian has abscissa " + std::to_string(s) + ", expected 0");
    }
    return out;
}

bool check_identical_viruses(const MultiVirusSystem& system, double tol) {
    system.require_tri_virus();
    for (int k = 1; k < 3; ++k) {
        if ((system.healing(k) - system.healing(0)).cwiseAbs().maxCoeff() > tol) return false;
        if ((system.infection(k) - system.infection(0)).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

LyapunovCertificate lyapunov_certificate(const Vector& healing, const Matrix& infection, double tol) {
    require(infection.rows() >= 2, ErrorCode::DimensionMismatch, "certificate needs at least two nodes");
    LyapunovCertificate cert;
    cert.tol = tol;
    cert.x_tilde = single_virus_endemic(healing, infection);
    const Eigen::Index n = healing.size();
    const Vector ones = Vector::Ones(n);
    const Matrix damped = (ones - cert.x_tilde).asDiagonal() * infection;

    // u' Q = 0  <=>  (D u)' D^{-1} (I - X) B = (D u)', so D u is the left Perron
    // vector of D^{-1} (I - X) B, whose radius is 1 at the endemic state.
    const PerronTriple triple = perron(healing.cwiseInverse().asDiagonal() * damped);
    cert.u_tilde = triple.left.cwiseQuotient(healing);
    cert.u_tilde /= cert.u_tilde.dot(cert.x_tilde);

    cert.q = Matrix(healing.asDiagonal()) - damped;
    cert.p = cert.u_tilde.cwiseQuotient(cert.x_tilde);
    const Matrix pq = cert.p.asDiagonal() * cert.q;
    cert.q_bar = pq + pq.transpose();
    cert.q_bar_spectrum = symmetric_eigenvalues(cert.q_bar);
    cert.lambda2 = cert.q_bar_spectrum[1];
    cert.p_max = cert.p.maxCoeff();
    cert.p_min = cert.p.minCoeff();
    cert.lambda_bar = cert.lambda2 / cert.p_max;

    auto check = [&](bool ok, const std::string& what) { require(ok, ErrorCode::CertificateInvalid, what); };
    check((cert.q * cert.x_tilde).lpNorm<Eigen::Infinity>() <= tol, "Q x_tilde != 0");
    check((cert.u_tilde.transpose() * cert.q).lpNorm<Eigen::Infinity>() <= tol, "u_tilde' Q != 0");
    check(std::abs(cert.u_tilde.dot(cert.x_tilde) - 1.0) <= tol, "u_tilde' x_tilde != 1");
    check((cert.u_tilde.array() > 0.0).all(), "u_tilde is not strictly positive");
    check(std::abs(cert.q_bar_spectrum[0]) <= tol, "smallest eigenvalue of Q_bar is not 0");
    check(cert.lambda2 >= tol, "Q_bar has rank below n - 1");
    check((cert.q_bar * cert.x_tilde).lpNorm<Eigen::Infinity>() <= tol * static_cast<double>(n),
          "x_tilde is not a null vector of Q_bar");
    return cert;
}

LyapunovTrace lyapunov_trace(const LyapunovCertificate& cert, const Trajectory& trajectory, int virus,
                             const LyapunovTraceOptions& options) {
    require(!trajectory.empty(), ErrorCode::EmptyTrajectory, "trajectory has no samples");
    const Eigen::Index n = cert.x_tilde.size();
    require(trajectory.n == n && cert.u_tilde.size() == n && cert.p.size() == n, ErrorCode::CertificateMismatch,
            "certificate and trajectory differ in node count");
    require(virus >= 0 && virus < trajectory.m, ErrorCode::CertificateMismatch, "virus index out of range");

    const std::size_t count = trajectory.size();
    const Matrix projector = Matrix::Identity(n, n) - cert.x_tilde * cert.u_tilde.transpose();
    const double projector_norm = projector.cwiseAbs().rowwise().sum().maxCoeff();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    LyapunovTrace trace;
    trace.samples.resize(count);
    std::vector<double> aggregate_gap(count);
    std::vector<double> roundoff(count);
    for (std::size_t i = 0; i < count; ++i) {
        const SystemState s = trajectory.state(i);
        const Vector x = s.virus(virus);
        const Vector zeta = projector * x;
        auto& sample = trace.samples[i];
        sample.t = s.t;
        sample.v = zeta.dot(cert.p.asDiagonal() * zeta);
        sample.u_dot_zeta = cert.u_tilde.dot(zeta);
        aggregate_gap[i] = (cert.x_tilde - s.node_totals()).norm();
        // Rounding error of V evaluated from a stored state.
        const double dz = 4.0 * eps * projector_norm * (x.lpNorm<Eigen::Infinity>() + 1.0);
        roundoff[i] = cert.p_max * static_cast<double>(n) * (2.0 * zeta.lpNorm<Eigen::Infinity>() * dz + dz * dz);
    }

    const auto transient_end = static_cast<std::size_t>(std::ceil(options.transient_fraction * static_cast<double>(count)));
    // The gap levels off at the accuracy of x̃; fit only the stretch above that plateau.
    const std::size_t first = std::min(transient_end, count);
    double floor = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i < count; ++i) floor = std::min(floor, aggregate_gap[i]);
    floor = std::max(1e-13, 10.0 * floor);
    std::size_t last = first;
    while (last < count && aggregate_gap[last] > floor) ++last;
    const ExponentialFit fit = fit_exponential_decay(
        std::vector<double>(trajectory.times.begin() + static_cast<std::ptrdiff_t>(first),
                            trajectory.times.begin() + static_cast<std::ptrdiff_t>(last)),
        std::vector<double>(aggregate_gap.begin() + static_cast<std::ptrdiff_t>(first),
                            aggregate_gap.begin() + static_cast<std::ptrdiff_t>(last)),
        floor);
    trace.fitted_amplitude = fit.amplitude;
    trace.fitted_rate = fit.rate;
    trace.a_bar = options.envelope_slack * fit.amplitude * cert.p_max;
    trace.gap_floor = floor;

    std::size_t checked = 0;
    std::size_t satisfied = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto& sample = trace.samples[i];
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == count ? i : i + 1;
        const double dt = trace.samples[hi].t - trace.samples[lo].t;
        double allowance = 0.0;
        if (dt > 0.0) {
            sample.v_dot = (trace.samples[hi].v - trace.samples[lo].v) / dt;
            allowance = (roundoff[hi] + roundoff[lo]) / dt;
        }
        const double decay = std::isinf(fit.rate) ? 0.0 : fit.amplitude * std::exp(-fit.rate * sample.t);
        const double forcing = options.envelope_slack * cert.p_max * std::max(decay, trace.gap_floor);
        sample.bound = -cert.lambda_bar * sample.v + forcing;
        sample.bound_satisfied = sample.v_dot <= sample.bound + allowance;
        sample.in_transient = i < transient_end;
        if (!sample.in_transient) {
            ++checked;
            if (sample.bound_satisfied) ++satisfied;
        }
    }
    trace.satisfied_fraction = checked == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(checked);
    return trace;
}

} // namespace trivirus
