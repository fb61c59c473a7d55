#pragma once

#include <array>
#include <string>
#include <vector>

#include "trivirus/equilibria.hpp"
#include "trivirus/simulator.hpp"

namespace trivirus {

/// Width of the band around a spectral threshold inside which a verdict is
/// reported as Marginal instead of stable or unstable.
inline constexpr double kVerdictTol = 1e-9;

enum class DfeVerdict { GES, AsymptoticallyStableUnique, NotUnique };
enum class BoundaryStability { LocallyExponentiallyStable, Unstable, Marginal };
enum class LineStability { LocallyExponentiallyAttractive, Unstable, Marginal };

std::string to_string(DfeVerdict v);
std::string to_string(BoundaryStability v);
std::string to_string(LineStability v);

struct DfeReport {
    /// s(B^k - D^k) per virus.
    std::vector<double> abscissas;
    DfeVerdict verdict = DfeVerdict::GES;
    double tol = kVerdictTol;
};

DfeReport dfe_report(const MultiVirusSystem& system, double tol = kVerdictTol);

struct BoundaryVerdict {
    int virus = 0;
    Vector endemic;
    /// Indices of the two competitors, and rho((I - X^k)(D^l)^{-1} B^l) for each.
    std::array<int, 2> competitors{};
    std::array<double, 2> rho_values{};
    BoundaryStability verdict = BoundaryStability::Marginal;
    double tol = kVerdictTol;
};

/// Local exponential stability of (0, .., x_tilde^k, .., 0) holds iff both
/// competitor radii are below 1.
///
/// Errors: UnsupportedVirusCount, NotIrreducible, SubThresholdSystem.
BoundaryVerdict boundary_stability(const MultiVirusSystem& system, int virus, double tol = kVerdictTol);

struct LineVerdict {
    /// s(-I + (I - Z) B3) and rho((I - Z) B3).
    double abscissa = 0.0;
    double rho = 0.0;
    LineStability verdict = LineStability::Marginal;
    /// s(P Jbar P) at b = 0, 0.5, 1, where Jbar is the virus-1/2 block of the
    /// Jacobian on the segment and P = diag(I, -I). Each is 0 for a valid line.
    std::array<double, 3> reduced_abscissas{};
    double tol = kVerdictTol;
};

/// Errors: ConstructionMismatch when the system is not (I, B1), (I, (I - Z)^{-1} C),
/// (I, B3) for the given construction, or the reduced block fails its
/// Metzler / zero-abscissa structure check.
LineVerdict line_stability(const MultiVirusSystem& system, const LineConstruction& construction,
                           double tol = kVerdictTol);

/// D^1 = D^2 = D^3 and B^1 = B^2 = B^3 entrywise within tol.
bool check_identical_viruses(const MultiVirusSystem& system, double tol = 1e-12);

/// Data behind the exponential-convergence argument for the plane of
/// equilibria of an identical-virus system with single-virus data (D, B).
struct LyapunovCertificate {
    Vector x_tilde;
    /// Left null vector of Q = D - (I - X) B, with u' x_tilde = 1.
    Vector u_tilde;
    Matrix q;
    /// diag(u_i / x_i).
    Vector p;
    /// P Q + Q' P, symmetric PSD with null vector x_tilde.
    Matrix q_bar;
    std::vector<double> q_bar_spectrum;
    double lambda2 = 0.0;
    double p_max = 0.0;
    double p_min = 0.0;
    /// lambda2 / p_max.
    double lambda_bar = 0.0;
    double tol = kVerdictTol;
};

/// Errors: NotIrreducible, SubThresholdSystem, CertificateInvalid.
LyapunovCertificate lyapunov_certificate(const Vector& healing, const Matrix& infection, double tol = kVerdictTol);

struct LyapunovSample {
    double t = 0.0;
    double v = 0.0;
    double v_dot = 0.0;
    double bound = 0.0;
    /// u' zeta, zero up to roundoff.
    double u_dot_zeta = 0.0;
    bool bound_satisfied = true;
    bool in_transient = false;
};

struct LyapunovTrace {
    std::vector<LyapunovSample> samples;
    /// Envelope ||x_tilde - z(t)|| <= a e^{-b t} fitted on the aggregate z.
    double fitted_amplitude = 0.0;
    double fitted_rate = 0.0;
    /// a_bar = kEnvelopeSlack * a * p_max.
    double a_bar = 0.0;
    /// Level at which ||x_tilde - z|| stops decaying; the envelope is max(a e^{-bt}, gap_floor).
    double gap_floor = 0.0;
    /// Fraction of post-transient samples meeting V' <= -lambda_bar V + envelope_slack p_max max(a e^{-bt}, gap_floor).
    double satisfied_fraction = 1.0;
};

struct LyapunovTraceOptions {
    double transient_fraction = 0.05;
    double envelope_slack = 10.0;
};

/// Evaluates V = zeta' P zeta with zeta = (I - x_tilde u') x^k along a
/// trajectory of an identical-virus system and checks the decay inequality
/// at each sample (V' by central differences over adjacent samples).
///
/// Errors: CertificateMismatch, EmptyTrajectory.
LyapunovTrace lyapunov_trace(const LyapunovCertificate& cert, const Trajectory& trajectory, int virus,
                             const LyapunovTraceOptions& options = {});

} // namespace trivirus
