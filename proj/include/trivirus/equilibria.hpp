#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trivirus/model.hpp"

namespace trivirus {

inline constexpr double kFixedPointTol = 1e-12;
inline constexpr double kNewtonTol = 1e-10;
inline constexpr double kZeroBlockThreshold = 1e-8;
/// Eigenvector-match tolerance for line constructions (C z = z).
inline constexpr double kLineTol = 1e-10;

enum class EquilibriumKind { DFE, Boundary, LineSegment, Plane, CoexistencePoint };

std::string to_string(EquilibriumKind kind);

/// A point, segment or plane of equilibria. Line and plane descriptors keep
/// their generator (z or x_tilde) rather than sampled points.
struct EquilibriumDescriptor {
    EquilibriumKind kind = EquilibriumKind::DFE;
    /// Surviving virus for Boundary (0-based); -1 otherwise.
    int virus = -1;
    SystemState base_point;
    /// LineSegment: z, the segment being (b z, (1 - b) z, 0) for b in [0, 1].
    /// Plane: the anchor x_tilde, the plane being {(a_1 x, a_2 x, a_3 x)}.
    Vector generator;
    /// Plane: simplex weights of base_point.
    std::vector<double> weights;
    /// Max-norm of vector_field at base_point (and at 11 samples along a
    /// line or plane).
    double residual = 0.0;
};

/// z, C and the derived B2 = (I - Z)^{-1} C of a line-of-equilibria system.
struct LineConstruction {
    Vector z;
    Matrix c;
    Matrix b2;
};

using IterateObserver = std::function<void(const Vector&)>;

/// Unique endemic equilibrium 0 << x << 1 of the single-virus system (D, B),
/// from the monotone map x_i <- (Bx)_i / (delta_i + (Bx)_i) started at the
/// all-ones vector. The observer, if given, sees every iterate.
///
/// Errors: NotIrreducible, SubThresholdSystem (s(B - D) <= 0), NoConvergence.
Vector single_virus_endemic(const Vector& healing, const Matrix& infection, double tol = kFixedPointTol,
                            const IterateObserver& observer = {});

/// Boundary(k) descriptors for every virus above threshold, in virus order.
std::vector<EquilibriumDescriptor> boundary_equilibria(const MultiVirusSystem& system, double tol = kFixedPointTol);

/// Builds the tri-virus system (I, B1), (I, (I - Z)^{-1} C), (I, B3) whose
/// equilibria include the segment (b z, (1 - b) z, 0), where z is the endemic
/// equilibrium of (I, B1) and C z = z.
///
/// Errors: NotIrreducible, SubThresholdSystem, EigvecMismatch, DimensionMismatch.
std::pair<MultiVirusSystem, LineConstruction> construct_line_system(const Matrix& b1, const Matrix& b3, const Matrix& c,
                                                                    double tol = kLineTol);

/// Recovers the construction behind an existing system: z from (I, B1) and
/// C = (I - Z) B2. Throws ConstructionMismatch when D^k != I or C z != z.
LineConstruction line_construction_of(const MultiVirusSystem& system, double tol = kLineTol);

/// (b z, (1 - b) z, 0). Throws ParameterOutOfRange for b outside [0, 1].
SystemState line_point(const Vector& z, double beta1);

EquilibriumDescriptor line_descriptor(const MultiVirusSystem& system, const LineConstruction& construction);

struct PlaneProjection {
    std::vector<double> alpha;
    double residual = 0.0;
};

/// Least-squares weights alpha_k = <x^k, x_tilde> / <x_tilde, x_tilde>.
/// residual = max_k ||x^k - alpha_k x_tilde||_inf + |sum_k alpha_k - 1|.
PlaneProjection plane_projection(const Vector& x_tilde, const SystemState& state);

/// (a_1 x_tilde, ..., a_m x_tilde).
SystemState plane_point(const Vector& x_tilde, const std::vector<double>& weights);

EquilibriumDescriptor plane_descriptor(const MultiVirusSystem& system, const Vector& x_tilde,
                                       const std::vector<double>& weights);

/// DFE, Boundary(k) or CoexistencePoint by which blocks have an entry above
/// zero_threshold. Throws NotAnEquilibrium if the residual exceeds tol.
EquilibriumDescriptor classify_equilibrium(const MultiVirusSystem& system, const SystemState& point,
                                           double tol = kNewtonTol, double zero_threshold = kZeroBlockThreshold);

struct NewtonOptions {
    double tol = kNewtonTol;
    int max_iter = 100;
    int max_halvings = 30;
    double domain_tol = kDefaultDomainTol;
};

/// Damped Newton on vector_field. Steps are halved until the iterate stays
/// in the domain. Near a continuum of equilibria the Jacobian is rank
/// deficient, so the step is the minimum-norm least-squares solution; a step
/// that cannot reduce the linearized residual raises SingularJacobian.
///
/// Errors: NoConvergence, SingularJacobian, InitialStateOutsideDomain.
EquilibriumDescriptor find_coexistence(const MultiVirusSystem& system, const SystemState& start,
                                       const NewtonOptions& options = {});

/// Max-norm of vector_field at a state.
double equilibrium_residual(const MultiVirusSystem& system, const SystemState& state);

} // namespace trivirus
