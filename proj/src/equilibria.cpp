#include "trivirus/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "trivirus/spectral.hpp"

namespace trivirus {
namespace {

constexpr long kMaxFixedPointIterations = 10'000'000;

void require_single_virus_data(const Vector& healing, const Matrix& infection) {
    require(infection.rows() == infection.cols() && infection.rows() > 0, ErrorCode::DimensionMismatch,
            "infection matrix must be square");
    require(healing.size() == infection.rows(), ErrorCode::DimensionMismatch,
            "healing vector length differs from infection matrix dimension");
    require((healing.array() > 0.0).all(), ErrorCode::NonPositiveHealingRate, "healing rates must be positive");
    require((infection.array() >= 0.0).all(), ErrorCode::NegativeInfectionRate,
            "infection matrix has a negative entry");
}

// max over 11 evenly spaced values of the parameterization.
template <class PointAt>
double sampled_residual(const MultiVirusSystem& system, PointAt&& point_at) {
    double worst = 0.0;
    for (int j = 0; j <= 10; ++j) {
        worst = std::max(worst, equilibrium_residual(system, point_at(j / 10.0)));
    }
    return worst;
}

} // namespace

std::string to_string(EquilibriumKind kind) {
    switch (kind) {
    case EquilibriumKind::DFE: return "DFE";
    case EquilibriumKind::Boundary: return "Boundary";
    case EquilibriumKind::LineSegment: return "LineSegment";
    case EquilibriumKind::Plane: return "Plane";
    case EquilibriumKind::CoexistencePoint: return "CoexistencePoint";
    }
    return "Unknown";
}

double equilibrium_residual(const MultiVirusSystem& system, const SystemState& state) {
    return vector_field(system, state).lpNorm<Eigen::Infinity>();
}

Vector single_virus_endemic(const Vector& healing, const Matrix& infection, double tol,
                            const IterateObserver& observer) {
    require_single_virus_data(healing, infection);
    require(is_irreducible(infection), ErrorCode::NotIrreducible, "infection matrix is reducible");
    const Matrix growth = infection - Matrix(healing.asDiagonal());
    const double abscissa = spectral_abscissa_metzler(growth);
    require(abscissa > kDefaultSpectralTol, ErrorCode::SubThresholdSystem,
            "s(B - D) = " + std::to_string(abscissa) + " <= 0, no endemic equilibrium exists");

    const Eigen::Index n = healing.size();
    Vector x = Vector::Ones(n);
    for (long it = 0; it < kMaxFixedPointIterations; ++it) {
        const Vector pressure = infection * x;
        x = pressure.array() / (healing.array() + pressure.array());
        if (observer) observer(x);
        const Vector residual = -healing.cwiseProduct(x) + (Vector::Ones(n) - x).cwiseProduct(infection * x);
        if (residual.lpNorm<Eigen::Infinity>() <= tol) return x;
    }
    throw Error(ErrorCode::NoConvergence, "endemic fixed-point iteration did not reach tolerance");
}

std::vector<EquilibriumDescriptor> boundary_equilibria(const MultiVirusSystem& system, double tol) {
    system.require_irreducible();
    const int n = system.node_count();
    const int m = system.virus_count();
    std::vector<EquilibriumDescriptor> out;
    for (int k = 0; k < m; ++k) {
        const Matrix growth = system.infection(k) - Matrix(system.healing(k).asDiagonal());
        if (spectral_abscissa_metzler(growth) <= kDefaultSpectralTol) continue;
        EquilibriumDescriptor d;
        d.kind = EquilibriumKind::Boundary;
        d.virus = k;
        d.base_point = SystemState::zeros(n, m);
        d.base_point.virus(k) = single_virus_endemic(system.healing(k), system.infection(k), tol);
        d.residual = equilibrium_residual(system, d.base_point);
        out.push_back(std::move(d));
    }
    return out;
}

std::pair<MultiVirusSystem, LineConstruction> construct_line_system(const Matrix& b1, const Matrix& b3,
                                                                    const Matrix& c, double tol) {
    const auto n = b1.rows();
    for (const Matrix* mat : {&b1, &b3, &c}) {
        require(mat->rows() == n && mat->cols() == n, ErrorCode::DimensionMismatch,
                "line construction matrices must share one square dimension");
    }
    require(is_irreducible(b1), ErrorCode::NotIrreducible, "B1 is reducible");
    require(is_irreducible(b3), ErrorCode::NotIrreducible, "B3 is reducible");
    require(is_irreducible(c), ErrorCode::NotIrreducible, "C is reducible");

    const Vector ones = Vector::Ones(n);
    LineConstruction construction;
    construction.z = single_virus_endemic(ones, b1, std::min(tol, kFixedPointTol));
    construction.c = c;
    const double mismatch = (c * construction.z - construction.z).lpNorm<Eigen::Infinity>();
    require(mismatch <= tol, ErrorCode::EigvecMismatch,
            "C z differs from z by " + std::to_string(mismatch) + " in max-norm");
    construction.b2 = (ones - construction.z).cwiseInverse().asDiagonal() * c;

    auto system = build_system({ones, ones, ones}, {b1, construction.b2, b3});
    for (double beta1 : {0.0, 0.5, 1.0}) {
        const double residual = equilibrium_residual(system, line_point(construction.z, beta1));
        require(residual <= 2.0 * tol, ErrorCode::EigvecMismatch,
                "segment point is not an equilibrium (residual " + std::to_string(residual) + ")");
    }
    return {std::move(system), std::move(construction)};
}

LineConstruction line_construction_of(const MultiVirusSystem& system, double tol) {
    system.require_tri_virus();
    const auto n = system.node_count();
    for (int k = 0; k < 3; ++k) {
        require((system.healing(k).array() == 1.0).all(), ErrorCode::ConstructionMismatch,
                "line construction needs unit healing rates for every virus");
    }
    require(system.irreducible(0), ErrorCode::NotIrreducible, "B1 is reducible");
    LineConstruction construction;
    construction.z = single_virus_endemic(Vector::Ones(n), system.infection(0), std::min(tol, kFixedPointTol));
    construction.c = (Vector::Ones(n) - construction.z).asDiagonal() * system.infection(1);
    construction.b2 = system.infection(1);
    const double mismatch = (construction.c * construction.z - construction.z).lpNorm<Eigen::Infinity>();
    require(mismatch <= tol, ErrorCode::ConstructionMismatch,
            "(I - Z) B2 z differs from z by " + std::to_string(mismatch));
    return construction;
}

SystemState line_point(const Vector& z, double beta1) {
    require(beta1 >= 0.0 && beta1 <= 1.0, ErrorCode::ParameterOutOfRange, "beta1 must lie in [0, 1]");
    return SystemState::from_blocks({beta1 * z, (1.0 - beta1) * z, Vector::Zero(z.size())});
}

EquilibriumDescriptor line_descriptor(const MultiVirusSystem& system, const LineConstruction& construction) {
    EquilibriumDescriptor d;
    d.kind = EquilibriumKind::LineSegment;
    d.generator = construction.z;
    d.base_point = line_point(construction.z, 0.5);
    d.residual = sampled_residual(system, [&](double b) { return line_point(construction.z, b); });
    return d;
}

PlaneProjection plane_projection(const Vector& x_tilde, const SystemState& state) {
    require(x_tilde.size() == state.n, ErrorCode::DimensionMismatch, "anchor length differs from node count");
    PlaneProjection p;
    const double norm2 = x_tilde.squaredNorm();
    double total = 0.0;
    for (int k = 0; k < state.m; ++k) {
        const double alpha = state.virus(k).dot(x_tilde) / norm2;
        p.alpha.push_back(alpha);
        total += alpha;
        p.residual = std::max(p.residual, (state.virus(k) - alpha * x_tilde).lpNorm<Eigen::Infinity>());
    }
    p.residual += std::abs(total - 1.0);
    return p;
}

SystemState plane_point(const Vector& x_tilde, const std::vector<double>& weights) {
    std::vector<Vector> blocks;
    blocks.reserve(weights.size());
    for (double w : weights) blocks.push_back(w * x_tilde);
    return SystemState::from_blocks(blocks);
}

EquilibriumDescriptor plane_descriptor(const MultiVirusSystem& system, const Vector& x_tilde,
                                       const std::vector<double>& weights) {
    require(static_cast<int>(weights.size()) == system.virus_count(), ErrorCode::DimensionMismatch,
            "one weight per virus is required");
    EquilibriumDescriptor d;
    d.kind = EquilibriumKind::Plane;
    d.generator = x_tilde;
    d.weights = weights;
    d.base_point = plane_point(x_tilde, weights);
    const int m = system.virus_count();
    // Samples run from the virus-1 corner towards the uniform split of the rest.
    const double base = equilibrium_residual(system, d.base_point);
    d.residual = std::max(base, sampled_residual(system, [&](double s) {
                              std::vector<double> w(m, m > 1 ? (1.0 - s) / (m - 1) : 1.0);
                              w[0] = m > 1 ? s : 1.0;
                              return plane_point(x_tilde, w);
                          }));
    return d;
}

EquilibriumDescriptor classify_equilibrium(const MultiVirusSystem& system, const SystemState& point, double tol,
                                           double zero_threshold) {
    const double residual = equilibrium_residual(system, point);
    require(residual <= tol, ErrorCode::NotAnEquilibrium,
            "vector field max-norm " + std::to_string(residual) + " exceeds tolerance");
    std::vector<int> active;
    for (int k = 0; k < point.m; ++k) {
        if (point.virus(k).maxCoeff() > zero_threshold) active.push_back(k);
    }
    EquilibriumDescriptor d;
    d.base_point = point;
    d.residual = residual;
    if (active.empty()) {
        d.kind = EquilibriumKind::DFE;
    } else if (active.size() == 1) {
        d.kind = EquilibriumKind::Boundary;
        d.virus = active.front();
    } else {
        d.kind = EquilibriumKind::CoexistencePoint;
    }
    return d;
}

EquilibriumDescriptor find_coexistence(const MultiVirusSystem& system, const SystemState& start,
                                       const NewtonOptions& options) {
    require_dimensions(system, start);
    require(in_domain(start, options.domain_tol), ErrorCode::InitialStateOutsideDomain,
            "Newton start lies outside the domain");

    SystemState x = start;
    for (int it = 0; it < options.max_iter; ++it) {
        const Vector f = vector_field(system, x);
        const double f_norm = f.lpNorm<Eigen::Infinity>();
        if (f_norm <= options.tol) return classify_equilibrium(system, x, options.tol);

        const Matrix j = jacobian(system, x);
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(j);
        cod.setThreshold(1e-12);
        const Vector step = cod.solve(-f);
        const double linear_residual = (j * step + f).norm();
        if (!step.allFinite() || cod.rank() == 0 || linear_residual > 0.5 * f.norm()) {
            throw Error(ErrorCode::SingularJacobian, "Newton step does not reduce the linearized residual (rank " +
                                                         std::to_string(cod.rank()) + ")");
        }

        double scale = 1.0;
        SystemState candidate = x;
        int halvings = 0;
        for (;; ++halvings) {
            candidate.x = x.x + scale * step;
            if (in_domain(candidate, options.domain_tol)) break;
            if (halvings == options.max_halvings) {
                throw Error(ErrorCode::NoConvergence, "step damping could not keep the iterate in the domain");
            }
            scale *= 0.5;
        }
        x = std::move(candidate);
    }
    if (options.max_iter > 0 && equilibrium_residual(system, x) <= options.tol) {
        return classify_equilibrium(system, x, options.tol);
    }
    throw Error(ErrorCode::NoConvergence,
                "Newton iteration did not converge in " + std::to_string(options.max_iter) + " iterations");
}

} // namespace trivirus
