#include "trivirus/model.hpp"

#include <algorithm>
#include <sstream>

#include "trivirus/spectral.hpp"

namespace trivirus {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPositiveHealingRate: return "NonPositiveHealingRate";
    case ErrorCode::NegativeInfectionRate: return "NegativeInfectionRate";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedVirusCount: return "UnsupportedVirusCount";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotMetzler: return "NotMetzler";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SubThresholdSystem: return "SubThresholdSystem";
    case ErrorCode::EigvecMismatch: return "EigvecMismatch";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::ConstructionMismatch: return "ConstructionMismatch";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::CertificateMismatch: return "CertificateMismatch";
    case ErrorCode::InitialStateOutsideDomain: return "InitialStateOutsideDomain";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool MultiVirusSystem::all_irreducible() const noexcept {
    return std::all_of(irreducible_.begin(), irreducible_.end(), [](bool f) { return f; });
}

void MultiVirusSystem::require_irreducible() const {
    for (int k = 0; k < m_; ++k) {
        require(irreducible(k), ErrorCode::NotIrreducible,
                "infection matrix of virus " + std::to_string(k + 1) + " is reducible");
    }
}

void MultiVirusSystem::require_tri_virus() const {
    require(m_ == 3, ErrorCode::UnsupportedVirusCount,
            "operation requires exactly 3 viruses, system has " + std::to_string(m_));
}

MultiVirusSystem build_system(std::vector<Vector> healing, std::vector<Matrix> infection) {
    require(!healing.empty(), ErrorCode::DimensionMismatch, "at least one virus is required");
    require(healing.size() == infection.size(), ErrorCode::DimensionMismatch,
            "healing and infection lists differ in virus count");

    const auto n = infection.front().rows();
    require(n >= 2, ErrorCode::DimensionMismatch, "node count must be at least 2");
    for (std::size_t k = 0; k < infection.size(); ++k) {
        const auto& b = infection[k];
        const auto& d = healing[k];
        std::ostringstream where;
        where << "virus " << k + 1;
        require(b.rows() == n && b.cols() == n, ErrorCode::DimensionMismatch,
                where.str() + ": infection matrix is not " + std::to_string(n) + "x" + std::to_string(n));
        require(d.size() == n, ErrorCode::DimensionMismatch,
                where.str() + ": healing vector length differs from node count");
        for (Eigen::Index i = 0; i < n; ++i) {
            require(d(i) > 0.0, ErrorCode::NonPositiveHealingRate,
                    where.str() + ", node " + std::to_string(i + 1) + ": healing rate must be positive");
        }
        require(b.allFinite() && d.allFinite(), ErrorCode::DimensionMismatch, where.str() + ": non-finite parameter");
        require((b.array() >= 0.0).all(), ErrorCode::NegativeInfectionRate,
                where.str() + ": infection matrix has a negative entry");
    }

    MultiVirusSystem system;
    system.n_ = static_cast<int>(n);
    system.m_ = static_cast<int>(infection.size());
    system.irreducible_.reserve(infection.size());
    for (const auto& b : infection) system.irreducible_.push_back(is_irreducible(b));
    system.healing_ = std::move(healing);
    system.infection_ = std::move(infection);
    return system;
}

bool operator==(const MultiVirusSystem& a, const MultiVirusSystem& b) {
    if (a.node_count() != b.node_count() || a.virus_count() != b.virus_count()) return false;
    for (int k = 0; k < a.virus_count(); ++k) {
        if (a.healing(k) != b.healing(k) || a.infection(k) != b.infection(k)) return false;
    }
    return a.irreducible_flags() == b.irreducible_flags();
}

SystemState::SystemState(int nodes, int viruses, Vector stacked, double time)
    : n(nodes), m(viruses), x(std::move(stacked)), t(time) {
    require(x.size() == static_cast<Eigen::Index>(n) * m, ErrorCode::DimensionMismatch,
            "stacked state length is not n * m");
}

SystemState SystemState::zeros(int nodes, int viruses, double time) {
    return {nodes, viruses, Vector::Zero(static_cast<Eigen::Index>(nodes) * viruses), time};
}

SystemState SystemState::from_blocks(const std::vector<Vector>& blocks, double time) {
    require(!blocks.empty(), ErrorCode::DimensionMismatch, "state needs at least one virus block");
    const auto n = blocks.front().size();
    Vector x(n * static_cast<Eigen::Index>(blocks.size()));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        require(blocks[k].size() == n, ErrorCode::DimensionMismatch, "virus blocks differ in length");
        x.segment(static_cast<Eigen::Index>(k) * n, n) = blocks[k];
    }
    return {static_cast<int>(n), static_cast<int>(blocks.size()), std::move(x), time};
}

Vector SystemState::node_totals() const {
    Vector total = Vector::Zero(n);
    for (int k = 0; k < m; ++k) total += virus(k);
    return total;
}

double domain_violation(const SystemState& state) {
    if (state.x.size() == 0) return 0.0;
    const double below = std::max(0.0, -state.x.minCoeff());
    const double above = std::max(0.0, state.x.maxCoeff() - 1.0);
    const double sum_over = std::max(0.0, state.node_totals().maxCoeff() - 1.0);
    return std::max({below, above, sum_over});
}

bool in_domain(const SystemState& state, double tol) {
    if (!state.x.allFinite()) return false;
    return domain_violation(state) <= tol;
}

void require_dimensions(const MultiVirusSystem& system, const SystemState& state) {
    require(state.n == system.node_count() && state.m == system.virus_count() &&
                state.x.size() == static_cast<Eigen::Index>(state.n) * state.m,
            ErrorCode::DimensionMismatch, "state dimensions do not match the system");
}

void vector_field(const MultiVirusSystem& system, const Vector& x, Vector& out) {
    const Eigen::Index n = system.node_count();
    const int m = system.virus_count();
    require(x.size() == n * m, ErrorCode::DimensionMismatch, "state length does not match the system");

    Vector susceptible = Vector::Ones(n);
    for (int k = 0; k < m; ++k) susceptible -= x.segment(k * n, n);

    out.resize(n * m);
    for (int k = 0; k < m; ++k) {
        const auto xk = x.segment(k * n, n);
        out.segment(k * n, n) =
            -system.healing(k).cwiseProduct(xk) + susceptible.cwiseProduct(system.infection(k) * xk);
    }
}

Vector vector_field(const MultiVirusSystem& system, const SystemState& state) {
    require_dimensions(system, state);
    Vector out;
    vector_field(system, state.x, out);
    return out;
}

Matrix jacobian(const MultiVirusSystem& system, const SystemState& state) {
    require_dimensions(system, state);
    const Eigen::Index n = system.node_count();
    const int m = system.virus_count();
    const Vector susceptible = Vector::Ones(n) - state.node_totals();

    Matrix j = Matrix::Zero(n * m, n * m);
    for (int k = 0; k < m; ++k) {
        const auto& b = system.infection(k);
        const Vector pressure = b * state.virus(k);
        for (int l = 0; l < m; ++l) {
            auto block = j.block(k * n, l * n, n, n);
            block.diagonal() = -pressure;
            if (k == l) {
                block += susceptible.asDiagonal() * b;
                block.diagonal() -= system.healing(k);
            }
        }
    }
    return j;
}

} // namespace trivirus
