#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "trivirus/error.hpp"

namespace trivirus {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultDomainTol = 1e-9;

/// Parameters of the competitive m-virus networked SIS model: one positive
/// diagonal healing matrix D^k (stored as its diagonal) and one nonnegative
/// infection matrix B^k per virus, all over the same n nodes.
///
/// Instances are immutable and only obtainable through build_system(), so a
/// MultiVirusSystem in hand always satisfies delta > 0 and beta >= 0.
class MultiVirusSystem {
public:
    int node_count() const noexcept { return n_; }
    int virus_count() const noexcept { return m_; }

    const Vector& healing(int k) const { return healing_.at(static_cast<std::size_t>(k)); }
    const Matrix& infection(int k) const { return infection_.at(static_cast<std::size_t>(k)); }
    const std::vector<Vector>& healing() const noexcept { return healing_; }
    const std::vector<Matrix>& infection() const noexcept { return infection_; }

    /// True iff B^k is irreducible (its digraph is strongly connected).
    bool irreducible(int k) const { return irreducible_.at(static_cast<std::size_t>(k)); }
    const std::vector<bool>& irreducible_flags() const noexcept { return irreducible_; }
    bool all_irreducible() const noexcept;

    /// Throws NotIrreducible naming the first reducible layer.
    void require_irreducible() const;
    /// Throws UnsupportedVirusCount unless m == 3.
    void require_tri_virus() const;

    friend MultiVirusSystem build_system(std::vector<Vector> healing, std::vector<Matrix> infection);

private:
    MultiVirusSystem() = default;

    int n_ = 0;
    int m_ = 0;
    std::vector<Vector> healing_;
    std::vector<Matrix> infection_;
    std::vector<bool> irreducible_;
};

/// Validates and assembles a system. Zero infection matrices are accepted
/// here; only operations that need irreducibility reject them.
///
/// Errors: DimensionMismatch, NonPositiveHealingRate, NegativeInfectionRate.
MultiVirusSystem build_system(std::vector<Vector> healing, std::vector<Matrix> infection);

bool operator==(const MultiVirusSystem& a, const MultiVirusSystem& b);

/// Stacked infection fractions x = (x^1, ..., x^m), virus-major, plus time.
struct SystemState {
    int n = 0;
    int m = 0;
    Vector x;
    double t = 0.0;

    SystemState() = default;
    SystemState(int nodes, int viruses, Vector stacked, double time = 0.0);

    static SystemState zeros(int nodes, int viruses, double time = 0.0);
    static SystemState from_blocks(const std::vector<Vector>& blocks, double time = 0.0);

    auto virus(int k) { return x.segment(static_cast<Eigen::Index>(k) * n, n); }
    auto virus(int k) const { return x.segment(static_cast<Eigen::Index>(k) * n, n); }

    /// Per-node total infected fraction, the sum over viruses.
    Vector node_totals() const;
};

/// Membership in the closed domain {0 <= x <= 1, sum_k x^k <= 1} with every
/// bound relaxed by tol.
bool in_domain(const SystemState& state, double tol = kDefaultDomainTol);

/// Largest excursion of the state beyond the domain (0 when inside).
double domain_violation(const SystemState& state);

/// dx^k/dt = (-D^k + (I - sum_l X^l) B^k) x^k, stacked virus-major. States
/// outside the domain are still evaluated; callers flag them via in_domain.
Vector vector_field(const MultiVirusSystem& system, const SystemState& state);

/// Stacked-vector overload used by the integrator hot loop.
void vector_field(const MultiVirusSystem& system, const Vector& x, Vector& out);

/// Jacobian of vector_field, an (m n) x (m n) block matrix. Diagonal block k is
/// -D^k + (I - sum_l X^l) B^k - diag(B^k x^k); off-diagonal block (k, l) is
/// -diag(B^k x^k).
Matrix jacobian(const MultiVirusSystem& system, const SystemState& state);

void require_dimensions(const MultiVirusSystem& system, const SystemState& state);

} // namespace trivirus
