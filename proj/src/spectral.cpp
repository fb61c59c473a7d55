#include "trivirus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trivirus {
namespace {

void require_square(const Matrix& a, const char* what) {
    require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::DimensionMismatch,
            std::string(what) + " must be a nonempty square matrix");
}

void require_nonnegative(const Matrix& a) {
    require(a.allFinite(), ErrorCode::NegativeEntry, "matrix has non-finite entries");
    require((a.array() >= 0.0).all(), ErrorCode::NegativeEntry, "matrix has a negative entry");
}

int iteration_cap(Eigen::Index n, double tol) {
    const double digits = std::ceil(std::log10(1.0 / tol));
    return static_cast<int>(100.0 * static_cast<double>(n) * std::max(1.0, digits));
}

struct PowerResult {
    double rho = 0.0;
    Vector v;
    int iterations = 0;
};

// Power iteration on A + I for nonnegative irreducible A; v has unit 1-norm.
PowerResult shifted_power_iteration(const Matrix& a, double tol) {
    const Eigen::Index n = a.rows();
    const int cap = iteration_cap(n, tol);
    Vector v = Vector::Constant(n, 1.0 / static_cast<double>(n));
    Vector av = a * v;
    for (int it = 1; it <= cap; ++it) {
        Vector w = av + v;
        const double norm = w.sum();
        require(norm > 0.0, ErrorCode::NoConvergence, "power iterate vanished");
        w /= norm;
        const double change = (w - v).lpNorm<1>();
        v = std::move(w);
        av = a * v;
        const double rho = av.sum();
        const double residual = (av - rho * v).lpNorm<1>();
        if (change < tol && residual < tol) return {rho, v, it};
    }
    throw Error(ErrorCode::NoConvergence, "power iteration exceeded " + std::to_string(cap) + " iterations");
}

// Fallback for a small spectral gap: ρ from the dense eigensolver, the vector
// from inverse iteration with a shift just above ρ.
PowerResult inverse_iteration(const Matrix& a, double tol) {
    const Eigen::Index n = a.rows();
    const Eigen::VectorXcd lambda = a.eigenvalues();
    double rho = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) rho = std::max(rho, lambda(i).real());
    const double scale = std::max(rho, a.cwiseAbs().maxCoeff());
    const double sigma = rho + 1e-8 * scale;
    const Eigen::PartialPivLU<Matrix> lu(sigma * Matrix::Identity(n, n) - a);
    Vector v = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 1; it <= 50; ++it) {
        Vector w = lu.solve(v).cwiseAbs();
        require(w.allFinite() && w.sum() > 0.0, ErrorCode::NoConvergence, "inverse iteration failed");
        w /= w.sum();
        const double change = (w - v).lpNorm<1>();
        v = std::move(w);
        const Vector av = a * v;
        const double estimate = av.sum();
        const double residual = (av - estimate * v).lpNorm<1>();
        if (change < tol && residual < tol * std::max(1.0, scale)) return {estimate, v, it};
    }
    throw Error(ErrorCode::NoConvergence, "inverse iteration did not converge");
}

Matrix principal_submatrix(const Matrix& a, const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = a(idx[r], idx[c]);
    return sub;
}

} // namespace

std::vector<std::vector<int>> strongly_connected_components(const Matrix& a) {
    require_square(a, "adjacency");
    const int n = static_cast<int>(a.rows());
    // Edge j -> i whenever a(i, j) != 0.
    std::vector<std::vector<int>> out(n), in(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && a(i, j) != 0.0) {
                out[j].push_back(i);
                in[i].push_back(j);
            }

    // Kosaraju: finishing order on the forward graph, then sweep the reverse.
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        seen[root] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < out[node].size()) {
                const int child = out[node][next++];
                if (!seen[child]) {
                    seen[child] = 1;
                    stack.emplace_back(child, 0);
                }
            } else {
                order.push_back(node);
                stack.pop_back();
            }
        }
    }

    std::vector<int> component(n, -1);
    std::vector<std::vector<int>> components;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (component[*it] >= 0) continue;
        const int id = static_cast<int>(components.size());
        components.emplace_back();
        std::vector<int> stack{*it};
        component[*it] = id;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            components[id].push_back(node);
            for (int pred : in[node]) {
                if (component[pred] < 0) {
                    component[pred] = id;
                    stack.push_back(pred);
                }
            }
        }
        std::sort(components[id].begin(), components[id].end());
    }
    return components;
}

bool is_irreducible(const Matrix& a) {
    require_square(a, "matrix");
    require_nonnegative(a);
    return strongly_connected_components(a).size() == 1;
}

PerronTriple perron(const Matrix& a, double tol) {
    require(tol > 0.0, ErrorCode::ParameterOutOfRange, "tolerance must be positive");
    require(is_irreducible(a), ErrorCode::NotIrreducible, "Perron vector requested for a reducible matrix");

    PerronTriple triple;
    if (a.rows() == 1) {
        triple.rho = a(0, 0);
        triple.right = Vector::Ones(1);
        triple.left = Vector::Ones(1);
        return triple;
    }
    const Matrix at = a.transpose();
    PowerResult right;
    PowerResult left;
    try {
        right = shifted_power_iteration(a, tol);
        left = shifted_power_iteration(at, tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        right = inverse_iteration(a, tol);
        left = inverse_iteration(at, tol);
    }
    triple.rho = right.rho;
    triple.right = right.v;
    triple.left = left.v / left.v.dot(right.v);
    triple.iterations = right.iterations + left.iterations;
    return triple;
}

double spectral_radius_nonnegative(const Matrix& a, double tol) {
    require_square(a, "matrix");
    require_nonnegative(a);
    double rho = 0.0;
    for (const auto& comp : strongly_connected_components(a)) {
        if (comp.size() == 1) {
            rho = std::max(rho, a(comp[0], comp[0]));
        } else {
            rho = std::max(rho, perron(principal_submatrix(a, comp), tol).rho);
        }
    }
    return rho;
}

double spectral_abscissa_metzler(const Matrix& m, double tol) {
    require_square(m, "matrix");
    require(m.allFinite(), ErrorCode::NotMetzler, "matrix has non-finite entries");
    const Eigen::Index n = m.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            require(i == j || m(i, j) >= 0.0, ErrorCode::NotMetzler, "matrix has a negative off-diagonal entry");

    const double shift = 1.0 + m.diagonal().cwiseAbs().maxCoeff();
    const Matrix shifted = m + shift * Matrix::Identity(n, n);
    double abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& comp : strongly_connected_components(m)) {
        double value;
        if (comp.size() == 1) {
            value = m(comp[0], comp[0]);
        } else {
            value = perron(principal_submatrix(shifted, comp), tol).rho - shift;
        }
        abscissa = std::max(abscissa, value);
    }
    return abscissa;
}

std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol) {
    require_square(s, "matrix");
    require(s.allFinite(), ErrorCode::NotSymmetric, "matrix has non-finite entries");
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    require((s - s.transpose()).cwiseAbs().maxCoeff() <= tol * scale, ErrorCode::NotSymmetric,
            "matrix is not symmetric within tolerance");

    Matrix a = 0.5 * (s + s.transpose());
    const Eigen::Index n = a.rows();
    const double frob2 = a.squaredNorm();
    constexpr int kMaxSweeps = 100;
    auto off_diagonal2 = [&] {
        double sum = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q)
                if (p != q) sum += a(p, q) * a(p, q);
        return sum;
    };

    int sweep = 0;
    while (off_diagonal2() > 1e-30 * frob2) {
        require(++sweep <= kMaxSweeps, ErrorCode::NoConvergence, "Jacobi sweeps exhausted");
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eigenvalues(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) eigenvalues[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(eigenvalues.begin(), eigenvalues.end());
    return eigenvalues;
}

bool is_positive_semidefinite(const Matrix& s, double tol) {
    return symmetric_eigenvalues(s, tol).front() >= -tol;
}

} // namespace trivirus
