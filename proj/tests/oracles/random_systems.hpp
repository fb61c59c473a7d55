#pragma once

// Random parameter sets for property tests, drawn from std::mt19937_64 so the
// library generator is not used to test itself.

#include <random>
#include <vector>

#include "trivirus/model.hpp"

namespace oracle {

// Nonnegative n x n matrix with a positive n-cycle (hence irreducible) plus
// each other entry present with probability density.
inline Eigen::MatrixXd random_irreducible(std::mt19937_64& rng, int n, double density = 0.4, double scale = 1.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a((i + 1) % n, i) = scale * (0.1 + u(rng));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (a(i, j) == 0.0 && u(rng) < density) a(i, j) = scale * u(rng);
        }
    }
    return a;
}

inline Eigen::VectorXd random_healing(std::mt19937_64& rng, int n, double lo = 0.5, double hi = 1.5) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = u(rng);
    return d;
}

inline trivirus::MultiVirusSystem random_system(std::mt19937_64& rng, int n, int m, double scale = 1.0) {
    std::vector<Eigen::VectorXd> d;
    std::vector<Eigen::MatrixXd> b;
    for (int k = 0; k < m; ++k) {
        d.push_back(random_healing(rng, n));
        b.push_back(random_irreducible(rng, n, 0.4, scale));
    }
    return trivirus::build_system(d, b);
}

// Interior point of the domain: per node m + 1 exponential shares, one withheld.
inline trivirus::SystemState random_interior(std::mt19937_64& rng, int n, int m) {
    std::exponential_distribution<double> e(1.0);
    Eigen::VectorXd x(n * m);
    for (int i = 0; i < n; ++i) {
        std::vector<double> p(static_cast<std::size_t>(m) + 1);
        double total = 0.0;
        for (auto& v : p) total += (v = e(rng) + 1e-3);
        for (int k = 0; k < m; ++k) x(k * n + i) = p[static_cast<std::size_t>(k)] / total;
    }
    return {n, m, x};
}

} // namespace oracle
