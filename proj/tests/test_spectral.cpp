#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "oracles/charpoly.hpp"
#include "oracles/random_systems.hpp"
#include "trivirus/examples.hpp"
#include "trivirus/spectral.hpp"

using namespace trivirus;

TEST_CASE("perron matches the characteristic polynomial oracle") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 4;
        const Matrix a = oracle::random_irreducible(rng, n, 0.3);
        const auto triple = perron(a);
        CHECK(triple.rho == doctest::Approx(oracle::spectral_radius(a)).epsilon(1e-9));
        CHECK((a * triple.right - triple.rho * triple.right).lpNorm<1>() <= 1e-10);
        CHECK((a.transpose() * triple.left - triple.rho * triple.left).lpNorm<1>() <= 1e-10);
        CHECK((triple.right.array() > 0).all());
        CHECK((triple.left.array() > 0).all());
        CHECK(triple.left.dot(triple.right) == doctest::Approx(1.0));
    }
}

TEST_CASE("perron converges on periodic cycle matrices") {
    const auto ex = example_system(1);
    const auto triple = perron(ex.infection(0));
    CHECK(triple.rho == doctest::Approx(1.5).epsilon(1e-12));
    const Matrix one_by_one = Matrix::Constant(1, 1, 2.5);
    CHECK(perron(one_by_one).rho == 2.5);
}

TEST_CASE("perron rejects reducible and negative input") {
    Matrix reducible = Matrix::Zero(3, 3);
    reducible(0, 1) = 1.0;
    reducible(1, 2) = 1.0;
    CHECK_THROWS_WITH_AS(perron(reducible), doctest::Contains("NotIrreducible"), Error);
    Matrix negative = Matrix::Ones(2, 2);
    negative(0, 0) = -1.0;
    CHECK_THROWS_AS(is_irreducible(negative), Error);
}

TEST_CASE("strongly connected components") {
    Matrix a = Matrix::Zero(5, 5);
    a(1, 0) = a(0, 1) = 1.0; // {0, 1}
    a(3, 2) = a(4, 3) = a(2, 4) = 1.0; // {2, 3, 4}
    a(2, 1) = 1.0;
    const auto comps = strongly_connected_components(a);
    CHECK(comps.size() == 2);
    std::size_t total = 0;
    for (const auto& c : comps) total += c.size();
    CHECK(total == 5);
    CHECK_FALSE(is_irreducible(a));
    a(0, 3) = 1.0;
    CHECK(is_irreducible(a));
}

TEST_CASE("spectral radius and abscissa agree with a dense eigensolver on reducible input") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (u(rng) < 0.35) a(i, j) = u(rng);
            }
        }
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(a).eigenvalues();
        const double rho = spectral_radius_nonnegative(a);
        if (rho == 0.0) {
            // Acyclic pattern: nilpotent, where dense eigenvalues are only
            // accurate to about eps^(1/n).
            Matrix power = Matrix::Identity(n, n);
            for (int i = 0; i < n; ++i) power *= a;
            CHECK(power.cwiseAbs().maxCoeff() == 0.0);
        } else {
            CHECK(rho == doctest::Approx(ev.cwiseAbs().maxCoeff()).epsilon(1e-8));
        }

        Matrix metzler = a;
        for (int i = 0; i < n; ++i) metzler(i, i) = -2.0 * u(rng);
        const Eigen::VectorXcd mv = Eigen::EigenSolver<Matrix>(metzler).eigenvalues();
        CHECK(spectral_abscissa_metzler(metzler) == doctest::Approx(mv.real().maxCoeff()).epsilon(1e-8));
    }
    CHECK(spectral_radius_nonnegative(Matrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("spectral_abscissa_metzler rejects negative off-diagonal entries") {
    Matrix m = -Matrix::Identity(2, 2);
    m(0, 1) = -0.5;
    CHECK_THROWS_WITH_AS(spectral_abscissa_metzler(m), doctest::Contains("NotMetzler"), Error);
}

TEST_CASE("symmetric_eigenvalues against Eigen and trace identities") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 7;
        Matrix a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = g(rng);
        }
        const Matrix s = a + a.transpose();
        const auto ev = symmetric_eigenvalues(s);
        const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues();
        REQUIRE(ev.size() == static_cast<std::size_t>(n));
        double sum = 0.0;
        double squares = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(ev[static_cast<std::size_t>(i)] == doctest::Approx(ref(i)).epsilon(1e-10).scale(s.norm()));
            sum += ev[static_cast<std::size_t>(i)];
            squares += ev[static_cast<std::size_t>(i)] * ev[static_cast<std::size_t>(i)];
            if (i > 0) CHECK(ev[static_cast<std::size_t>(i - 1)] <= ev[static_cast<std::size_t>(i)]);
        }
        CHECK(std::abs(sum - s.trace()) <= 1e-8);
        CHECK(std::abs(squares - s.squaredNorm()) <= 1e-8 * std::max(1.0, s.squaredNorm()));
    }
}

TEST_CASE("symmetric_eigenvalues rejects asymmetric input; PSD check") {
    Matrix a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_WITH_AS(symmetric_eigenvalues(a), doctest::Contains("NotSymmetric"), Error);
    Matrix psd(2, 2);
    psd << 1, -1, -1, 1;
    CHECK(is_positive_semidefinite(psd));
    psd(0, 0) = 0.5;
    CHECK_FALSE(is_positive_semidefinite(psd));
}
