#include <doctest.h>

#include <random>

#include "oracles/random_systems.hpp"
#include "trivirus/equilibria.hpp"
#include "trivirus/examples.hpp"
#include "trivirus/spectral.hpp"

using namespace trivirus;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

Matrix cycle(int n, double w) {
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) a((i + 1) % n, i) = w;
    return a;
}

} // namespace

TEST_CASE("single_virus_endemic closed forms") {
    Matrix two(2, 2);
    two << 0, 2, 2, 0;
    const Vector x = single_virus_endemic(Vector::Ones(2), two);
    CHECK(x(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(x(1) == doctest::Approx(0.5).epsilon(1e-12));

    // Uniform weighted cycle: x = 1 - 1 / w at every node.
    const Vector z = single_virus_endemic(Vector::Ones(4), cycle(4, 1.5));
    CHECK((z - Vector::Constant(4, 1.0 / 3.0)).lpNorm<Eigen::Infinity>() <= 1e-10);

    // Heterogeneous healing: the residual is the defining equation.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 5;
        const Vector d = oracle::random_healing(rng, n, 0.2, 0.6);
        const Matrix b = oracle::random_irreducible(rng, n, 0.5, 2.0);
        if (spectral_abscissa_metzler(b - Matrix(d.asDiagonal())) <= 1e-6) continue;
        const Vector e = single_virus_endemic(d, b);
        const Vector residual = -d.cwiseProduct(e) + (Vector::Ones(n) - e).cwiseProduct(b * e);
        CHECK(residual.lpNorm<Eigen::Infinity>() <= kFixedPointTol);
        CHECK((e.array() > 0).all());
        CHECK((e.array() < 1).all());
    }
}

TEST_CASE("single_virus_endemic iterates decrease monotonically from the all-ones start") {
    std::mt19937_64 rng(8);
    const Matrix b = oracle::random_irreducible(rng, 5, 0.5, 2.0);
    const Vector d = Vector::Constant(5, 0.3);
    Vector previous = Vector::Ones(5);
    bool monotone = true;
    std::size_t count = 0;
    single_virus_endemic(d, b, kFixedPointTol, [&](const Vector& x) {
        monotone = monotone && (x.array() <= previous.array()).all();
        previous = x;
        ++count;
    });
    CHECK(monotone);
    CHECK(count > 0);
}

TEST_CASE("single_virus_endemic errors") {
    CHECK(code_of([] { single_virus_endemic(Vector::Ones(4), cycle(4, 0.9)); }) == ErrorCode::SubThresholdSystem);
    CHECK(code_of([] { single_virus_endemic(Vector::Ones(4), cycle(4, 1.0)); }) == ErrorCode::SubThresholdSystem);
    Matrix split = Matrix::Zero(4, 4);
    split(0, 1) = split(1, 0) = 3.0;
    split(2, 3) = split(3, 2) = 3.0;
    CHECK(code_of([&] { single_virus_endemic(Vector::Ones(4), split); }) == ErrorCode::NotIrreducible);
}

TEST_CASE("boundary_equilibria lists the above-threshold viruses") {
    const auto ex = example_system(1);
    const auto bs = boundary_equilibria(ex);
    REQUIRE(bs.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(bs[static_cast<std::size_t>(k)].virus == k);
        CHECK(bs[static_cast<std::size_t>(k)].residual <= kFixedPointTol);
    }
    const Vector ones = Vector::Ones(4);
    const auto mixed = build_system({ones, ones, ones}, {cycle(4, 0.5), cycle(4, 2.0), cycle(4, 0.8)});
    const auto only = boundary_equilibria(mixed);
    REQUIRE(only.size() == 1);
    CHECK(only[0].virus == 1);
    CHECK((only[0].base_point.virus(1) - Vector::Constant(4, 0.5)).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("line construction gives a segment of equilibria") {
    const auto ex = example_system(3);
    const Vector z = Vector::Constant(4, 1.0 / 3.0);
    // C = (I - Z) B2 of the example has row sums 1 and so fixes z.
    const Matrix c = (Vector::Ones(4) - z).asDiagonal() * ex.infection(1);
    const auto [system, construction] = construct_line_system(ex.infection(0), ex.infection(2), c);
    CHECK((construction.z - z).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((system.infection(1) - ex.infection(1)).cwiseAbs().maxCoeff() <= 1e-10);
    double worst = 0.0;
    for (int j = 0; j <= 100; ++j) worst = std::max(worst, equilibrium_residual(system, line_point(construction.z, j / 100.0)));
    CHECK(worst <= 1e-12);

    const auto recovered = line_construction_of(ex);
    CHECK((recovered.c - c).cwiseAbs().maxCoeff() <= 1e-10);
    const auto d = line_descriptor(ex, recovered);
    CHECK(d.kind == EquilibriumKind::LineSegment);
    CHECK(d.residual <= 1e-12);

    CHECK(code_of([&] { line_point(z, 1.5); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([&] { line_construction_of(example_system(1)); }) == ErrorCode::ConstructionMismatch);
}

TEST_CASE("line construction rejects C without z as fixed vector") {
    const auto ex = example_system(3);
    const Matrix bad = cycle(4, 1.2);
    CHECK(code_of([&] { construct_line_system(ex.infection(0), ex.infection(2), bad); }) ==
          ErrorCode::EigvecMismatch);
}

TEST_CASE("random line constructions from doubly stochastic-like C") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + trial % 3;
        const Matrix b1 = oracle::random_irreducible(rng, n, 0.5, 2.0) + cycle(n, 1.0);
        const Matrix b3 = oracle::random_irreducible(rng, n, 0.5);
        const Vector z = single_virus_endemic(Vector::Ones(n), b1);
        // C = Z S Z^{-1} with S row-stochastic fixes z.
        Matrix s = oracle::random_irreducible(rng, n, 0.5);
        for (int i = 0; i < n; ++i) s.row(i) /= s.row(i).sum();
        const Matrix c = z.asDiagonal() * s * z.cwiseInverse().asDiagonal();
        const auto [system, construction] = construct_line_system(b1, b3, c);
        double worst = 0.0;
        for (int j = 0; j <= 100; ++j) {
            worst = std::max(worst, equilibrium_residual(system, line_point(construction.z, j / 100.0)));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("plane of equilibria for identical viruses") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 4;
    const Vector d = oracle::random_healing(rng, n, 0.3, 0.6);
    const Matrix b = oracle::random_irreducible(rng, n, 0.6, 1.5);
    const auto system = build_system({d, d, d}, {b, b, b});
    const Vector x = single_virus_endemic(d, b);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w{u(rng), u(rng), u(rng)};
        const double total = w[0] + w[1] + w[2];
        for (auto& v : w) v /= total;
        worst = std::max(worst, equilibrium_residual(system, plane_point(x, w)));
        const auto p = plane_projection(x, plane_point(x, w));
        CHECK(p.residual <= 1e-14);
        for (int k = 0; k < 3; ++k) CHECK(p.alpha[static_cast<std::size_t>(k)] == doctest::Approx(w[static_cast<std::size_t>(k)]));
    }
    CHECK(worst <= 1e-12);
    CHECK(plane_descriptor(system, x, {0.2, 0.3, 0.5}).residual <= 1e-12);
}

TEST_CASE("classify_equilibrium") {
    const auto ex = example_system(1);
    CHECK(classify_equilibrium(ex, SystemState::zeros(4, 3)).kind == EquilibriumKind::DFE);
    const auto bs = boundary_equilibria(ex);
    const auto c = classify_equilibrium(ex, bs[1].base_point);
    CHECK(c.kind == EquilibriumKind::Boundary);
    CHECK(c.virus == 1);
    const auto ex4 = example_system(4);
    const auto line = line_construction_of(ex4);
    CHECK(classify_equilibrium(ex4, line_point(line.z, 0.3)).kind == EquilibriumKind::CoexistencePoint);
    CHECK(code_of([&] { classify_equilibrium(ex, SystemState(4, 3, Vector::Constant(12, 0.1))); }) ==
          ErrorCode::NotAnEquilibrium);
}

TEST_CASE("find_coexistence in the sub-threshold regime returns the DFE") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 4;
        std::vector<Vector> ds;
        std::vector<Matrix> bs;
        for (int k = 0; k < 3; ++k) {
            ds.push_back(Vector::Ones(n));
            Matrix b = oracle::random_irreducible(rng, n, 0.5);
            b *= 0.8 / perron(b).rho;
            bs.push_back(b);
        }
        const auto s = build_system(ds, bs);
        CHECK(boundary_equilibria(s).empty());
        const auto d = find_coexistence(s, oracle::random_interior(rng, n, 3));
        CHECK(d.kind == EquilibriumKind::DFE);
        CHECK(d.residual <= kNewtonTol);
    }
}

TEST_CASE("find_coexistence converges to a nearby boundary equilibrium and to the line") {
    const auto ex = example_system(1);
    const auto bs = boundary_equilibria(ex);
    SystemState start = bs[0].base_point;
    start.x.head(4) *= 0.95;
    const auto d = find_coexistence(ex, start);
    CHECK(d.kind == EquilibriumKind::Boundary);
    CHECK((d.base_point.x - bs[0].base_point.x).lpNorm<Eigen::Infinity>() <= 1e-8);

    const auto ex4 = example_system(4);
    const auto line = line_construction_of(ex4);
    SystemState near = line_point(line.z, 0.4);
    near.x.array() *= 1.01;
    const auto e = find_coexistence(ex4, near);
    CHECK(e.residual <= kNewtonTol);
}

TEST_CASE("find_coexistence errors") {
    const auto ex = example_system(1);
    NewtonOptions none;
    none.max_iter = 0;
    CHECK(code_of([&] { find_coexistence(ex, SystemState(4, 3, Vector::Constant(12, 0.2)), none); }) ==
          ErrorCode::NoConvergence);
    CHECK(code_of([&] { find_coexistence(ex, SystemState(4, 3, Vector::Constant(12, 0.5))); }) ==
          ErrorCode::InitialStateOutsideDomain);
}
