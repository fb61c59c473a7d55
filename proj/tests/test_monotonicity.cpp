#include <doctest.h>

#include <random>

#include "oracles/random_systems.hpp"
#include "trivirus/examples.hpp"
#include "trivirus/monotonicity.hpp"

using namespace trivirus;

namespace {

MultiVirusSystem restrict_to(const MultiVirusSystem& s, int m) {
    std::vector<Vector> d(s.healing().begin(), s.healing().begin() + m);
    std::vector<Matrix> b(s.infection().begin(), s.infection().begin() + m);
    return build_system(d, b);
}

} // namespace

TEST_CASE("tri-virus example graph is inconsistent with a three-cycle witness") {
    const auto ex = example_system(1);
    const auto g = signed_jacobian_graph(ex);
    CHECK(g.node_count == 12);
    const auto v = is_consistent(g);
    CHECK_FALSE(v.consistent);
    REQUIRE(v.witness_cycle.size() == 3);
    CHECK(cycle_sign(g, v.witness_cycle) == -1);
    // The witness joins one node across the three layers.
    const int node = v.witness_cycle[0] % 4;
    for (int x : v.witness_cycle) CHECK(x % 4 == node);
    CHECK(v.gauge.empty());
}

TEST_CASE("bivirus and single-virus restrictions are consistent") {
    const auto ex = example_system(2);
    const auto g2 = signed_jacobian_graph(restrict_to(ex, 2));
    const auto v2 = is_consistent(g2);
    CHECK(v2.consistent);
    CHECK(gauge_balances(g2, v2.gauge));
    for (int i = 0; i < 4; ++i) CHECK(v2.gauge[static_cast<std::size_t>(i)] == -v2.gauge[static_cast<std::size_t>(4 + i)]);

    const auto g1 = signed_jacobian_graph(restrict_to(ex, 1));
    const auto v1 = is_consistent(g1);
    CHECK(v1.consistent);
    CHECK(v1.gauge == std::vector<int>(4, 1));
}

TEST_CASE("randomized consistency properties") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 5;
        const auto tri = signed_jacobian_graph(oracle::random_system(rng, n, 3));
        const auto v3 = is_consistent(tri);
        CHECK_FALSE(v3.consistent);
        CHECK(cycle_sign(tri, v3.witness_cycle) == -1);
        const auto bi = signed_jacobian_graph(oracle::random_system(rng, n, 2));
        const auto v2 = is_consistent(bi);
        CHECK(v2.consistent);
        CHECK(gauge_balances(bi, v2.gauge));
    }
}

TEST_CASE("hand-built graphs") {
    SignedGraph plus{3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}};
    const auto v = is_consistent(plus);
    CHECK(v.consistent);
    CHECK(v.gauge == std::vector<int>{1, 1, 1});

    SignedGraph clash{2, {{0, 1, 1}, {1, 0, -1}}};
    const auto c = is_consistent(clash);
    CHECK_FALSE(c.consistent);
    CHECK(c.witness_cycle.size() == 2);
    CHECK(cycle_sign(clash, c.witness_cycle) == -1);

    // Square with one negative edge plus a negative triangle elsewhere: the
    // shorter odd cycle is reported.
    SignedGraph mixed{7, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, -1}, {4, 5, -1}, {5, 6, 1}, {6, 4, 1}, {3, 4, 1}}};
    const auto m = is_consistent(mixed);
    CHECK_FALSE(m.consistent);
    CHECK(m.witness_cycle.size() == 3);
    CHECK(cycle_sign(mixed, m.witness_cycle) == -1);

    SignedGraph balanced{4, {{0, 1, -1}, {1, 2, -1}, {2, 3, -1}, {3, 0, -1}}};
    const auto b = is_consistent(balanced);
    CHECK(b.consistent);
    CHECK(gauge_balances(balanced, b.gauge));
    CHECK_FALSE(gauge_balances(balanced, {1, 1, 1, 1}));
    CHECK(cycle_sign(balanced, {0, 2, 1}) == 0);
}
