#include <catch2/catch_amalgamated.hpp>

#include "derivlab/twisted.hpp"

#include "oracles.hpp"

using namespace derivlab;

TEST_CASE("derived quasi-norm: pinned values") {
    const DerivationMap kp = DerivationMap::kalton_peck();

    SplitMix64 rng(41);
    for (int t = 0; t < 40; ++t) {
        const SeqVector x = oracle::random_vector(rng, 8);
        REQUIRE(derived_quasinorm({x, SeqVector{}}, kp) == x.norm_l2());  // j is isometric

        const SeqVector y = oracle::random_vector(rng, 8);
        const SeqVector oy = apply(kp, y);
        REQUIRE(derived_quasinorm({oy, y}, kp) == y.norm_l2());  // exact cancellation
    }

    // (e1, e2) with kalton_peck: Omega(e2) = 0, so the value is 1 + 1
    REQUIRE(derived_quasinorm({SeqVector::unit(1), SeqVector::unit(2)}, kp) == 2.0);
}

TEST_CASE("short exact sequence") {
    const DerivationMap kp = DerivationMap::kalton_peck();
    SplitMix64 rng(42);
    for (int t = 0; t < 40; ++t) {
        const SeqVector x = oracle::random_vector(rng, 8);
        const SeqVector y = oracle::random_vector(rng, 8);
        REQUIRE(quotient(inclusion(x)).empty());                      // q o j = 0
        REQUIRE(derived_quasinorm(inclusion(x), kp) == x.norm_l2());  // isometric
        REQUIRE(quotient({x, y}) == y);
        REQUIRE(y.norm_l2() <= derived_quasinorm({x, y}, kp));        // contractive quotient
    }
}

TEST_CASE("natural basis vectors") {
    const auto v1 = basis_vector(1);
    REQUIRE(v1.x == SeqVector::unit(1));
    REQUIRE(v1.y.empty());
    const auto v2 = basis_vector(2);
    REQUIRE(v2.x.empty());
    REQUIRE(v2.y == SeqVector::unit(1));
    const auto v4 = basis_vector(4);
    REQUIRE(v4.y == SeqVector::unit(2));
    REQUIRE_THROWS_AS(basis_vector(0), std::invalid_argument);
}

TEST_CASE("zero map turns the derived space into a direct sum") {
    const DerivationMap zero = DerivationMap::zero_map();
    SplitMix64 rng(43);
    for (int t = 0; t < 40; ++t) {
        const SeqVector x = oracle::random_vector(rng, 8);
        const SeqVector y = oracle::random_vector(rng, 8);
        REQUIRE(derived_quasinorm({x, y}, zero) == x.norm_l2() + y.norm_l2());
    }
    REQUIRE(quasi_triangle_constant(zero, 8, 500, 11) == 1.0);
}

TEST_CASE("quasi-norm homogeneity") {
    const DerivationMap kp = DerivationMap::kalton_peck();
    SplitMix64 rng(44);
    for (int t = 0; t < 40; ++t) {
        const SeqVector x = oracle::random_vector(rng, 8);
        const SeqVector y = oracle::random_vector(rng, 8);
        const double base = derived_quasinorm({x, y}, kp);
        // power-of-two scaling factors through kalton_peck exactly
        REQUIRE(derived_quasinorm({x.scaled(4.0), y.scaled(4.0)}, kp) == 4.0 * base);
        const double c = std::abs(rng.next_gaussian()) + 0.3;
        REQUIRE(derived_quasinorm({x.scaled(c), y.scaled(c)}, kp) ==
                Catch::Approx(c * base).epsilon(1e-12));
    }
}

TEST_CASE("quasi-triangle constant for kalton_peck") {
    const DerivationMap kp = DerivationMap::kalton_peck();
    const double c1 = quasi_triangle_constant(kp, 16, 4000, 7);
    REQUIRE(c1 > 1.0);
    REQUIRE(c1 < 4.0);
    // stable within a few percent across seeds
    const double c2 = quasi_triangle_constant(kp, 16, 4000, 8);
    REQUIRE(std::abs(c1 - c2) <= 0.05 * std::max(c1, c2));
    // scaling both arguments leaves the ratio unchanged (homogeneity)
    const double c3 = quasi_triangle_constant(kp, 16, 4000, 7);
    REQUIRE(c1 == c3);
}

TEST_CASE("even-index basis is exactly unconditional for sign-equivariant maps") {
    REQUIRE(unconditionality_estimate(DerivationMap::kalton_peck(), 8, 20, 3) == 1.0);
    REQUIRE(unconditionality_estimate(DerivationMap::zero_map(), 8, 20, 3) == 1.0);
    REQUIRE(unconditionality_estimate(DerivationMap::rank_j(1.0, 2.0, 0.5), 8, 20, 3) == 1.0);
}
