#include <catch2/catch_amalgamated.hpp>

#include "derivlab/dual_norm.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"
#include "derivlab/spaces.hpp"
#include "derivlab/tsirelson.hpp"

#include "oracles.hpp"

using namespace derivlab;

TEST_CASE("SeqVector canonical form") {
    SeqVector v;
    v.set(3, 1.5);
    v.set(1, 2.0);
    v.set(3, 0.0);
    REQUIRE(v.support_size() == 1);
    REQUIRE(v.at(1) == 2.0);
    REQUIRE(v.at(3) == 0.0);
    REQUIRE(v.max_index() == 1);
    REQUIRE_THROWS_AS(SeqVector::unit(0), std::invalid_argument);
    REQUIRE_THROWS_AS(SeqVector({{2, 1.0}, {2, 3.0}}), std::invalid_argument);

    const SeqVector a({{1, 1.0}, {4, -2.0}});
    const SeqVector b({{4, 2.0}, {6, 3.0}});
    const SeqVector s = a.plus(b);
    REQUIRE(s.at(4) == 0.0);          // exact cancellation drops the entry
    REQUIRE(s.support_size() == 2);
    REQUIRE(a.hadamard(b).at(4) == -4.0);
    REQUIRE(a.dot(b) == -4.0);
}

TEST_CASE("lp, c0 and weighted-l2 norms") {
    const SeqVector v = SeqVector::unit(5, 3.0);
    REQUIRE(primal_norm(SpaceDescriptor::lp_space(2.0), v) == 3.0);
    REQUIRE(primal_norm(SpaceDescriptor::c0_space(), SeqVector::ones(4)) == 1.0);
    REQUIRE_THROWS_AS(SpaceDescriptor::lp_space(0.5), std::invalid_argument);

    const auto w = SpaceDescriptor::weighted_l2_space({1.0, 2.0, 4.0}, 8);
    REQUIRE(primal_norm(w, SeqVector::unit(3)) == 0.25);
    REQUIRE(primal_norm(w, SeqVector::unit(2).plus(SeqVector::unit(3))) ==
            Catch::Approx(std::sqrt(0.25 + 0.0625)).margin(1e-15));
    REQUIRE_THROWS_AS(SpaceDescriptor::weighted_l2_space({0.5}), std::invalid_argument);
}

TEST_CASE("space grammar round trip") {
    for (const char* s : {"c0", "l1", "T", "T2", "lp:3", "dual:T2", "dual:lp:1.5"}) {
        const auto d = parse_space(s, 16);
        // to_string is parseable and stable
        const auto d2 = parse_space(d.to_string(), 16);
        REQUIRE(d2.to_string() == d.to_string());
    }
    REQUIRE(parse_space("l1").kind == SpaceKind::lp);
    REQUIRE(parse_space("dual:c0").inner->kind == SpaceKind::c0);
    REQUIRE_THROWS_AS(parse_space("lq:2"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_space("lp:zzz"), std::invalid_argument);
}

TEST_CASE("Tsirelson norm: pinned values") {
    REQUIRE(tsirelson_norm(SeqVector::unit(1)) == 1.0);
    const SeqVector e34 = SeqVector::unit(3).plus(SeqVector::unit(4));
    REQUIRE(tsirelson_norm(e34) == oracle::tsirelson_bruteforce(e34));
    REQUIRE(tsirelson_norm(e34) == 1.0);

    for (int n : {2, 4, 8}) {
        SeqVector block;
        for (int j = n + 1; j <= 2 * n; ++j) block.set(j, 1.0);
        const double dp = tsirelson_norm(block);
        const double bf = oracle::tsirelson_bruteforce(block);
        REQUIRE(dp == bf);
        REQUIRE(dp == Catch::Approx(n / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("Tsirelson DP equals successive-set brute force") {
    SplitMix64 rng(42);
    for (int t = 0; t < 60; ++t) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        SeqVector x;
        for (int j = 1; j <= n; ++j)
            if (rng.next_double() < 0.8) x.set(j, rng.next_gaussian());
        if (x.empty()) continue;
        const double dp = tsirelson_norm(x);
        const double bf = oracle::tsirelson_bruteforce(x);
        REQUIRE(dp == Catch::Approx(bf).epsilon(1e-13).margin(1e-300));
    }
    // dyadic coefficients: both routes combine exact halves, equality is exact
    SplitMix64 rng2(43);
    for (int t = 0; t < 40; ++t) {
        const int n = 1 + static_cast<int>(rng2.next_u64() % 6);
        SeqVector x;
        for (int j = 1; j <= n; ++j) {
            const double vals[3] = {0.5, 1.0, 2.0};
            if (rng2.next_double() < 0.8) x.set(j, vals[rng2.next_int(0, 2)]);
        }
        if (x.empty()) continue;
        REQUIRE(tsirelson_norm(x) == oracle::tsirelson_bruteforce(x));
    }
}

TEST_CASE("T2 norm is the square-rooted T norm of the squares") {
    const SeqVector v = SeqVector::unit(3).plus(SeqVector::unit(4)).scaled(1.0 / std::sqrt(2.0));
    const double t2 = primal_norm(SpaceDescriptor::tsirelson2_space(), v);
    REQUIRE(t2 == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    REQUIRE(primal_norm(SpaceDescriptor::tsirelson2_space(), SeqVector::ones(4)) == 1.0);
}

TEST_CASE("argmax functional attains the DP norm") {
    SplitMix64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 12);
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (auto& v : x)
            if (rng.next_double() < 0.85) v = std::abs(rng.next_gaussian());
        const double norm = tsirelson_norm_dense(x);
        const auto f = tsirelson_argmax_functional(x);
        double pairing = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) pairing += f[i] * x[i];
        REQUIRE(pairing == Catch::Approx(norm).epsilon(1e-13).margin(1e-300));
    }
}

TEST_CASE("norming functional sets: small cases and induced norm") {
    const auto& one = norming_functionals(1);
    REQUIRE(one.functionals.size() == 1);
    REQUIRE(one.functionals[0] == std::vector<double>{1.0});

    const auto& two = norming_functionals(2);  // (1/2)e2* is dominated away
    REQUIRE(two.functionals.size() == 2);

    const auto& four = norming_functionals(4);
    std::vector<double> e34{0.0, 0.0, 1.0, 1.0};
    REQUIRE(four.induced_norm(e34) == 1.0);

    const auto& nine = norming_functionals(9);
    SplitMix64 rng(11);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> x(9, 0.0);
        for (auto& v : x)
            if (rng.next_double() < 0.85) v = rng.next_double();
        const double a = nine.induced_norm(x);
        const double b = tsirelson_norm_dense(x);
        REQUIRE(a == Catch::Approx(b).epsilon(1e-12).margin(1e-300));
    }
    REQUIRE(nine.generation_depth >= 2);

    try {
        norming_functionals(20, 16);
        FAIL("expected length_error");
    } catch (const std::length_error& e) {
        REQUIRE(std::string(e.what()).find("estimated set cardinality") != std::string::npos);
    }
}

TEST_CASE("1-unconditionality and homogeneity across kinds") {
    std::vector<SpaceDescriptor> spaces = {
        SpaceDescriptor::lp_space(1.0, 10), SpaceDescriptor::lp_space(2.5, 10),
        SpaceDescriptor::c0_space(10),      SpaceDescriptor::tsirelson_space(10),
        SpaceDescriptor::tsirelson2_space(10),
        SpaceDescriptor::weighted_l2_space({1, 1.5, 2, 2.5, 3, 3, 3, 4, 4, 4}, 10)};
    SplitMix64 rng(5);
    for (const auto& s : spaces) {
        for (int t = 0; t < 30; ++t) {
            SeqVector v = oracle::random_vector(rng, 10);
            SeqVector flipped;
            for (const auto& [j, x] : v.entries()) flipped.set(j, rng.next_sign() * x);
            REQUIRE(primal_norm(s, v.abs()) == primal_norm(s, flipped));
            const double c = std::abs(rng.next_gaussian()) + 0.25;
            REQUIRE(primal_norm(s, v.scaled(c)) ==
                    Catch::Approx(c * primal_norm(s, v)).epsilon(1e-12));
        }
    }
}

TEST_CASE("bidual collapse matches the primal norm") {
    // closed-form route: dual of dual of lp:2.5 runs through the conjugate
    // exponent twice
    const auto lp = SpaceDescriptor::lp_space(2.5, 8);
    const auto bidual = SpaceDescriptor::dual_space(SpaceDescriptor::dual_space(lp));
    SplitMix64 rng(17);
    for (int t = 0; t < 30; ++t) {
        const SeqVector v = oracle::random_vector(rng, 8);
        REQUIRE(space_norm(bidual, v) == Catch::Approx(space_norm(lp, v)).epsilon(1e-12));
    }
    // independent route for T: the bidual ball is the absolutely convex hull
    // of the norming functionals, so the bidual norm is the induced max
    const auto& nfs = norming_functionals(6);
    for (int t = 0; t < 50; ++t) {
        const SeqVector v = oracle::random_vector(rng, 6);
        const double via_hull = nfs.induced_norm(v.to_dense(6));
        REQUIRE(via_hull == Catch::Approx(tsirelson_norm(v)).epsilon(1e-12));
    }
}

TEST_CASE("support bound is enforced for dual_norm") {
    const auto s = SpaceDescriptor::lp_space(2.0, 4);
    REQUIRE_THROWS_AS(dual_norm(s, SeqVector::unit(5)), std::invalid_argument);
}
