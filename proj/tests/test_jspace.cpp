#include <catch2/catch_amalgamated.hpp>

#include "derivlab/jspace.hpp"

#include "oracles.hpp"

using namespace derivlab;

TEST_CASE("j_norm on pinned sequences") {
    // single slot in the (l2, l2) couple
    JSequence s;
    s.couple = dual_couple(SpaceDescriptor::lp_space(2.0, 8));
    s.set_slot(0, SeqVector::unit(1));
    REQUIRE(j_norm(s) == 1.0);

    // two slots in (l1, l1) with q0 = q1 = 1: branches 1+1 and 1 + e
    JSequence two;
    two.couple = {SpaceDescriptor::lp_space(1.0, 8), SpaceDescriptor::lp_space(1.0, 8)};
    two.q0 = two.q1 = 1.0;
    two.set_slot(0, SeqVector::unit(1));
    two.set_slot(1, SeqVector::unit(1));
    const auto [b0, b1] = j_norm_branches(two);
    REQUIRE(b0 == 2.0);
    REQUIRE(b1 == 1.0 + std::exp(1.0));
    REQUIRE(j_norm(two) == 1.0 + std::exp(1.0));

    // weighted single slot at offset N: branches e^{-N/2}||a||_B0, e^{N/2}||a||_B1
    SplitMix64 rng(9);
    for (int t = 0; t < 30; ++t) {
        const SeqVector a = oracle::random_vector(rng, 6);
        const int N = rng.next_int(-6, 6);
        JSequence w;
        w.couple = dual_couple(SpaceDescriptor::c0_space(6));
        w.set_slot(N, a.scaled(slot_scale(N, 0.5)));
        const auto [w0, w1] = j_norm_branches(w);
        REQUIRE(w0 == Catch::Approx(std::exp(-N / 2.0) * space_norm(w.couple.b0, a)).epsilon(1e-12));
        REQUIRE(w1 == Catch::Approx(std::exp(+N / 2.0) * space_norm(w.couple.b1, a)).epsilon(1e-12));
    }
}

TEST_CASE("delta: evaluation map") {
    JSequence s;
    s.couple = dual_couple(SpaceDescriptor::lp_space(2.0, 8));
    const SeqVector a({{1, 0.7}, {3, -0.2}});
    s.set_slot(0, a);
    REQUIRE(delta(s, 0.5) == a);

    // telescoping weight: slot e^{-N theta} a at offset N evaluates back to a
    SplitMix64 rng(10);
    for (int t = 0; t < 30; ++t) {
        const SeqVector v = oracle::random_vector(rng, 6);
        const int N = rng.next_int(-5, 5);
        const double theta = 0.2 + 0.6 * rng.next_double();
        JSequence w;
        w.couple = s.couple;
        w.set_slot(N, v.scaled(slot_scale(N, theta)));
        REQUIRE(rel_l2_error(delta(w, theta), v) <= 1e-12);
    }

    JSequence pair;
    pair.couple = s.couple;
    pair.set_slot(0, SeqVector::unit(1));
    pair.set_slot(1, SeqVector::unit(2));
    const SeqVector d = delta(pair, 0.5);
    REQUIRE(d.at(1) == 1.0);
    REQUIRE(d.at(2) == std::exp(0.5));

    REQUIRE_THROWS_AS(delta(pair, 1.5), std::invalid_argument);
}

TEST_CASE("delta_prime: derivation weights") {
    JSequence s;
    s.couple = dual_couple(SpaceDescriptor::lp_space(2.0, 8));
    s.set_slot(0, SeqVector::ones(4));
    REQUIRE(delta_prime(s, 0.5).empty());  // factor n kills the n = 0 slot

    // slots b_1 = e_1, b_{-1} = e_1 at theta = 1/2: (1 - e^{-1}) e_1
    JSequence two;
    two.couple = s.couple;
    two.set_slot(1, SeqVector::unit(1));
    two.set_slot(-1, SeqVector::unit(1));
    const SeqVector dp = delta_prime(two, 0.5);
    REQUIRE(dp.at(1) == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));

    // single weighted slot at N: N e^{-theta} a
    SplitMix64 rng(12);
    for (int t = 0; t < 30; ++t) {
        const SeqVector a = oracle::random_vector(rng, 6);
        const int N = rng.next_int(-5, 5);
        const double theta = 0.2 + 0.6 * rng.next_double();
        JSequence w;
        w.couple = s.couple;
        w.set_slot(N, a.scaled(slot_scale(N, theta)));
        const SeqVector got = delta_prime(w, theta);
        const SeqVector want = a.scaled(static_cast<double>(N) * std::exp(-theta));
        REQUIRE(rel_l2_error(got, want) <= 1e-12);
    }
}

TEST_CASE("delta shift covariance") {
    SplitMix64 rng(13);
    for (int t = 0; t < 50; ++t) {
        JSequence s;
        s.couple = dual_couple(SpaceDescriptor::lp_space(2.0, 8));
        for (int k = -3; k <= 3; ++k)
            if (rng.next_double() < 0.6) s.set_slot(k, oracle::random_vector(rng, 6));
        if (s.slots.empty()) continue;
        const double theta = 0.2 + 0.6 * rng.next_double();
        const SeqVector lhs = delta(shift_slots(s, 1), theta);
        const SeqVector rhs = delta(s, theta).scaled(std::exp(theta));
        REQUIRE(rel_l2_error(lhs, rhs) <= 1e-13);
    }
}

TEST_CASE("single-slot selector") {
    const Couple couple = dual_couple(SpaceDescriptor::c0_space(8));
    SplitMix64 rng(14);
    for (int t = 0; t < 40; ++t) {
        const SeqVector a = oracle::random_vector(rng, 8);
        const int fl = rng.next_int(0, 3);
        const int sign = rng.next_sign() > 0 ? 1 : -1;
        const auto rep = single_slot_selector(a, couple, fl, sign);
        REQUIRE(rep.slot_offset == sign * 2 * fl);
        REQUIRE(rel_l2_error(rep.reconstruct(), a) <= 1e-12);
        if (fl == 0) REQUIRE(rep.derivation().empty());
    }
    REQUIRE_THROWS_AS(single_slot_selector(SeqVector{}, couple, 1, -1), std::invalid_argument);
    REQUIRE(single_slot_selector(SeqVector::unit(1), couple, 1, -1, 0.4).experimental_theta);
}

TEST_CASE("Lions-Peetre selector") {
    // parameter arithmetic: p0 = 1, p1 = 4, theta = 2/3 gives p = 2, lambda = 3/2
    REQUIRE(lions_peetre_p(1.0, 4.0, 2.0 / 3.0) == Catch::Approx(2.0).epsilon(1e-15));
    REQUIRE(lions_peetre_lambda(1.0, 4.0, 2.0 / 3.0) == Catch::Approx(1.5).epsilon(1e-15));

    // normalized unit vector sits in slot 0 and derives to zero
    const auto e1 = lions_peetre_selector(SeqVector::unit(1), 1.0, 4.0, 2.0 / 3.0);
    REQUIRE(e1.jseq.slots.size() == 1);
    REQUIRE(e1.jseq.slots.count(0) == 1);
    REQUIRE(e1.derivation().empty());

    SplitMix64 rng(15);
    for (int t = 0; t < 60; ++t) {
        const SeqVector a = oracle::random_vector(rng, 8);
        const double ps[3] = {1.0, 2.0, 4.0};
        const double p0 = ps[rng.next_int(0, 2)];
        double p1 = ps[rng.next_int(0, 2)];
        if (p0 == p1) p1 = p0 == 1.0 ? 4.0 : 1.0;
        const double theta = 0.25 + 0.5 * rng.next_double();
        const auto rep = lions_peetre_selector(a, p0, p1, theta);
        REQUIRE(rel_l2_error(rep.reconstruct(), a) <= 1e-12);
        // the floor quantization leaves the unweighted branch exactly bounded
        // and costs at most e^{1-theta} on the weighted branch
        const auto [b0, b1] = j_norm_branches(rep.jseq);
        REQUIRE(b0 <= rep.target_norm * (1.0 + 1e-9));
        REQUIRE(b1 <= rep.target_norm * std::exp(1.0 - theta) * (1.0 + 1e-9));
        REQUIRE(rep.bound_ratio <= std::exp(1.0 - theta) * (1.0 + 1e-9));
    }

    const auto degen = lions_peetre_selector(SeqVector::ones(3), 2.0, 2.0, 0.5);
    REQUIRE(degen.degenerate);
    REQUIRE(degen.derivation().empty());
    REQUIRE(rel_l2_error(degen.reconstruct(), SeqVector::ones(3)) <= 1e-12);
}

TEST_CASE("one-slot property of the lq pseudolattice") {
    const auto r22 = check_single_slot_property(dual_couple(SpaceDescriptor::lp_space(2.0, 8)),
                                                2.0, 2.0, 100, 99);
    REQUIRE(r22.max_deviation_b0 == 0.0);
    REQUIRE(r22.max_deviation_b1 == 0.0);

    const auto r13 = check_single_slot_property(dual_couple(SpaceDescriptor::lp_space(1.0, 8)),
                                                1.0, 3.0, 100, 99);
    REQUIRE(r13.max_deviation_b0 == 0.0);
    REQUIRE(r13.max_deviation_b1 == 0.0);

    const auto rt2 = check_single_slot_property(dual_couple(SpaceDescriptor::tsirelson2_space(8)),
                                                2.0, 2.0, 40, 99);
    REQUIRE(rt2.max_deviation_b0 == 0.0);
    REQUIRE(rt2.max_deviation_b1 == 0.0);
}

TEST_CASE("canonical duals") {
    REQUIRE(canonical_dual(SpaceDescriptor::c0_space(8)).kind == SpaceKind::lp);
    REQUIRE(canonical_dual(SpaceDescriptor::lp_space(1.0, 8)).kind == SpaceKind::c0);
    REQUIRE(canonical_dual(SpaceDescriptor::lp_space(4.0, 8)).p == Catch::Approx(4.0 / 3.0));
    REQUIRE(canonical_dual(SpaceDescriptor::tsirelson2_space(8)).is_dual());
    const auto dd = canonical_dual(canonical_dual(SpaceDescriptor::tsirelson2_space(8)));
    REQUIRE(dd.kind == SpaceKind::tsirelson2);
}
