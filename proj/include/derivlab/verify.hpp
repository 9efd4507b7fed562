#pragma once

// Built-in verification suites for the CLI: each check exercises one of the
// library's identities or inequalities on seeded data and reports pass/fail.
// Suites: norms, duality, selectors, closed-forms, centralizer, twisted,
// randsums, all.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "derivlab/config.hpp"
#include "derivlab/derivation.hpp"
#include "derivlab/dual_norm.hpp"
#include "derivlab/extremal.hpp"
#include "derivlab/jspace.hpp"
#include "derivlab/rand_sums.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/twisted.hpp"

namespace derivlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline SeqVector random_vector(SplitMix64& rng, int n, double density = 0.85) {
    SeqVector v;
    for (int j = 1; j <= n; ++j)
        if (rng.next_double() < density) v.set(j, rng.next_gaussian());
    if (v.empty()) v.set(1, 1.0);
    return v;
}

inline std::vector<SpaceDescriptor> builtin_spaces(int bound) {
    return {SpaceDescriptor::lp_space(1.0, bound), SpaceDescriptor::lp_space(2.0, bound),
            SpaceDescriptor::lp_space(3.0, bound), SpaceDescriptor::c0_space(bound),
            SpaceDescriptor::tsirelson_space(bound), SpaceDescriptor::tsirelson2_space(bound),
            SpaceDescriptor::weighted_l2_space(loglog_delta(bound), bound)};
}

inline std::vector<Couple> builtin_couples(int bound) {
    return {dual_couple(SpaceDescriptor::lp_space(2.0, bound)),
            dual_couple(SpaceDescriptor::c0_space(bound)),
            dual_couple(SpaceDescriptor::weighted_l2_space(loglog_delta(bound), bound)),
            dual_couple(SpaceDescriptor::tsirelson2_space(bound))};
}

inline void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
                const std::string& detail = "") {
    out.push_back({name, pass, detail});
}

} // namespace detail

inline std::vector<CheckResult> verify_norms(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const int n = std::min(cfg.support_cap, 8);
    SplitMix64 rng = split_stream(cfg.seed, 0x6e6f726dULL);

    bool uncond = true, homog = true;
    for (const auto& space : detail::builtin_spaces(n)) {
        for (int t = 0; t < 50; ++t) {
            SeqVector v = detail::random_vector(rng, n);
            SeqVector flipped;
            for (const auto& [j, x] : v.entries()) flipped.set(j, rng.next_sign() * x);
            if (space_norm(space, v.abs()) != space_norm(space, flipped)) uncond = false;
            const double t0 = std::abs(rng.next_gaussian()) + 0.1;
            const double a = space_norm(space, v.scaled(t0));
            const double b = t0 * space_norm(space, v);
            if (std::abs(a - b) > 1e-12 * std::max(std::abs(b), 1e-300)) homog = false;
        }
    }
    detail::add(out, "norms/1-unconditionality-exact", uncond);
    detail::add(out, "norms/homogeneity-1e-12", homog);

    const SeqVector block4 = [] {
        SeqVector v;
        for (int j = 5; j <= 8; ++j) v.set(j, 1.0);
        return v;
    }();
    detail::add(out, "norms/tsirelson-values",
                tsirelson_norm(SeqVector::unit(1)) == 1.0 &&
                    tsirelson_norm(SeqVector::unit(3).plus(SeqVector::unit(4))) == 1.0 &&
                    tsirelson_norm(block4) == 2.0,
                "e1, e3+e4, block(5..8)");

    const auto& nfs = norming_functionals(n);
    bool induced = true;
    for (int t = 0; t < 200; ++t) {
        SeqVector v = detail::random_vector(rng, n).abs();
        const double a = nfs.induced_norm(v.to_dense(n));
        const double b = tsirelson_norm(v);
        if (std::abs(a - b) > 1e-12 * std::max(b, 1e-300)) induced = false;
    }
    detail::add(out, "norms/functional-set-induces-dp-norm", induced,
                std::to_string(nfs.functionals.size()) + " functionals at n=" + std::to_string(n));

    bool duals_ok = true;
    for (const auto& space : detail::builtin_spaces(n)) {
        for (int t = 0; t < 20; ++t) {
            SeqVector v = detail::random_vector(rng, n);
            const auto est = dual_norm(space, v, cfg.dual_tolerance);
            if (est.lower > est.upper + 1e-12) duals_ok = false;
            if (est.certified &&
                (est.upper - est.lower) > cfg.dual_tolerance * std::max(est.upper, 1e-300) + 1e-15)
                duals_ok = false;
        }
    }
    detail::add(out, "norms/dual-certificates", duals_ok);
    return out;
}

inline std::vector<CheckResult> verify_duality(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const int n = std::min(cfg.support_cap, 6);
    ExtremalOptions opt;
    opt.seed = cfg.seed;
    opt.dual_tolerance = std::min(cfg.dual_tolerance, 1e-7);
    SplitMix64 rng = split_stream(cfg.seed, 0x6475616cULL);
    for (const auto& couple : detail::builtin_couples(n)) {
        const auto kr = kappa_segment(couple.b0, n, opt);
        const auto ks = kappa_star_segment(couple.b0, n, opt);
        bool chain = true;
        for (int t = 0; t < 200; ++t) {
            const SeqVector b = detail::random_vector(rng, n);
            const double l2 = b.norm_l2();
            const double nb = space_norm(couple.b0, b, opt.dual_tolerance);
            const double nbs = space_norm(couple.b1, b, opt.dual_tolerance);
            const double slack = 1.0 + 1e-6;
            chain &= nbs / kr.value <= l2 * slack;
            chain &= l2 <= kr.value * nb * slack;
            chain &= nb / ks.value <= l2 * slack;
            chain &= l2 <= ks.value * nbs * slack;
        }
        detail::add(out, "duality/sandwich-" + couple.b0.to_string(), chain,
                    "kappa=" + std::to_string(kr.value) + " kappa*=" + std::to_string(ks.value));
    }
    return out;
}

inline std::vector<CheckResult> verify_selectors(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const int n = std::min(cfg.support_cap, 8);
    SplitMix64 rng = split_stream(cfg.seed, 0x73656cULL);

    bool recon = true, bound = true;
    for (int t = 0; t < 100; ++t) {
        const SeqVector a = detail::random_vector(rng, n);
        const double p0 = 1.0 + 3.0 * rng.next_double();
        const double p1 = 1.0 + 3.0 * rng.next_double();
        const double theta = 0.2 + 0.6 * rng.next_double();
        const auto lp = lions_peetre_selector(a, p0, p1, theta);
        recon &= rel_l2_error(lp.reconstruct(), a) <= 1e-12;
        // unweighted branch bounded by 1; the floor costs e^{1-theta} on the
        // weighted branch
        const auto [b0, b1] = j_norm_branches(lp.jseq);
        bound &= b0 <= lp.target_norm * (1.0 + 1e-9);
        bound &= lp.bound_ratio <= std::exp(1.0 - theta) * (1.0 + 1e-9);
        const auto ss = single_slot_selector(a, dual_couple(SpaceDescriptor::c0_space(n)),
                                             rng.next_int(0, 2), rng.next_sign() > 0 ? 1 : -1);
        recon &= rel_l2_error(ss.reconstruct(), a) <= 1e-12;
    }
    detail::add(out, "selectors/reconstruction-1e-12", recon);
    detail::add(out, "selectors/lions-peetre-floored-bound", bound);

    bool bo = true;
    for (const auto& couple : detail::builtin_couples(6)) {
        const auto rep = check_single_slot_property(couple, 2.0, 2.0, 50, cfg.seed);
        bo &= rep.max_deviation_b0 == 0.0 && rep.max_deviation_b1 == 0.0;
    }
    {
        const auto rep =
            check_single_slot_property(dual_couple(SpaceDescriptor::lp_space(1.0, 8)), 1.0, 3.0, 50, cfg.seed);
        bo &= rep.max_deviation_b0 == 0.0 && rep.max_deviation_b1 == 0.0;
    }
    detail::add(out, "selectors/one-slot-branches-exact", bo);

    bool shift_ok = true;
    for (int t = 0; t < 50; ++t) {
        JSequence s;
        s.couple = dual_couple(SpaceDescriptor::lp_space(2.0, n));
        for (int k = -3; k <= 3; ++k)
            if (rng.next_double() < 0.5) s.set_slot(k, detail::random_vector(rng, n));
        if (s.slots.empty()) continue;
        const double theta = 0.2 + 0.6 * rng.next_double();
        const SeqVector lhs = delta(shift_slots(s, 1), theta);
        const SeqVector rhs = delta(s, theta).scaled(std::exp(theta));
        shift_ok &= rel_l2_error(lhs, rhs) <= 1e-13;
    }
    detail::add(out, "selectors/delta-shift-covariance", shift_ok);
    return out;
}

inline std::vector<CheckResult> verify_closed_forms(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const int n = std::min(cfg.support_cap, 8);
    SplitMix64 rng = split_stream(cfg.seed, 0x636c6fULL);

    bool lp_match = true;
    for (int t = 0; t < 200; ++t) {
        const SeqVector a = detail::random_vector(rng, n);
        const double grid[3] = {1.0, 2.0, 4.0};
        const double p0 = grid[rng.next_int(0, 2)];
        double p1 = grid[rng.next_int(0, 2)];
        if (p0 == p1) p1 = (p0 == 1.0) ? 2.0 : 1.0;
        const double thetas[3] = {0.25, 0.5, 2.0 / 3.0};
        const double theta = thetas[rng.next_int(0, 2)];
        const SeqVector closed = omega_lions_peetre(a, p0, p1, theta);
        const SeqVector mach = lions_peetre_selector(a, p0, p1, theta).derivation();
        lp_match &= rel_l2_error(mach, closed) <= 1e-12;
    }
    detail::add(out, "closed-forms/lions-peetre-vs-machinery", lp_match);

    bool slot_match = true;
    ExtremalOptions opt;
    opt.seed = cfg.seed;
    for (const auto& couple : detail::builtin_couples(4)) {
        const auto res = omega_critical_real(couple, {1, 2, 3, 4}, opt);
        slot_match &= res.primal.machinery == res.primal.closed_form;
        slot_match &= res.dual.machinery == res.dual.closed_form;
    }
    detail::add(out, "closed-forms/critical-slot-bitwise", slot_match);

    SeqVector a16 = SeqVector::ones(16).scaled(0.25);
    const SeqVector kp = omega_kalton_peck(a16);
    const SeqVector expect = a16.scaled(-2.0 * std::log(4.0));
    detail::add(out, "closed-forms/kalton-peck-ones16", rel_l2_error(kp, expect) <= 1e-12);
    return out;
}

inline std::vector<CheckResult> verify_centralizer(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const int n = 8;
    SplitMix64 rng = split_stream(cfg.seed, 0x63656eULL);
    std::vector<DerivationMap> maps = {
        DerivationMap::kalton_peck(), DerivationMap::lions_peetre(1.0, 2.0, 0.5),
        DerivationMap::rank_j(1.0, 2.0, 0.5), DerivationMap::weighted_demo(loglog_delta(n))};
    bool sign_exact = true;
    for (const auto& map : maps) {
        for (int t = 0; t < 20; ++t) {
            const SeqVector b = detail::random_vector(rng, n);
            const SeqVector ob = apply(map, b);
            for (long pat = 0; pat < (1L << n); pat += 7) {
                SeqVector eb, expect;
                for (const auto& [j, v] : b.entries()) {
                    const double s = ((pat >> (j - 1)) & 1L) ? -1.0 : 1.0;
                    eb.set(j, s * v);
                }
                for (const auto& [j, v] : ob.entries()) {
                    const double s = ((pat >> (j - 1)) & 1L) ? -1.0 : 1.0;
                    expect.set(j, s * v);
                }
                if (!(apply(map, eb) == expect)) sign_exact = false;
            }
        }
    }
    detail::add(out, "centralizer/sign-equivariance-exact", sign_exact);

    const auto st = centralizer_defect_stats(DerivationMap::kalton_peck(), 32,
                                             std::min(cfg.trials, 2000), cfg.seed);
    detail::add(out, "centralizer/kalton-peck-defect-finite",
                std::isfinite(st.max_defect) && st.max_defect > 0.0,
                "max=" + std::to_string(st.max_defect));
    return out;
}

inline std::vector<CheckResult> verify_twisted(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const int n = 8;
    SplitMix64 rng = split_stream(cfg.seed, 0x747769ULL);
    const DerivationMap kp = DerivationMap::kalton_peck();
    const DerivationMap zero = DerivationMap::zero_map();

    bool exact_seq = true, zero_sum = true, homog = true;
    for (int t = 0; t < 100; ++t) {
        const SeqVector x = detail::random_vector(rng, n);
        const SeqVector y = detail::random_vector(rng, n);
        exact_seq &= quotient(inclusion(x)).empty();
        exact_seq &= derived_quasinorm(inclusion(x), kp) == x.norm_l2();
        exact_seq &= quotient({x, y}).norm_l2() <= derived_quasinorm({x, y}, kp);
        zero_sum &= derived_quasinorm({x, y}, zero) == x.norm_l2() + y.norm_l2();
        const DerivedVector v{x, y};
        const double t4 = 4.0;  // power of two: scaling is float-exact for kalton_peck
        homog &= derived_quasinorm({x.scaled(t4), y.scaled(t4)}, kp) == t4 * derived_quasinorm(v, kp);
    }
    detail::add(out, "twisted/exact-sequence", exact_seq);
    detail::add(out, "twisted/zero-map-direct-sum", zero_sum);
    detail::add(out, "twisted/quasinorm-homogeneity-pow2-exact", homog);

    detail::add(out, "twisted/unconditional-even-basis",
                unconditionality_estimate(kp, n, 20, cfg.seed) == 1.0);
    const double qtc = quasi_triangle_constant(kp, n, std::min(cfg.trials, 2000), cfg.seed);
    detail::add(out, "twisted/quasi-triangle-finite", qtc >= 1.0 && qtc < 10.0,
                "constant=" + std::to_string(qtc));
    return out;
}

inline std::vector<CheckResult> verify_randsums(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const SpaceDescriptor l2 = SpaceDescriptor::lp_space(2.0, 1 << 20);
    bool unit = true;
    for (int m = 1; m <= 8; ++m)
        unit &= type_constant_lower(l2, m, 2.0, 8, cfg.seed).lower_bound == 1.0;
    detail::add(out, "randsums/type2-l2-estimator-unit", unit);

    SplitMix64 rng = split_stream(cfg.seed, 0x726e64ULL);
    bool mc_ok = true;
    for (int t = 0; t < 5; ++t) {
        VectorFamily fam{{}, l2};
        const int m = 4 + t;
        for (int j = 0; j < m; ++j) fam.members.push_back(detail::random_vector(rng, 8));
        const double exact = rademacher_average(fam);
        const auto mc = rademacher_average_mc(fam, 20000, cfg.seed + t);
        mc_ok &= std::abs(mc.mean - exact) <= 3.0 * mc.standard_error + 1e-12;
    }
    detail::add(out, "randsums/mc-within-3-stderr", mc_ok);

    const Couple l2c = dual_couple(l2);
    std::vector<SeqVector> family;
    for (int j = 1; j <= 4; ++j) family.push_back(detail::random_vector(rng, 8));
    const auto rd = randoma_defect(DerivationMap::zero_map(), l2c, 2.0, 0.5, 2.0, family, false, 8, cfg.seed);
    detail::add(out, "randsums/l2-couple-defect-zero", rd.lhs == 0.0);
    return out;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, const RunConfig& cfg) {
    std::vector<CheckResult> out;
    auto append = [&](const std::vector<CheckResult>& more) {
        out.insert(out.end(), more.begin(), more.end());
    };
    const bool all = suite == "all";
    bool matched = all;
    if (all || suite == "norms") { append(verify_norms(cfg)); matched = true; }
    if (all || suite == "duality") { append(verify_duality(cfg)); matched = true; }
    if (all || suite == "selectors") { append(verify_selectors(cfg)); matched = true; }
    if (all || suite == "closed-forms") { append(verify_closed_forms(cfg)); matched = true; }
    if (all || suite == "centralizer") { append(verify_centralizer(cfg)); matched = true; }
    if (all || suite == "twisted") { append(verify_twisted(cfg)); matched = true; }
    if (all || suite == "randsums") { append(verify_randsums(cfg)); matched = true; }
    if (!matched)
        throw std::invalid_argument("unknown suite '" + suite +
                                    "' (norms, duality, selectors, closed-forms, centralizer, "
                                    "twisted, randsums, all)");
    return out;
}

} // namespace derivlab
