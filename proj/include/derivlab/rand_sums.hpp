#pragma once

// Rademacher averages and type-p machinery:
//
//   E || sum_j eps_j x_j ||   over eps in {-1,1}^m   (first moment),
//
// exact by sign enumeration up to m = 20, Monte Carlo beyond. The type-p
// estimator reports a lower bound for a_{m,p}(X): the best ratio over a
// family battery (a supremum over tested families only; no report claims
// more). The randoma / average-bound checks compare the derivation's random-
// sum defect and the derived-space average against the interpolation-type
// products, with every a_{m,p} replaced by its lower estimate, so the output
// is boundedness evidence, not a proof.
//
// Sums over sign patterns reduce pairwise over the pattern index, a fixed
// order independent of scheduling (and exact for families whose pattern
// norms all coincide).

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "derivlab/derivation.hpp"
#include "derivlab/dual_norm.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"
#include "derivlab/twisted.hpp"

namespace derivlab {

struct VectorFamily {
    std::vector<SeqVector> members;
    SpaceDescriptor space;
};

namespace detail {

inline double pairwise_mean(const std::function<double(long)>& value, long count) {
    // pairwise reduction over [0, count); count a power of two for sign sums
    std::function<double(long, long)> sum = [&](long lo, long len) -> double {
        if (len == 1) return value(lo);
        const long half = len / 2;
        return sum(lo, half) + sum(lo + half, len - half);
    };
    return sum(0, count) / static_cast<double>(count);
}

inline double lp_sum_of(const std::vector<double>& vals, double p) {
    if (vals.empty()) return 0.0;
    if (p == 1.0) {
        double s = 0.0;
        for (double v : vals) s += v;
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double v : vals) s += v * v;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double v : vals) s += std::pow(v, p);
    return std::pow(s, 1.0 / p);
}

inline SeqVector signed_sum(const std::vector<SeqVector>& xs, long pattern) {
    SeqVector s;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const bool neg = ((pattern >> j) & 1L) != 0;
        s = s.plus(neg ? xs[j].scaled(-1.0) : xs[j]);
    }
    return s;
}

} // namespace detail

inline int rademacher_exact_cap() { return 20; }

/// Exact first-moment Rademacher average by sign enumeration.
inline double rademacher_average(const VectorFamily& family) {
    const int m = static_cast<int>(family.members.size());
    if (m < 1) throw std::invalid_argument("rademacher_average: family must be nonempty");
    if (m > rademacher_exact_cap())
        throw std::invalid_argument("rademacher_average: m exceeds exact-mode cap " +
                                    std::to_string(rademacher_exact_cap()) +
                                    "; use rademacher_average_mc");
    const long patterns = 1L << m;
    return detail::pairwise_mean(
        [&](long pat) { return space_norm(family.space, detail::signed_sum(family.members, pat)); },
        patterns);
}

struct MonteCarloAverage {
    double mean = 0.0;
    double standard_error = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

inline MonteCarloAverage rademacher_average_mc(const VectorFamily& family, int trials,
                                               std::uint64_t seed) {
    const int m = static_cast<int>(family.members.size());
    if (m < 1) throw std::invalid_argument("rademacher_average_mc: family must be nonempty");
    MonteCarloAverage out;
    out.trials = trials;
    out.seed = seed;
    double acc = 0.0, acc2 = 0.0;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(t));
        SeqVector s;
        for (int j = 0; j < m; ++j)
            s = s.plus(rng.next_sign() > 0 ? family.members[static_cast<std::size_t>(j)]
                                           : family.members[static_cast<std::size_t>(j)].scaled(-1.0));
        const double v = space_norm(family.space, s);
        acc += v;
        acc2 += v * v;
    }
    out.mean = acc / trials;
    const double var = std::max(0.0, acc2 / trials - out.mean * out.mean);
    out.standard_error = std::sqrt(var / trials);
    return out;
}

// --- type constants ------------------------------------------------------------

struct TypeEstimate {
    int m = 0;
    double p = 2.0;
    double lower_bound = 0.0;  // sup over tested families only
    VectorFamily witness;
    std::string method = "exact-enumeration";
};

namespace detail {

inline double family_ratio(const VectorFamily& family, double p) {
    std::vector<double> norms;
    norms.reserve(family.members.size());
    for (const auto& x : family.members) norms.push_back(space_norm(family.space, x));
    const double denom = lp_sum_of(norms, p);
    if (denom == 0.0) return 0.0;
    return rademacher_average(family) / denom;
}

} // namespace detail

/// Battery: coordinate vectors, a repeated single vector, all-ones blocks,
/// random Gaussian-coefficient vectors.
inline TypeEstimate type_constant_lower(const SpaceDescriptor& space, int m, double p, int n,
                                        std::uint64_t seed = 20250809) {
    if (!(p > 1.0 && p <= 2.0))
        throw std::invalid_argument("type_constant_lower: requires 1 < p <= 2");
    if (m < 1 || n < 1) throw std::invalid_argument("type_constant_lower: m, n must be >= 1");
    TypeEstimate est;
    est.m = m;
    est.p = p;
    std::vector<VectorFamily> battery;

    VectorFamily coords{{}, space};
    for (int j = 0; j < m; ++j) coords.members.push_back(SeqVector::unit((j % n) + 1));
    battery.push_back(coords);

    VectorFamily repeated{{}, space};
    for (int j = 0; j < m; ++j) repeated.members.push_back(SeqVector::unit(1));
    battery.push_back(repeated);

    // a single vector padded with zeros: its ratio is exactly 1, so the
    // estimator never reports below the trivial bound
    VectorFamily padded{{}, space};
    padded.members.push_back(SeqVector::unit(1));
    for (int j = 1; j < m; ++j) padded.members.push_back(SeqVector{});
    battery.push_back(padded);

    if (m <= n) {
        VectorFamily blocks{{}, space};
        for (int j = 0; j < m; ++j) {
            const int lo = j * n / m + 1, hi = (j + 1) * n / m;
            SeqVector b;
            for (int i = lo; i <= hi; ++i) b.set(i, 1.0);
            if (b.empty()) b.set(lo, 1.0);
            blocks.members.push_back(b);
        }
        battery.push_back(blocks);
    }

    for (int fam = 0; fam < 8; ++fam) {
        VectorFamily random{{}, space};
        SplitMix64 rng = split_stream(seed, 0x747970ULL + static_cast<std::uint64_t>(fam));
        const bool signs_only = fam >= 6;
        for (int j = 0; j < m; ++j) {
            SeqVector x;
            for (int i = 1; i <= n; ++i)
                if (rng.next_double() < 0.8) x.set(i, signs_only ? rng.next_sign() : rng.next_gaussian());
            if (x.empty()) x.set(1, 1.0);
            random.members.push_back(x);
        }
        battery.push_back(random);
    }

    for (const auto& family : battery) {
        const double r = detail::family_ratio(family, p);
        if (r > est.lower_bound) {
            est.lower_bound = r;
            est.witness = family;
        }
    }
    return est;
}

// --- interpolation-of-type check -------------------------------------------------

struct InterpolaReport {
    int m = 0;
    double p = 2.0, q = 2.0, theta = 0.5;
    double intermediate_estimate = 0.0;  // a_{m,p} lower estimate on the l2 intermediate space
    double endpoint_product = 0.0;       // a_{m,p}(B0)^(1-theta) a_{m,p}(B1)^theta
    double ratio = 0.0;
    bool evidence_only = true;  // lower estimates on both sides; not a proof
};

inline InterpolaReport interpola_check(const Couple& couple, double q, double theta, int m,
                                       double p, int n, std::uint64_t seed = 20250809) {
    InterpolaReport rep;
    rep.m = m;
    rep.p = p;
    rep.q = q;
    rep.theta = theta;
    const SpaceDescriptor l2 = SpaceDescriptor::lp_space(2.0, 1 << 20);
    rep.intermediate_estimate = type_constant_lower(l2, m, p, n, seed).lower_bound;
    const double a0 = type_constant_lower(couple.b0, m, p, n, seed).lower_bound;
    const double a1 = type_constant_lower(couple.b1, m, p, n, seed).lower_bound;
    rep.endpoint_product = std::pow(a0, 1.0 - theta) * std::pow(a1, theta);
    rep.ratio = rep.intermediate_estimate / rep.endpoint_product;
    return rep;
}

// --- random-sum defect of a derivation --------------------------------------------

struct RandomaReport {
    int m = 0;
    double p = 2.0, q = 2.0, theta = 0.5;
    double lhs = 0.0;    // E || Omega(sum eps b) - sum eps Omega(b) - coef sum eps b ||_2
    double rhs = 0.0;    // a0^(1-theta) a1^theta (sum ||b_j||^p)^(1/p)
    double c_emp = 0.0;
    double a0 = 0.0, a1 = 0.0;
    std::string mode = "log-ratio";  // or "floor-difference"
    std::uint64_t seed = 0;
};

inline RandomaReport randoma_defect(const DerivationMap& omega, const Couple& couple, double q,
                                    double theta, double p, const std::vector<SeqVector>& family,
                                    bool floor_mode = false, int n = 8,
                                    std::uint64_t seed = 20250809) {
    const int m = static_cast<int>(family.size());
    if (m < 1 || m > 12)
        throw std::invalid_argument("randoma_defect: family size must be in [1, 12] (exact mode)");
    RandomaReport rep;
    rep.m = m;
    rep.p = p;
    rep.q = q;
    rep.theta = theta;
    rep.mode = floor_mode ? "floor-difference" : "log-ratio";
    rep.seed = seed;
    rep.a0 = type_constant_lower(couple.b0, m, p, n, seed).lower_bound;
    rep.a1 = type_constant_lower(couple.b1, m, p, n, seed).lower_bound;
    const double coef = floor_mode
                            ? std::exp(-1.0) * (std::floor(std::log(rep.a0)) - std::floor(std::log(rep.a1)))
                            : std::exp(-1.0) * std::log(rep.a0 / rep.a1);

    std::vector<SeqVector> omegas;
    omegas.reserve(family.size());
    for (const auto& b : family) omegas.push_back(apply(omega, b));

    const long patterns = 1L << m;
    rep.lhs = detail::pairwise_mean(
        [&](long pat) {
            const SeqVector s = detail::signed_sum(family, pat);
            const SeqVector os = detail::signed_sum(omegas, pat);
            return apply(omega, s).minus(os).minus(s.scaled(coef)).norm_l2();
        },
        patterns);

    std::vector<double> norms;
    for (const auto& b : family) norms.push_back(b.norm_l2());
    rep.rhs = std::pow(rep.a0, 1.0 - theta) * std::pow(rep.a1, theta) * detail::lp_sum_of(norms, p);
    rep.c_emp = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

// --- derived-space average bound ---------------------------------------------------

struct AverageBoundReport {
    int m = 0;
    double p = 2.0, q = 2.0, theta = 0.5;
    double lhs = 0.0;  // derived-space Rademacher ratio, best over tested families
    double rhs = 0.0;  // a_theta (a0^(1-theta) a1^theta + |log(a0/a1)|)
    double c_emp = 0.0;
    std::uint64_t seed = 0;
};

inline AverageBoundReport average_bound_check(const DerivationMap& omega, const Couple& couple,
                                              double q, double theta, double p, int m, int n,
                                              std::uint64_t seed = 20250809) {
    if (m < 1 || m > 12)
        throw std::invalid_argument("average_bound_check: m must be in [1, 12] (exact mode)");
    AverageBoundReport rep;
    rep.m = m;
    rep.p = p;
    rep.q = q;
    rep.theta = theta;
    rep.seed = seed;

    std::vector<std::vector<DerivedVector>> battery;
    std::vector<DerivedVector> js, qs;
    for (int j = 0; j < m; ++j) {
        js.push_back({SeqVector::unit((j % n) + 1), SeqVector{}});
        qs.push_back({SeqVector{}, SeqVector::unit((j % n) + 1)});
    }
    battery.push_back(js);
    battery.push_back(qs);
    for (int fam = 0; fam < 2; ++fam) {
        std::vector<DerivedVector> random;
        SplitMix64 rng = split_stream(seed, 0x617667ULL + static_cast<std::uint64_t>(fam));
        for (int j = 0; j < m; ++j) {
            DerivedVector v;
            for (int i = 1; i <= n; ++i) {
                if (rng.next_double() < 0.8) v.x.set(i, rng.next_gaussian());
                if (rng.next_double() < 0.8) v.y.set(i, rng.next_gaussian());
            }
            random.push_back(v);
        }
        battery.push_back(random);
    }

    const long patterns = 1L << m;
    for (const auto& family : battery) {
        std::vector<double> norms;
        for (const auto& v : family) norms.push_back(derived_quasinorm(v, omega));
        const double denom = detail::lp_sum_of(norms, p);
        if (denom == 0.0) continue;
        const double avg = detail::pairwise_mean(
            [&](long pat) {
                DerivedVector s;
                for (int j = 0; j < m; ++j) {
                    const bool neg = ((pat >> j) & 1L) != 0;
                    const auto& v = family[static_cast<std::size_t>(j)];
                    s.x = s.x.plus(neg ? v.x.scaled(-1.0) : v.x);
                    s.y = s.y.plus(neg ? v.y.scaled(-1.0) : v.y);
                }
                return derived_quasinorm(s, omega);
            },
            patterns);
        rep.lhs = std::max(rep.lhs, avg / denom);
    }

    const SpaceDescriptor l2 = SpaceDescriptor::lp_space(2.0, 1 << 20);
    const double atheta = type_constant_lower(l2, m, p, n, seed).lower_bound;
    const double a0 = type_constant_lower(couple.b0, m, p, n, seed).lower_bound;
    const double a1 = type_constant_lower(couple.b1, m, p, n, seed).lower_bound;
    rep.rhs = atheta * (std::pow(a0, 1.0 - theta) * std::pow(a1, theta) + std::abs(std::log(a0 / a1)));
    rep.c_emp = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

} // namespace derivlab
