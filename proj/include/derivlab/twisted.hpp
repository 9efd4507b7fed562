#pragma once

// The derived space: pairs (x, y) under the quasi-norm
//
//   ||(x, y)|| = ||x - Omega(y)||_2 + ||y||_2,      Omega(0) = 0,
//
// the short exact sequence j(x) = (x, 0), q(x, y) = y, and the natural basis
// v_{2j-1} = (e_j, 0), v_{2j} = (0, e_j).

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "derivlab/derivation.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"

namespace derivlab {

struct DerivedVector {
    SeqVector x;
    SeqVector y;
};

inline double derived_quasinorm(const DerivedVector& v, const DerivationMap& omega) {
    return v.x.minus(apply(omega, v.y)).norm_l2() + v.y.norm_l2();
}

inline DerivedVector inclusion(const SeqVector& x) { return {x, SeqVector{}}; }

inline SeqVector quotient(const DerivedVector& v) { return v.y; }

inline DerivedVector basis_vector(int k) {
    if (k < 1) throw std::invalid_argument("basis_vector: k must be >= 1");
    const int j = (k + 1) / 2;
    if (k % 2 == 1) return {SeqVector::unit(j), SeqVector{}};
    return {SeqVector{}, SeqVector::unit(j)};
}

/// max ||u + v|| / (||u|| + ||v||) over random pairs; the empirical
/// quasi-triangle constant (1 for a norm). Half the pairs are drawn on the
/// graph of the map, u = (Omega(y), y): those have quasi-norm ||y||, so the
/// sum pays the full quasi-additivity defect of Omega.
inline double quasi_triangle_constant(const DerivationMap& omega, int n, int trials,
                                      std::uint64_t seed) {
    double worst = 1.0;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(t));
        DerivedVector u, v;
        if (t % 2 == 0) {
            for (int j = 1; j <= n; ++j) {
                if (rng.next_double() < 0.8) u.x.set(j, rng.next_gaussian());
                if (rng.next_double() < 0.8) u.y.set(j, rng.next_gaussian());
                if (rng.next_double() < 0.8) v.x.set(j, rng.next_gaussian());
                if (rng.next_double() < 0.8) v.y.set(j, rng.next_gaussian());
            }
        } else {
            for (int j = 1; j <= n; ++j) {
                if (rng.next_double() < 0.8) u.y.set(j, rng.next_gaussian());
                if (rng.next_double() < 0.8) v.y.set(j, rng.next_gaussian());
            }
            u.x = apply(omega, u.y);
            v.x = apply(omega, v.y);
        }
        const double nu = derived_quasinorm(u, omega);
        const double nv = derived_quasinorm(v, omega);
        if (nu + nv == 0.0) continue;
        const DerivedVector s{u.x.plus(v.x), u.y.plus(v.y)};
        const double r = derived_quasinorm(s, omega) / (nu + nv);
        worst = std::max(worst, r);
    }
    return worst;
}

/// max over sign patterns eps and sampled coefficients c of
/// ||sum eps_j c_j v_{2j}|| / ||sum c_j v_{2j}||. Sign-equivariant maps give
/// exactly 1: the pattern moves through Omega unchanged in modulus.
inline double unconditionality_estimate(const DerivationMap& omega, int n, int trials,
                                        std::uint64_t seed) {
    double worst = 0.0;
    const bool exhaustive = n <= 10;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(t));
        SeqVector c;
        for (int j = 1; j <= n; ++j)
            if (rng.next_double() < 0.9) c.set(j, rng.next_gaussian());
        if (c.empty()) c.set(1, 1.0);
        const double base = derived_quasinorm({SeqVector{}, c}, omega);
        if (base == 0.0) continue;
        const long patterns = exhaustive ? (1L << n) : 64L;
        for (long pat = 0; pat < patterns; ++pat) {
            SeqVector ec;
            for (const auto& [j, v] : c.entries()) {
                const bool flip = exhaustive ? ((pat >> (j - 1)) & 1L) != 0
                                             : (split_stream(seed ^ 0xABCDULL,
                                                             static_cast<std::uint64_t>(pat * 131 + j))
                                                    .next_double() < 0.5);
                ec.set(j, flip ? -v : v);
            }
            const double r = derived_quasinorm({SeqVector{}, ec}, omega) / base;
            worst = std::max(worst, r);
        }
    }
    return worst;
}

} // namespace derivlab
