#pragma once

// Test-only oracles, independent of the library's computation paths.
//
// tsirelson_bruteforce enumerates *general* successive-set families (not just
// intervals) by top-down recursion on support masks, following the norm's
// defining fixed point directly. The library's interval DP must reproduce it.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"

namespace oracle {

class TsirelsonBruteForce {
public:
    explicit TsirelsonBruteForce(const derivlab::SeqVector& x) {
        n_ = x.max_index();
        xs_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
        for (const auto& [j, v] : x.entries()) xs_[static_cast<std::size_t>(j)] = std::abs(v);
    }

    double norm() {
        std::uint32_t full = 0;
        for (int j = 1; j <= n_; ++j)
            if (xs_[static_cast<std::size_t>(j)] != 0.0) full |= 1u << (j - 1);
        if (full == 0) return 0.0;
        return g(full);
    }

private:
    // T-norm of x restricted to the mask
    double g(std::uint32_t mask) {
        auto it = memo_.find(mask);
        if (it != memo_.end()) return it->second;
        std::vector<int> elems = elements(mask);
        double sup = 0.0;
        for (int j : elems) sup = std::max(sup, xs_[static_cast<std::size_t>(j)]);
        double fam = 0.0;
        // first set E1 (any nonempty subset except the full support, whose
        // one-set family is a no-op), then at most min(E1) - 1 further sets
        const int m = static_cast<int>(elems.size());
        for (std::uint32_t sub = 1; sub < (1u << m); ++sub) {
            if (sub == (1u << m) - 1) continue;
            std::uint32_t emask = 0;
            int emin = 0, emax = 0;
            for (int i = 0; i < m; ++i)
                if (sub & (1u << i)) {
                    emask |= 1u << (elems[static_cast<std::size_t>(i)] - 1);
                    if (emin == 0) emin = elems[static_cast<std::size_t>(i)];
                    emax = elems[static_cast<std::size_t>(i)];
                }
            const double v = g(emask) + tail(mask & above(emax), emin - 1);
            if (v > fam) fam = v;
        }
        const double out = std::max(sup, 0.5 * fam);
        memo_[mask] = out;
        return out;
    }

    // best sum of at most c further successive sets within the mask
    double tail(std::uint32_t mask, int c) {
        if (c <= 0 || mask == 0) return 0.0;
        const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 6) | static_cast<std::uint64_t>(c);
        auto it = tail_memo_.find(key);
        if (it != tail_memo_.end()) return it->second;
        std::vector<int> elems = elements(mask);
        const int m = static_cast<int>(elems.size());
        double best = 0.0;
        for (std::uint32_t sub = 1; sub < (1u << m); ++sub) {
            std::uint32_t emask = 0;
            int emax = 0;
            for (int i = 0; i < m; ++i)
                if (sub & (1u << i)) {
                    emask |= 1u << (elems[static_cast<std::size_t>(i)] - 1);
                    emax = elems[static_cast<std::size_t>(i)];
                }
            const double v = g(emask) + tail(mask & above(emax), c - 1);
            if (v > best) best = v;
        }
        tail_memo_[key] = best;
        return best;
    }

    static std::uint32_t above(int j) { return (j >= 32) ? 0u : ~((1u << j) - 1u); }

    std::vector<int> elements(std::uint32_t mask) const {
        std::vector<int> out;
        for (int j = 1; j <= n_; ++j)
            if (mask & (1u << (j - 1))) out.push_back(j);
        return out;
    }

    int n_ = 0;
    std::vector<double> xs_;
    std::unordered_map<std::uint32_t, double> memo_;
    std::unordered_map<std::uint64_t, double> tail_memo_;
};

inline double tsirelson_bruteforce(const derivlab::SeqVector& x) {
    return TsirelsonBruteForce(x).norm();
}

/// Dense-sampling lower oracle for sup { <x, y> : ||x||_T <= 1 }: random
/// nonnegative directions rescaled onto the unit sphere of the norm.
template <typename NormFn>
double pairing_sampling_max(const derivlab::SeqVector& y, NormFn&& norm_of, int n, int samples,
                            std::uint64_t seed) {
    double best = 0.0;
    for (int t = 0; t < samples; ++t) {
        derivlab::SplitMix64 rng = derivlab::split_stream(seed, static_cast<std::uint64_t>(t));
        derivlab::SeqVector x;
        for (int j = 1; j <= n; ++j)
            if (rng.next_double() < 0.9) x.set(j, std::abs(rng.next_gaussian()));
        if (x.empty()) continue;
        const double nv = norm_of(x);
        if (nv <= 0.0) continue;
        best = std::max(best, y.abs().dot(x) / nv);
    }
    return best;
}

inline derivlab::SeqVector random_vector(derivlab::SplitMix64& rng, int n, double density = 0.85) {
    derivlab::SeqVector v;
    for (int j = 1; j <= n; ++j)
        if (rng.next_double() < density) v.set(j, rng.next_gaussian());
    if (v.empty()) v.set(1, 1.0);
    return v;
}

} // namespace oracle
