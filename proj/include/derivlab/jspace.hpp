#pragma once

// Z-indexed J-sequences for the lq pseudolattice pair, the evaluation map
// and its derivative,
//
//   delta_theta({b_n})  = sum_n e^{theta n} b_n,
//   delta'_theta({b_n}) = sum_n n e^{theta(n-1)} b_n,
//
// and the two bounded selectors: the one-slot selector at N = sign*2*floor
// and the Lions-Peetre coordinate-slotting selector for (l_{p0}, l_{p1}).
//
// The scalar weights live in the three slot_* helpers below. Closed-form
// derivation formulas elsewhere multiply the same helpers in the same order,
// so "machinery equals closed form" holds bit for bit, not just to rounding.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "derivlab/dual_norm.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"
#include "derivlab/spaces.hpp"

namespace derivlab {

struct Couple {
    SpaceDescriptor b0;
    SpaceDescriptor b1;
};

/// Symbolic dual where a closed form exists; a dual_of node otherwise.
inline SpaceDescriptor canonical_dual(const SpaceDescriptor& s) {
    switch (s.kind) {
        case SpaceKind::lp:
            if (s.p == 1.0) return SpaceDescriptor::c0_space(s.support_bound);
            return SpaceDescriptor::lp_space(s.p / (s.p - 1.0), s.support_bound);
        case SpaceKind::c0:
            return SpaceDescriptor::lp_space(1.0, s.support_bound);
        case SpaceKind::dual_of:
            return *s.inner;
        default:
            return SpaceDescriptor::dual_space(s);
    }
}

/// The (B, B*) couple of a space.
inline Couple dual_couple(const SpaceDescriptor& b) { return {b, canonical_dual(b)}; }

inline double slot_delta_weight(int n, double theta) { return std::exp(theta * static_cast<double>(n)); }
inline double slot_prime_weight(int n, double theta) {
    return static_cast<double>(n) * std::exp(theta * static_cast<double>(n - 1));
}
inline double slot_scale(int n, double theta) { return std::exp(-static_cast<double>(n) * theta); }

/// Slot index of the Lions-Peetre selector for a coordinate with
/// |a_m| / ||a||_p = ratio.
inline int lp_slot_index(double ratio, double lambda) {
    return -static_cast<int>(std::floor(lambda * std::log(ratio)));
}

inline double lions_peetre_p(double p0, double p1, double theta) {
    return 1.0 / ((1.0 - theta) / p0 + theta / p1);
}
inline double lions_peetre_lambda(double p0, double p1, double theta) {
    const double p = lions_peetre_p(p0, p1, theta);
    return p / p0 - p / p1;
}

struct JSequence {
    std::map<int, SeqVector> slots;  // finite support in Z
    Couple couple;
    double q0 = 2.0;
    double q1 = 2.0;

    void set_slot(int n, SeqVector v) {
        if (v.empty()) slots.erase(n);
        else slots[n] = std::move(v);
    }
};

namespace detail {

inline double lq_sum(const std::vector<double>& vals, double q) {
    std::size_t nonzero = 0;
    double last = 0.0;
    for (double v : vals)
        if (v != 0.0) { ++nonzero; last = v; }
    if (nonzero == 0) return 0.0;
    if (nonzero == 1) return last;  // one-term lq sum is the term itself, exactly
    if (q == 1.0) {
        double s = 0.0;
        for (double v : vals) s += v;
        return s;
    }
    if (q == 2.0) {
        double s = 0.0;
        for (double v : vals) s += v * v;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double v : vals) s += std::pow(v, q);
    return std::pow(s, 1.0 / q);
}

} // namespace detail

/// The two branch values of the J-norm: the lq0 sum of ||b_n||_{B0} and the
/// lq1 sum of ||e^n b_n||_{B1}.
inline std::pair<double, double> j_norm_branches(const JSequence& s) {
    std::vector<double> n0, n1;
    n0.reserve(s.slots.size());
    n1.reserve(s.slots.size());
    for (const auto& [n, b] : s.slots) {
        n0.push_back(space_norm(s.couple.b0, b));
        n1.push_back(space_norm(s.couple.b1, b.scaled(std::exp(static_cast<double>(n)))));
    }
    return {detail::lq_sum(n0, s.q0), detail::lq_sum(n1, s.q1)};
}

inline double j_norm(const JSequence& s) {
    const auto [a, b] = j_norm_branches(s);
    return std::max(a, b);
}

inline SeqVector delta(const JSequence& s, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("delta: theta must lie in (0, 1)");
    SeqVector out;
    for (const auto& [n, b] : s.slots)
        out = out.plus(b.scaled(slot_delta_weight(n, theta)));
    return out;
}

inline SeqVector delta_prime(const JSequence& s, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("delta_prime: theta must lie in (0, 1)");
    SeqVector out;
    for (const auto& [n, b] : s.slots)
        out = out.plus(b.scaled(slot_prime_weight(n, theta)));
    return out;
}

/// Translates every slot by k: b'_n = b_{n-k}.
inline JSequence shift_slots(const JSequence& s, int k) {
    JSequence out = s;
    out.slots.clear();
    for (const auto& [n, b] : s.slots) out.slots[n + k] = b;
    return out;
}

struct SelectorReport {
    JSequence jseq;
    SeqVector target;
    double theta = 0.5;
    double target_norm = 0.0;  // the norm the bound is measured against
    double bound_ratio = 0.0;  // j_norm(jseq) / target_norm
    int slot_offset = 0;       // one-slot selector: N
    bool experimental_theta = false;
    bool degenerate = false;   // Lions-Peetre with p0 == p1

    SeqVector reconstruct() const { return delta(jseq, theta); }
    SeqVector derivation() const { return delta_prime(jseq, theta); }
};

/// One-slot selector b_N = e^{-N theta} a at N = sign * 2 * log_kappa_floor.
inline SelectorReport single_slot_selector(const SeqVector& a, const Couple& couple,
                                           int log_kappa_floor, int sign, double theta = 0.5,
                                           double q0 = 2.0, double q1 = 2.0) {
    if (a.empty()) throw std::invalid_argument("single_slot_selector: target must be nonzero");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("single_slot_selector: theta must lie in (0, 1)");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("single_slot_selector: sign must be +1 or -1");
    SelectorReport r;
    r.theta = theta;
    r.experimental_theta = (theta != 0.5);
    r.target = a;
    r.slot_offset = sign * 2 * log_kappa_floor;
    r.jseq.couple = couple;
    r.jseq.q0 = q0;
    r.jseq.q1 = q1;
    r.jseq.set_slot(r.slot_offset, a.scaled(slot_scale(r.slot_offset, theta)));
    r.target_norm = a.norm_l2();
    r.bound_ratio = j_norm(r.jseq) / r.target_norm;
    return r;
}

/// Lions-Peetre selector for (l_{p0}, l_{p1}) with pseudolattice (l_{p0}, l_{p1}):
/// coordinate m lands in slot n = -floor(lambda log(|a_m| / ||a||_p)).
///
/// The floor keeps the unweighted branch at most ||a||_p exactly (floor(u) <= u)
/// but overshoots by up to one slot on the weighted branch, so the J-norm
/// bound is e^{1-theta} ||a||_p; the constant 1 would require the unfloored
/// slot positions.
inline SelectorReport lions_peetre_selector(const SeqVector& a, double p0, double p1,
                                            double theta) {
    if (a.empty()) throw std::invalid_argument("lions_peetre_selector: target must be nonzero");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("lions_peetre_selector: theta must lie in (0, 1)");
    if (!(p0 >= 1.0) || !(p1 >= 1.0) || !std::isfinite(p0) || !std::isfinite(p1))
        throw std::invalid_argument("lions_peetre_selector: requires 1 <= p0, p1 < inf");
    SelectorReport r;
    r.theta = theta;
    r.target = a;
    r.degenerate = (p0 == p1);  // lambda = 0: all mass in slot 0, derivation vanishes
    const double p = lions_peetre_p(p0, p1, theta);
    const double lambda = lions_peetre_lambda(p0, p1, theta);
    const double anorm = a.norm_lp(p);
    r.jseq.couple = {SpaceDescriptor::lp_space(p0, 1 << 20), SpaceDescriptor::lp_space(p1, 1 << 20)};
    r.jseq.q0 = p0;
    r.jseq.q1 = p1;
    std::map<int, SeqVector> slots;
    for (const auto& [m, am] : a.entries()) {
        const int n = r.degenerate ? 0 : lp_slot_index(std::abs(am) / anorm, lambda);
        slots[n].set(m, slot_scale(n, theta) * am);
    }
    for (auto& [n, b] : slots) r.jseq.set_slot(n, std::move(b));
    r.target_norm = anorm;
    r.bound_ratio = j_norm(r.jseq) / anorm;
    return r;
}

struct SingleSlotPropertyReport {
    double max_deviation_b0 = 0.0;
    double max_deviation_b1 = 0.0;
    int trials = 0;
};

/// Property (one-slot sequences): each J-norm branch equals the norm of the
/// single slot directly, with constant exactly 1 for the lq pseudolattice.
inline SingleSlotPropertyReport check_single_slot_property(const Couple& couple, double q0,
                                                           double q1, int trials,
                                                           std::uint64_t seed) {
    SingleSlotPropertyReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(t));
        const int n0 = rng.next_int(-6, 6);
        SeqVector b;
        const int support = rng.next_int(1, 8);
        for (int j = 1; j <= support; ++j)
            if (rng.next_double() < 0.8) b.set(j, rng.next_gaussian());
        if (b.empty()) b.set(1, 1.0);
        JSequence s;
        s.couple = couple;
        s.q0 = q0;
        s.q1 = q1;
        s.set_slot(n0, b);
        const auto [v0, v1] = j_norm_branches(s);
        const double d0 = std::abs(v0 - space_norm(couple.b0, b));
        const double d1 =
            std::abs(v1 - space_norm(couple.b1, b.scaled(std::exp(static_cast<double>(n0)))));
        rep.max_deviation_b0 = std::max(rep.max_deviation_b0, d0);
        rep.max_deviation_b1 = std::max(rep.max_deviation_b1, d1);
    }
    return rep;
}

} // namespace derivlab
