#pragma once

// The derivation catalog. Closed forms:
//
//   kalton_peck        Omega(b)_j = 2 b_j log(|b_j| / ||b||_2)
//   lions_peetre       Omega(a)_m = e^{-theta} (-floor(lambda log(|a_m|/||a||_p))) a_m
//   rank_J             Omega(x)_j = -x_j |log r_x(j)|,  r_x = modulus rank
//   critical_real      Omega(b)   = -2 e^{-1/2} floor(log kappa(F)) b   (at critical points)
//   critical_complex   Omega(b)   = -2 log kappa(F) b
//   weighted_demo      critical_real for the weighted-l2 couple, where
//                      kappa([1,n]) = max_{j<=n} w_j in closed form
//
// critical_real / weighted_demo multiply the same slot_scale / slot_prime_weight
// factors as delta_prime applied to the one-slot selector, in the same order,
// so the closed form and the machinery agree bitwise.
//
// Every kind is positively homogeneous and sign-equivariant: the formulas see
// coordinates only through |b_j| apart from one linear factor.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "derivlab/extremal.hpp"
#include "derivlab/jspace.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"

namespace derivlab {

enum class DerivationKind {
    zero,
    kalton_peck,
    lions_peetre,
    rank_j,
    critical_real,
    critical_complex,
    weighted_demo,
};

struct DerivationMap {
    DerivationKind kind = DerivationKind::zero;
    double p0 = 1.0, p1 = 2.0, theta = 0.5;  // lions_peetre / rank_j
    Couple couple;                           // critical_*
    std::vector<double> weights;             // weighted_demo

    static DerivationMap zero_map() { return {}; }
    static DerivationMap kalton_peck() {
        DerivationMap m;
        m.kind = DerivationKind::kalton_peck;
        return m;
    }
    static DerivationMap lions_peetre(double p0, double p1, double theta) {
        DerivationMap m;
        m.kind = DerivationKind::lions_peetre;
        m.p0 = p0; m.p1 = p1; m.theta = theta;
        return m;
    }
    static DerivationMap rank_j(double p0, double p1, double theta) {
        DerivationMap m;
        m.kind = DerivationKind::rank_j;
        m.p0 = p0; m.p1 = p1; m.theta = theta;
        return m;
    }
    static DerivationMap critical_real(Couple c) {
        DerivationMap m;
        m.kind = DerivationKind::critical_real;
        m.couple = std::move(c);
        return m;
    }
    static DerivationMap critical_complex(Couple c) {
        DerivationMap m;
        m.kind = DerivationKind::critical_complex;
        m.couple = std::move(c);
        return m;
    }
    static DerivationMap weighted_demo(std::vector<double> w) {
        DerivationMap m;
        m.kind = DerivationKind::weighted_demo;
        m.weights = std::move(w);
        return m;
    }

    std::string kind_name() const {
        switch (kind) {
            case DerivationKind::zero: return "zero";
            case DerivationKind::kalton_peck: return "kalton_peck";
            case DerivationKind::lions_peetre: return "lions_peetre";
            case DerivationKind::rank_j: return "rank_J";
            case DerivationKind::critical_real: return "critical_real";
            case DerivationKind::critical_complex: return "critical_complex";
            case DerivationKind::weighted_demo: return "weighted_demo";
        }
        return "?";
    }
};

inline SeqVector omega_kalton_peck(const SeqVector& b) {
    if (b.empty()) throw std::invalid_argument("omega_kalton_peck: b must be nonzero");
    const double norm = b.norm_l2();
    SeqVector out;
    for (const auto& [j, v] : b.entries())
        out.set(j, 2.0 * v * std::log(std::abs(v) / norm));
    return out;
}

inline SeqVector omega_lions_peetre(const SeqVector& a, double p0, double p1, double theta,
                                    bool* degenerate = nullptr) {
    if (a.empty()) throw std::invalid_argument("omega_lions_peetre: a must be nonzero");
    if (degenerate) *degenerate = (p0 == p1);
    if (p0 == p1) return {};  // lambda = 0, floors vanish
    const double p = lions_peetre_p(p0, p1, theta);
    const double lambda = lions_peetre_lambda(p0, p1, theta);
    const double anorm = a.norm_lp(p);
    const double scale = std::exp(-theta);
    SeqVector out;
    for (const auto& [m, am] : a.entries()) {
        const int n = lp_slot_index(std::abs(am) / anorm, lambda);
        out.set(m, scale * (static_cast<double>(n) * am));
    }
    return out;
}

/// Modulus rank over the support: 1 + #{i : |x_i| > |x_j|}, ties resolved by
/// smaller index first. A bijection from supp x onto [1, |supp x|].
inline std::map<int, int> rank_function(const SeqVector& x) {
    if (x.empty()) throw std::invalid_argument("rank_function: x must be nonzero");
    std::map<int, int> r;
    for (const auto& [j, vj] : x.entries()) {
        int rank = 1;
        for (const auto& [i, vi] : x.entries()) {
            if (std::abs(vi) > std::abs(vj) || (std::abs(vi) == std::abs(vj) && i < j)) ++rank;
        }
        r[j] = rank;
    }
    return r;
}

inline SeqVector omega_rank_j(const SeqVector& x) {
    const auto r = rank_function(x);
    SeqVector out;
    for (const auto& [j, vj] : x.entries())
        out.set(j, -vj * std::abs(std::log(static_cast<double>(r.at(j)))));
    return out;
}

// --- critical-point scales ----------------------------------------------------

namespace detail {

/// floor(log kappa) as the exact IEEE floor of the natural log; no epsilon
/// guard (boundary sensitivity is a documented limitation).
inline int floor_log(double kappa_value) {
    return static_cast<int>(std::floor(std::log(kappa_value)));
}

inline double weighted_kappa(const std::vector<double>& w, int n) {
    double m = 1.0;
    for (int j = 1; j <= n; ++j) {
        const double wj = (static_cast<std::size_t>(j) <= w.size()) ? w[static_cast<std::size_t>(j - 1)]
                                                                    : (w.empty() ? 1.0 : w.back());
        m = std::max(m, wj);
    }
    return m;
}

} // namespace detail

/// Applies the map; Omega(0) = 0 by convention (all kinds extend continuously
/// by homogeneity).
inline SeqVector apply(const DerivationMap& map, const SeqVector& b,
                       const ExtremalOptions& opt = {}) {
    if (b.empty()) return {};
    switch (map.kind) {
        case DerivationKind::zero:
            return {};
        case DerivationKind::kalton_peck:
            return omega_kalton_peck(b);
        case DerivationKind::lions_peetre:
            return omega_lions_peetre(b, map.p0, map.p1, map.theta);
        case DerivationKind::rank_j:
            return omega_rank_j(b);
        case DerivationKind::critical_real: {
            const KappaResult kr = kappa_segment(map.couple.b0, b.max_index(), opt);
            const int N = -2 * detail::floor_log(kr.value);
            return b.scaled(slot_scale(N, 0.5)).scaled(slot_prime_weight(N, 0.5));
        }
        case DerivationKind::critical_complex: {
            const KappaResult kr = kappa_segment(map.couple.b0, b.max_index(), opt);
            return b.scaled(-2.0 * std::log(kr.value));
        }
        case DerivationKind::weighted_demo: {
            const double kap = detail::weighted_kappa(map.weights, b.max_index());
            const int N = -2 * detail::floor_log(kap);
            return b.scaled(slot_scale(N, 0.5)).scaled(slot_prime_weight(N, 0.5));
        }
    }
    throw std::invalid_argument("apply: unknown derivation kind");
}

// --- critical-point operations -------------------------------------------------

struct CriticalBranch {
    KappaResult kappa;
    int floor_log = 0;
    int slot_offset = 0;       // N
    SelectorReport selector;
    SeqVector closed_form;
    SeqVector machinery;       // delta_prime of the selector; bitwise equal to closed_form
};

struct CriticalRealResult {
    CriticalBranch primal;   // Omega(b)  = -2 e^{-1/2} floor(log kappa)  b
    CriticalBranch dual;     // Omega(b*) = +2 e^{-1/2} floor(log kappa*) b*
    bool non_certified_warning = false;
};

inline CriticalRealResult omega_critical_real(const Couple& couple, const std::vector<int>& F,
                                              const ExtremalOptions& opt = {}) {
    if (F.empty()) throw std::invalid_argument("omega_critical_real: F must be nonempty");
    CriticalRealResult res;

    res.primal.kappa = kappa(couple.b0, F, opt);
    res.primal.floor_log = detail::floor_log(res.primal.kappa.value);
    res.primal.slot_offset = -2 * res.primal.floor_log;
    res.primal.selector =
        single_slot_selector(res.primal.kappa.witness, couple, res.primal.floor_log, -1, 0.5);
    res.primal.machinery = res.primal.selector.derivation();
    res.primal.closed_form = res.primal.kappa.witness.scaled(slot_scale(res.primal.slot_offset, 0.5))
                                 .scaled(slot_prime_weight(res.primal.slot_offset, 0.5));

    res.dual.kappa = kappa_star(couple.b0, F, opt);
    res.dual.floor_log = detail::floor_log(res.dual.kappa.value);
    res.dual.slot_offset = 2 * res.dual.floor_log;
    res.dual.selector =
        single_slot_selector(res.dual.kappa.witness, couple, res.dual.floor_log, +1, 0.5);
    res.dual.machinery = res.dual.selector.derivation();
    res.dual.closed_form = res.dual.kappa.witness.scaled(slot_scale(res.dual.slot_offset, 0.5))
                               .scaled(slot_prime_weight(res.dual.slot_offset, 0.5));

    res.non_certified_warning = !res.primal.kappa.dual_certified || !res.dual.kappa.dual_certified;
    return res;
}

struct ComplexBoundaryReport {
    // |e^{-2(z - 1/2) log kappa}| is t-independent on both boundary lines, so
    // the boundary norms are evaluated analytically.
    double norm_at_0 = 0.0;   // kappa * ||b||_B, should match ||b||_2 at the critical point
    double norm_at_1 = 0.0;   // kappa^{-1} * ||b||_B*, should be <= ||b||_2 (1 + tol)
    double l2 = 0.0;
    bool boundary0_ok = false;
    bool boundary1_ok = false;
};

struct CriticalComplexResult {
    KappaResult kappa;
    SeqVector witness;
    SeqVector output;  // -2 log kappa(F) * witness (no floor, no e^{-1/2})
    ComplexBoundaryReport boundary;
    bool non_certified_warning = false;
};

inline CriticalComplexResult omega_critical_complex(const SpaceDescriptor& space,
                                                    const std::vector<int>& F,
                                                    const ExtremalOptions& opt = {},
                                                    double tol = 1e-9) {
    if (F.empty()) throw std::invalid_argument("omega_critical_complex: F must be nonempty");
    CriticalComplexResult res;
    res.kappa = kappa(space, F, opt);
    res.witness = res.kappa.witness;
    res.output = res.witness.scaled(-2.0 * std::log(res.kappa.value));
    const double k = res.kappa.value;
    res.boundary.l2 = res.witness.norm_l2();
    res.boundary.norm_at_0 = k * space_norm(space, res.witness, opt.dual_tolerance);
    res.boundary.norm_at_1 =
        (1.0 / k) * space_norm(SpaceDescriptor::dual_space(space), res.witness, opt.dual_tolerance);
    res.boundary.boundary0_ok =
        std::abs(res.boundary.norm_at_0 - res.boundary.l2) <= tol * res.boundary.l2 + 1e-12;
    const double slack = std::max(tol, 2.0 * opt.dual_tolerance);
    res.boundary.boundary1_ok = res.boundary.norm_at_1 <= res.boundary.l2 * (1.0 + slack);
    res.non_certified_warning = !res.kappa.dual_certified;
    return res;
}

// --- centralizer defect ---------------------------------------------------------

/// || Omega(a.b) - a.Omega(b) ||_2 / (||a||_inf ||b||_2); a acts as a bounded
/// multiplier.
inline double centralizer_defect(const DerivationMap& map, const SeqVector& a, const SeqVector& b,
                                 const ExtremalOptions& opt = {}) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("centralizer_defect: a and b must be nonzero");
    const SeqVector ab = a.hadamard(b);
    const SeqVector lhs = apply(map, ab, opt).minus(a.hadamard(apply(map, b, opt)));
    return lhs.norm_l2() / (a.norm_sup() * b.norm_l2());
}

struct DefectStats {
    double max_defect = 0.0;
    double mean_defect = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

inline DefectStats centralizer_defect_stats(const DerivationMap& map, int n, int trials,
                                            std::uint64_t seed) {
    DefectStats st;
    st.trials = trials;
    st.seed = seed;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(t));
        SeqVector a, b;
        for (int j = 1; j <= n; ++j) {
            a.set(j, rng.next_uniform(-1.0, 1.0));
            if (rng.next_double() < 0.9) b.set(j, rng.next_gaussian());
        }
        if (a.empty() || b.empty()) continue;
        const double d = centralizer_defect(map, a, b);
        st.max_defect = std::max(st.max_defect, d);
        acc += d;
    }
    st.mean_defect = acc / std::max(trials, 1);
    return st;
}

// --- growth tables ---------------------------------------------------------------

struct GrowthRow {
    int n = 0;
    double kappa = 0.0;
    double kappa_star = 0.0;
    int floor_log_kappa = 0;
    int floor_log_kappa_star = 0;
    double omega_scale = 0.0;  // scalar c with Omega(a_n) = c a_n at the critical point
};

struct GrowthTable {
    Couple couple;
    std::vector<GrowthRow> rows;
    bool omega_scale_nonconstant = false;  // desk-scale evidence for unboundedness
};

inline GrowthTable growth_diagnostic(const Couple& couple, int n_max,
                                     const ExtremalOptions& opt = {}) {
    if (n_max < 1) throw std::invalid_argument("growth_diagnostic: n_max must be >= 1");
    GrowthTable table;
    table.couple = couple;
    for (int n = 1; n <= n_max; ++n) {
        GrowthRow row;
        row.n = n;
        const KappaResult kr = kappa_segment(couple.b0, n, opt);
        const KappaResult ks = kappa_star_segment(couple.b0, n, opt);
        row.kappa = kr.value;
        row.kappa_star = ks.value;
        row.floor_log_kappa = detail::floor_log(kr.value);
        row.floor_log_kappa_star = detail::floor_log(ks.value);
        const int N = -2 * row.floor_log_kappa;
        row.omega_scale = slot_prime_weight(N, 0.5) * slot_scale(N, 0.5);
        table.rows.push_back(row);
    }
    for (const auto& row : table.rows)
        if (std::abs(row.omega_scale) != std::abs(table.rows.front().omega_scale))
            table.omega_scale_nonconstant = true;
    return table;
}

/// Realizes a prescribed slow growth kappa([1, n]) = delta_n with the
/// weighted-l2 couple: ||x||_B = (sum (x_j / delta_j)^2)^{1/2}, where the
/// ratio ||x||_2 / ||x||_B is maximal at the coordinate of the largest weight.
inline GrowthTable slow_growth_demo(const std::vector<double>& delta, int n_max,
                                    const ExtremalOptions& opt = {}) {
    if (delta.empty()) throw std::invalid_argument("slow_growth_demo: delta must be nonempty");
    if (!(delta.front() >= 1.0))
        throw std::invalid_argument("slow_growth_demo: requires delta_1 >= 1");
    for (std::size_t i = 1; i < delta.size(); ++i)
        if (delta[i] < delta[i - 1])
            throw std::invalid_argument("slow_growth_demo: delta must be nondecreasing");
    std::vector<double> w(delta.begin(), delta.begin() + std::min<std::size_t>(delta.size(), static_cast<std::size_t>(n_max)));
    while (static_cast<int>(w.size()) < n_max) w.push_back(delta.back());
    const SpaceDescriptor B = SpaceDescriptor::weighted_l2_space(std::move(w), n_max);
    return growth_diagnostic(dual_couple(B), n_max, opt);
}

/// delta_n = 1 + log(1 + log(1 + n)), the stock slow-growth sequence.
inline std::vector<double> loglog_delta(int n_max) {
    std::vector<double> d(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n)
        d[static_cast<std::size_t>(n - 1)] = 1.0 + std::log(1.0 + std::log(1.0 + static_cast<double>(n)));
    return d;
}

} // namespace derivlab
