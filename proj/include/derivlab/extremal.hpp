#pragma once

// Equivalence constants and their witnesses:
//
//   kappa(F)  = sup { ||b||_2 / ||b||_B  : 0 != supp b in F }
//   kappa*(F) = sup { ||b||_2 / ||b||_B* : 0 != supp b in F }   (B* via dual_norm)
//
// and the Calderon gap / distance between two norms on a finite support:
//
//   delta(M, N) = log sup M(v)/N(v),   d_C(M, N) = max(delta(M,N), delta(N,M)).
//
// All built-in norms are 1-unconditional, so the searches run over the
// nonnegative orthant: multi-start projected subgradient ascent on the ratio,
// polished by cyclic coordinate line searches. For |F| <= 6 a dense simplex
// grid provides an independent lower oracle; certified_gap records how far
// the search fell short of it (usually zero).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "derivlab/dual_norm.hpp"
#include "derivlab/rng.hpp"
#include "derivlab/seq_vector.hpp"
#include "derivlab/spaces.hpp"

namespace derivlab {

struct NormFunction {
    std::function<double(const SeqVector&)> value;
    std::function<SeqVector(const SeqVector&)> subgrad;  // at b >= 0
    bool expensive = false;   // solver-backed; trims search budgets
    std::shared_ptr<bool> certified = std::make_shared<bool>(true);  // cleared by non-certified dual solves
};

struct KappaResult {
    double value = 0.0;
    SeqVector witness;            // l2-normalized, nonnegative
    double certified_gap = 0.0;   // grid shortfall plus dual-solver interval width
    std::vector<int> support;
    bool grid_certified = false;  // dense-grid oracle ran (|F| <= 6)
    bool dual_certified = true;   // every dual solve involved was certified
};

struct CalderonDistance {
    double gap_mn = 0.0;
    double gap_nm = 0.0;
    double distance = 0.0;
};

struct ExtremalOptions {
    std::uint64_t seed = 20250809;
    double dual_tolerance = 1e-7;
    int ascent_iterations = 80;
    int polish_passes = 3;
    int random_starts = 6;
    int line_samples = 10;
    bool grid_certificate = true;
    std::vector<SeqVector> extra_starts;
};

namespace detail {

struct RatioSearch {
    const NormFunction& num;
    const NormFunction& den;
    const std::vector<int>& F;

    SeqVector to_seq(const std::vector<double>& dense) const {
        SeqVector v;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0.0) v.set(F[i], dense[i]);
        return v;
    }
    std::vector<double> from_seq(const SeqVector& v) const {
        std::vector<double> dense(F.size(), 0.0);
        for (std::size_t i = 0; i < F.size(); ++i) dense[i] = std::abs(v.at(F[i]));
        return dense;
    }
    double ratio(const std::vector<double>& dense) const {
        const SeqVector v = to_seq(dense);
        if (v.empty()) return 0.0;
        const double d = den.value(v);
        if (d <= 0.0) return 0.0;
        return num.value(v) / d;
    }
};

inline void normalize_l2(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    if (s <= 0.0) return;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
}

// Lexicographic tie-break: smallest support first, then largest first
// coordinate (spec'd determinism for ties among maximizers).
inline bool tie_better(const std::vector<double>& cand, const std::vector<double>& inc) {
    std::vector<std::size_t> sc, si;
    for (std::size_t i = 0; i < cand.size(); ++i) if (std::abs(cand[i]) > 1e-13) sc.push_back(i);
    for (std::size_t i = 0; i < inc.size(); ++i) if (std::abs(inc[i]) > 1e-13) si.push_back(i);
    if (sc != si) return sc < si;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (cand[i] != inc[i]) return cand[i] > inc[i];
    }
    return false;
}

inline double coordinate_polish(const RatioSearch& rs, std::vector<double>& b, double val,
                                int passes, int samples) {
    const std::size_t m = b.size();
    for (int pass = 0; pass < passes; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i < m; ++i) {
            double hi = 0.0;
            for (double x : b) hi = std::max(hi, x);
            hi = 2.5 * (hi + 1e-3);
            double best_t = b[i], best_v = val;
            const double saved = b[i];
            for (int k = 0; k <= samples; ++k) {
                const double t = hi * static_cast<double>(k) / samples;
                b[i] = t;
                const double v = rs.ratio(b);
                if (v > best_v) { best_v = v; best_t = t; }
            }
            // golden-section refine around the best sample
            double lo = std::max(0.0, best_t - hi / samples), up = best_t + hi / samples;
            const double gr = 0.6180339887498949;
            double x1 = up - gr * (up - lo), x2 = lo + gr * (up - lo);
            b[i] = x1; double f1 = rs.ratio(b);
            b[i] = x2; double f2 = rs.ratio(b);
            for (int it = 0; it < 16; ++it) {
                if (f1 < f2) {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + gr * (up - lo);
                    b[i] = x2; f2 = rs.ratio(b);
                } else {
                    up = x2; x2 = x1; f2 = f1;
                    x1 = up - gr * (up - lo);
                    b[i] = x1; f1 = rs.ratio(b);
                }
            }
            const double tg = (f1 > f2) ? x1 : x2;
            b[i] = tg;
            const double vg = rs.ratio(b);
            if (vg > best_v) { best_v = vg; best_t = tg; }
            b[i] = (best_v > val) ? best_t : saved;
            if (best_v > val + 1e-15) { val = best_v; improved = true; }
        }
        normalize_l2(b);
        if (!improved) break;
    }
    return val;
}

inline double ascend(const RatioSearch& rs, std::vector<double>& b, int iters) {
    normalize_l2(b);
    double val = rs.ratio(b);
    double eta = 0.5;
    for (int it = 0; it < iters && eta > 1e-12; ++it) {
        const SeqVector bv = rs.to_seq(b);
        if (bv.empty()) break;
        const double nv = rs.num.value(bv);
        const double dv = rs.den.value(bv);
        if (nv <= 0.0 || dv <= 0.0) break;
        const SeqVector gn = rs.num.subgrad(bv);
        const SeqVector gd = rs.den.subgrad(bv);
        std::vector<double> dir(b.size(), 0.0);
        for (std::size_t i = 0; i < rs.F.size(); ++i)
            dir[i] = gn.at(rs.F[i]) / nv - gd.at(rs.F[i]) / dv;  // grad of log ratio
        std::vector<double> cand(b.size());
        bool accepted = false;
        for (int bt = 0; bt < 12; ++bt) {
            for (std::size_t i = 0; i < b.size(); ++i)
                cand[i] = std::max(0.0, b[i] + eta * dir[i]);
            normalize_l2(cand);
            const double v = rs.ratio(cand);
            if (v > val + 1e-16) {
                b = cand;
                val = v;
                eta *= 1.3;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
    }
    return val;
}

struct GridOutcome {
    double best = 0.0;
    std::vector<double> arg;
    bool ran = false;
};

inline GridOutcome grid_oracle(const RatioSearch& rs) {
    GridOutcome out;
    const std::size_t m = rs.F.size();
    if (m > 6) return out;
    const double budget = 400000.0;
    int G = static_cast<int>(std::floor(std::pow(budget, 1.0 / static_cast<double>(m)))) - 1;
    G = std::max(G, 4);
    G = std::min(G, 4000);
    std::vector<int> c(m, 0);
    std::vector<double> pt(m, 0.0);
    out.ran = true;
    while (true) {
        // next composition in {0..G}^m
        std::size_t pos = 0;
        while (pos < m && c[pos] == G) { c[pos] = 0; ++pos; }
        if (pos == m) break;
        ++c[pos];
        for (std::size_t i = 0; i < m; ++i) pt[i] = static_cast<double>(c[i]);
        const double v = rs.ratio(pt);
        if (v > out.best) {
            out.best = v;
            out.arg = pt;
        }
    }
    normalize_l2(out.arg);
    return out;
}

} // namespace detail

struct RatioResult {
    double value = 0.0;
    std::vector<double> witness;  // dense over F, l2-normalized
    double grid_best = 0.0;
    double certified_gap = 0.0;
    bool grid_certified = false;
};

/// Maximizes num(b)/den(b) over b >= 0 supported in F.
inline RatioResult maximize_ratio(const NormFunction& num, const NormFunction& den,
                                  const std::vector<int>& F, const ExtremalOptions& opt = {}) {
    if (F.empty()) throw std::invalid_argument("maximize_ratio: empty support set");
    detail::RatioSearch rs{num, den, F};
    const std::size_t m = F.size();
    const bool costly = num.expensive || den.expensive;

    std::vector<std::vector<double>> starts;
    if (costly) {
        // coordinate scan, then only the most promising few starts
        std::size_t best_i = 0;
        double best_v = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> e(m, 0.0);
            e[i] = 1.0;
            const double v = rs.ratio(e);
            if (v > best_v) { best_v = v; best_i = i; }
        }
        std::vector<double> e(m, 0.0);
        e[best_i] = 1.0;
        starts.push_back(std::move(e));
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> e(m, 0.0);
            e[i] = 1.0;
            starts.push_back(std::move(e));
        }
    }
    starts.emplace_back(m, 1.0);
    for (const auto& s : opt.extra_starts) {
        auto d = rs.from_seq(s);
        bool nonzero = false;
        for (double v : d) nonzero |= (v != 0.0);
        if (nonzero) starts.push_back(std::move(d));
    }
    SplitMix64 rng = split_stream(opt.seed, 0x657874726d6cULL);
    const int nrand = costly ? std::min(opt.random_starts, 2) : opt.random_starts;
    for (int r = 0; r < nrand; ++r) {
        std::vector<double> x(m);
        for (double& v : x) v = std::abs(rng.next_gaussian());
        starts.push_back(std::move(x));
    }

    const int iters = costly ? std::min(opt.ascent_iterations, 30) : opt.ascent_iterations;
    const int passes = costly ? std::min(opt.polish_passes, 2) : opt.polish_passes;
    const int samples = costly ? std::min(opt.line_samples, 6) : opt.line_samples;

    RatioResult best;
    auto consider = [&](std::vector<double> b, double v) {
        detail::normalize_l2(b);
        if (v > best.value * (1.0 + 1e-12) || best.witness.empty()) {
            best.value = v;
            best.witness = std::move(b);
        } else if (v >= best.value * (1.0 - 1e-12) && detail::tie_better(b, best.witness)) {
            best.value = std::max(best.value, v);
            best.witness = std::move(b);
        }
    };

    for (auto& b : starts) {
        detail::normalize_l2(b);
        double v = detail::ascend(rs, b, iters);
        v = detail::coordinate_polish(rs, b, v, passes, samples);
        consider(b, v);
    }

    if (opt.grid_certificate && m <= 6 && !costly) {
        auto grid = detail::grid_oracle(rs);
        if (grid.ran) {
            best.grid_certified = true;
            best.grid_best = grid.best;
            if (grid.best > best.value) {
                // polish from the grid argmax, then account for any shortfall
                auto b = grid.arg;
                double v = detail::ascend(rs, b, iters);
                v = detail::coordinate_polish(rs, b, v, passes, samples);
                consider(b, std::max(v, grid.best));
            }
            best.certified_gap = std::max(0.0, best.grid_best - best.value);
        }
    }
    return best;
}

namespace detail {

inline NormFunction l2_norm_fn() {
    NormFunction f;
    f.value = [](const SeqVector& v) { return v.norm_l2(); };
    f.subgrad = [](const SeqVector& v) {
        const double n = v.norm_l2();
        return n > 0 ? v.scaled(1.0 / n) : SeqVector{};
    };
    return f;
}

inline NormFunction space_norm_fn(const SpaceDescriptor& s, double dual_tol) {
    NormFunction f;
    f.expensive =
        s.is_dual() && (s.inner->kind == SpaceKind::tsirelson || s.inner->kind == SpaceKind::tsirelson2);
    if (s.is_dual() && s.inner->kind == SpaceKind::tsirelson2) {
        auto ws = std::make_shared<T2DualWorkspace>();
        auto cert = f.certified;
        f.value = [ws, cert, dual_tol](const SeqVector& v) {
            auto est = dual_tsirelson2(v, dual_tol, ws.get());
            if (!est.certified) *cert = false;
            return est.lower;  // lower endpoint: keeps the kappa* ratio from dipping under the exact value
        };
        f.subgrad = [ws, dual_tol](const SeqVector& v) {
            std::vector<double> wit;
            dual_tsirelson2(v, dual_tol, ws.get(), &wit);
            SeqVector g;
            for (std::size_t i = 0; i < wit.size(); ++i)
                if (wit[i] != 0.0) g.set(static_cast<int>(i) + 1, wit[i]);
            return g;
        };
        return f;
    }
    if (s.is_dual() && s.inner->kind == SpaceKind::tsirelson) {
        auto cert = f.certified;
        f.value = [cert, dual_tol](const SeqVector& v) {
            auto est = dual_tsirelson(v, dual_tol);
            if (!est.certified) *cert = false;
            return est.lower;
        };
        f.subgrad = [dual_tol](const SeqVector& v) {
            std::vector<double> wit;
            dual_tsirelson(v, dual_tol, &wit);
            SeqVector g;
            for (std::size_t i = 0; i < wit.size(); ++i)
                if (wit[i] != 0.0) g.set(static_cast<int>(i) + 1, wit[i]);
            return g;
        };
        return f;
    }
    f.value = [s, dual_tol](const SeqVector& v) { return space_norm(s, v, dual_tol); };
    f.subgrad = [s, dual_tol](const SeqVector& v) { return norm_subgradient(s, v, dual_tol); };
    return f;
}

inline std::vector<int> range_support(int n) {
    std::vector<int> F(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) F[static_cast<std::size_t>(j - 1)] = j;
    return F;
}

// Smart start for kappa on T2: kappa(F)^2 = sup { sum_F u : ||u||_T <= 1,
// u >= 0 } is the Tsirelson dual LP at the indicator of F; its maximizer u*
// gives the witness sqrt(u*).
inline SeqVector t2_kappa_start(const std::vector<int>& F) {
    SeqVector ones;
    for (int j : F) ones.set(j, 1.0);
    std::vector<double> wit;
    dual_tsirelson(ones, 1e-11, &wit);
    SeqVector start;
    for (std::size_t i = 0; i < wit.size(); ++i)
        if (wit[i] > 0.0) start.set(static_cast<int>(i) + 1, std::sqrt(wit[i]));
    return start;
}

} // namespace detail

/// kappa(F): equivalence constant of l2 against the space norm on F.
inline KappaResult kappa(const SpaceDescriptor& space, const std::vector<int>& F,
                         ExtremalOptions opt = {}) {
    if (F.empty()) throw std::invalid_argument("kappa: F must be nonempty");
    if (space.kind == SpaceKind::tsirelson2) opt.extra_starts.push_back(detail::t2_kappa_start(F));
    const NormFunction num = detail::l2_norm_fn();
    const NormFunction den = detail::space_norm_fn(space, opt.dual_tolerance);
    auto r = maximize_ratio(num, den, F, opt);
    KappaResult out;
    out.value = r.value;
    detail::RatioSearch rs{num, den, F};
    out.witness = rs.to_seq(r.witness);
    out.certified_gap = r.certified_gap;
    out.grid_certified = r.grid_certified;
    out.support = F;
    return out;
}

/// kappa*(F): as kappa, with the dual norm in the denominator. The dual
/// solver's interval widens certified_gap.
inline KappaResult kappa_star(const SpaceDescriptor& space, const std::vector<int>& F,
                              ExtremalOptions opt = {}) {
    if (F.empty()) throw std::invalid_argument("kappa_star: F must be nonempty");
    if (space.is_dual())
        throw std::invalid_argument("kappa_star: pass the primal space");
    const NormFunction num = detail::l2_norm_fn();
    const NormFunction den = detail::space_norm_fn(SpaceDescriptor::dual_space(space), opt.dual_tolerance);
    auto r = maximize_ratio(num, den, F, opt);
    KappaResult out;
    out.value = r.value;
    detail::RatioSearch rs{num, den, F};
    out.witness = rs.to_seq(r.witness);
    const bool solver_dual =
        space.kind == SpaceKind::tsirelson || space.kind == SpaceKind::tsirelson2;
    out.certified_gap = r.certified_gap + (solver_dual ? r.value * opt.dual_tolerance : 0.0);
    out.grid_certified = r.grid_certified;
    out.dual_certified = *den.certified;
    out.support = F;
    return out;
}

/// delta(M, N) = log sup M(v)/N(v) over supp v in F.
inline double calderon_gap(const SpaceDescriptor& M, const SpaceDescriptor& N,
                           const std::vector<int>& F, ExtremalOptions opt = {}) {
    if (N.kind == SpaceKind::tsirelson2) opt.extra_starts.push_back(detail::t2_kappa_start(F));
    const NormFunction num = detail::space_norm_fn(M, opt.dual_tolerance);
    const NormFunction den = detail::space_norm_fn(N, opt.dual_tolerance);
    return std::log(maximize_ratio(num, den, F, opt).value);
}

inline CalderonDistance calderon_distance(const SpaceDescriptor& M, const SpaceDescriptor& N,
                                          const std::vector<int>& F, const ExtremalOptions& opt = {}) {
    CalderonDistance d;
    d.gap_mn = calderon_gap(M, N, F, opt);
    d.gap_nm = calderon_gap(N, M, F, opt);
    d.distance = std::max(d.gap_mn, d.gap_nm);
    return d;
}

// --- cached kappa on initial segments [1, n] ---------------------------------
// Derivation formulas evaluate kappa([1, n]) repeatedly; growth tables need
// level n seeded with the level n-1 witness so the column is nondecreasing.

namespace detail {

struct KappaCache {
    static KappaCache& instance() {
        static KappaCache c;
        return c;
    }
    using Key = std::pair<std::string, int>;

    KappaResult get(const SpaceDescriptor& space, int n, bool star, const ExtremalOptions& base_opt) {
        const Key key{(star ? "*" : "") + space.to_string() + "#" + std::to_string(space.support_bound), n};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        ExtremalOptions opt = base_opt;
        if (n > 1) {
            KappaResult prev = get(space, n - 1, star, base_opt);
            opt.extra_starts.push_back(prev.witness);
        }
        opt.grid_certificate = base_opt.grid_certificate && n <= 6;
        KappaResult r = star ? kappa_star(space, range_support(n), opt)
                             : kappa(space, range_support(n), opt);
        if (n > 1) {
            // the previous witness is feasible at level n, so the column is monotone
            KappaResult prev = get(space, n - 1, star, base_opt);
            if (prev.value > r.value) r = prev;
        }
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = map_.emplace(key, r);
        if (!inserted) return it->second;
        return r;
    }

    std::mutex mu_;
    std::map<Key, KappaResult> map_;
};

} // namespace detail

inline KappaResult kappa_segment(const SpaceDescriptor& space, int n, ExtremalOptions opt = {}) {
    return detail::KappaCache::instance().get(space, n, false, opt);
}

inline KappaResult kappa_star_segment(const SpaceDescriptor& space, int n, ExtremalOptions opt = {}) {
    return detail::KappaCache::instance().get(space, n, true, opt);
}

} // namespace derivlab
