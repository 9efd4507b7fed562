#pragma once

// Tsirelson norm on finite supports (Figiel-Johnson recursion):
//
//   ||x|| = max( ||x||_inf, (1/2) max { sum_i ||E_i x|| } )
//
// over families E_1 < ... < E_k of successive sets with k <= min E_1. On
// finite supports the sets may be taken to be intervals (restriction to a
// subset never increases the norm, and widening each set to its convex hull
// keeps the family admissible and disjoint), which yields an interval DP,
// solved in one sweep by window length.
//
// The same DP, backtracked, produces a maximizing functional: a dyadic
// coefficient vector f >= 0 with <f, |x|> = ||x||_T. That functional is the
// separation oracle behind the dual-norm solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "derivlab/seq_vector.hpp"

namespace derivlab {

namespace detail {

constexpr double kNegInf = -1e300;

struct TsirelsonWorkspace {
    std::vector<double> V;    // V[(a-1)*n + (b-1)]
    std::vector<double> fp;   // inner DP values, (n+1) x (n+2)
    std::vector<int> fch;     // inner DP choices: end index, or -1 = skip
    int n = 0;

    void resize(int n_) {
        n = n_;
        V.assign(static_cast<std::size_t>(n) * n, 0.0);
        fp.assign(static_cast<std::size_t>(n + 1) * (n + 2), 0.0);
        fch.assign(static_cast<std::size_t>(n + 1) * (n + 2), -1);
    }
    double& v(int a, int b) { return V[static_cast<std::size_t>(a - 1) * n + (b - 1)]; }
    double vv(int a, int b) const { return V[static_cast<std::size_t>(a - 1) * n + (b - 1)]; }
    double& fpv(int c, int j) { return fp[static_cast<std::size_t>(c) * (n + 2) + j]; }
    int& fchv(int c, int j) { return fch[static_cast<std::size_t>(c) * (n + 2) + j]; }
};

// fp(c, j) = best sum of exactly c successive intervals within [j, b], every
// part a proper subwindow of [a, b] (so the referenced V values are final).
inline void inner_family_dp(TsirelsonWorkspace& ws, int a, int b, bool record) {
    const int len = b - a + 1;
    for (int j = a; j <= b + 1; ++j) ws.fpv(0, j) = 0.0;
    for (int c = 1; c <= len; ++c) {
        for (int j = b; j >= a; --j) {
            double best = (j + 1 <= b) ? ws.fpv(c, j + 1) : kNegInf;
            int choice = -1;
            for (int e = j; e <= b; ++e) {
                if (j == a && e == b) continue;
                double tail;
                if (c == 1) tail = 0.0;
                else if (e + 1 <= b) tail = ws.fpv(c - 1, e + 1);
                else break;
                if (tail <= kNegInf / 2) continue;
                const double cand = ws.vv(j, e) + tail;
                if (cand > best) { best = cand; choice = e; }
            }
            ws.fpv(c, j) = best;
            if (record) ws.fchv(c, j) = choice;
        }
    }
}

// Best admissible family value for window [a, b]; optionally reports the
// achieving (start, parts) pair. Scan order is fixed, so repeated calls make
// identical choices.
inline double family_value(TsirelsonWorkspace& ws, int a, int b, bool record,
                           int* out_s = nullptr, int* out_k = nullptr) {
    const int len = b - a + 1;
    if (len < 2) return 0.0;
    inner_family_dp(ws, a, b, record);
    double fam = 0.0;
    for (int s = a; s <= b; ++s) {
        const int kmax = std::min(s, len);
        for (int k = 2; k <= kmax; ++k) {
            const double f = ws.fpv(k, s);
            if (f > kNegInf / 2 && 0.5 * f > fam) {
                fam = 0.5 * f;
                if (out_s) { *out_s = s; *out_k = k; }
            }
        }
    }
    return fam;
}

inline void tsirelson_tables(TsirelsonWorkspace& ws, const double* x, int n) {
    ws.resize(n);
    for (int len = 1; len <= n; ++len) {
        for (int a = 1; a + len - 1 <= n; ++a) {
            const int b = a + len - 1;
            double sup = 0.0;
            for (int j = a; j <= b; ++j) sup = std::max(sup, x[j - 1]);
            const double fam = family_value(ws, a, b, false);
            ws.v(a, b) = (fam > sup) ? fam : sup;
        }
    }
}

inline TsirelsonWorkspace& tls_workspace() {
    thread_local TsirelsonWorkspace ws;
    return ws;
}

inline int trimmed_size(const std::vector<double>& x) {
    int n = static_cast<int>(x.size());
    while (n > 0 && x[n - 1] == 0.0) --n;
    return n;
}

inline void emit_argmax(TsirelsonWorkspace& ws, const double* x, int a, int b,
                        double weight, std::vector<double>& f) {
    double sup = 0.0;
    int arg = a;
    for (int j = a; j <= b; ++j)
        if (x[j - 1] > sup) { sup = x[j - 1]; arg = j; }
    int s = a, k = 0;
    const double fam = family_value(ws, a, b, true, &s, &k);
    if (!(fam > sup)) {  // same comparison as tsirelson_tables: ties go to sup
        f[static_cast<std::size_t>(arg - 1)] += weight;
        return;
    }
    std::vector<std::pair<int, int>> parts;
    int c = k, j = s;
    while (c > 0) {
        const int e = ws.fchv(c, j);
        if (e < 0) { ++j; continue; }
        parts.emplace_back(j, e);
        j = e + 1;
        --c;
    }
    for (const auto& [pa, pb] : parts)  // recursion clobbers fp/fch; parts saved first
        emit_argmax(ws, x, pa, pb, weight * 0.5, f);
}

} // namespace detail

/// Tsirelson norm of a coefficient vector (0-based dense: x[i] is a_{i+1}).
inline double tsirelson_norm_dense(const std::vector<double>& x) {
    const int n = detail::trimmed_size(x);
    if (n == 0) return 0.0;
    std::vector<double> ax(x.begin(), x.begin() + n);
    for (double& v : ax) v = std::abs(v);
    auto& ws = detail::tls_workspace();
    detail::tsirelson_tables(ws, ax.data(), n);
    return ws.vv(1, n);
}

inline double tsirelson_norm(const SeqVector& v) {
    if (v.empty()) return 0.0;
    return tsirelson_norm_dense(v.to_dense());
}

/// A maximizing functional: f >= 0 with dyadic entries and
/// <f, |x|> = ||x||_T (same DP arithmetic, deterministic tie-breaks).
inline std::vector<double> tsirelson_argmax_functional(const std::vector<double>& x) {
    std::vector<double> f(x.size(), 0.0);
    const int n = detail::trimmed_size(x);
    if (n == 0) return f;
    std::vector<double> ax(x.begin(), x.begin() + n);
    for (double& v : ax) v = std::abs(v);
    auto& ws = detail::tls_workspace();
    detail::tsirelson_tables(ws, ax.data(), n);
    detail::emit_argmax(ws, ax.data(), 1, n, 1.0, f);
    return f;
}

// ---------------------------------------------------------------------------
// Explicit norming functional set.
//
// Built per support window [a, b]: bucket (a, b) holds the maximal
// functionals whose support starts at a and ends at b. Composites are
// (1/2)(f_1 + ... + f_k) over parts with successive windows and k <= a; parts
// have strictly shorter windows, so buckets resolve bottom-up with no
// fixed-point iteration. Domination pruning inside a bucket is lossless for
// the induced max: a dominating member has the same window, so it can stand
// in for the dominated one in any admissible family.
// ---------------------------------------------------------------------------

struct NormingFunctionalSet {
    int n = 0;
    std::vector<std::vector<double>> functionals;  // dense rows of length n
    int generation_depth = 0;

    /// max_f <f, |x|> for dense x of length >= n.
    double induced_norm(const std::vector<double>& x) const {
        double best = 0.0;
        for (const auto& f : functionals) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += f[static_cast<std::size_t>(j)] * std::abs(x[static_cast<std::size_t>(j)]);
            if (s > best) best = s;
        }
        return best;
    }
};

namespace detail {

struct WindowBucket {
    std::vector<std::vector<double>> fns;  // window-local dense, length b-a+1
    std::vector<int> depth;
};

inline bool dominates(const std::vector<double>& g, const std::vector<double>& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (g[i] < f[i]) return false;
    return true;
}

inline void domination_prune(std::vector<std::vector<double>>& fns, std::vector<int>& depth) {
    std::vector<std::size_t> order(fns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> sums(fns.size(), 0.0);
    for (std::size_t i = 0; i < fns.size(); ++i)
        for (double v : fns[i]) sums[i] += v;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (sums[i] != sums[j]) return sums[i] > sums[j];
        return fns[i] > fns[j];
    });
    std::vector<std::vector<double>> kept;
    std::vector<int> kdepth;
    for (std::size_t oi : order) {
        const auto& f = fns[oi];
        bool dom = false;
        for (const auto& g : kept)
            if (dominates(g, f)) { dom = true; break; }
        if (!dom) {
            kept.push_back(f);
            kdepth.push_back(depth.empty() ? 0 : depth[oi]);
        }
    }
    fns = std::move(kept);
    depth = std::move(kdepth);
}

class NfsCache {
public:
    static NfsCache& instance() {
        static NfsCache c;
        return c;
    }

    const WindowBucket& window(int a, int b) {
        const auto key = std::make_pair(a, b);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = windows_.find(key);
            if (it != windows_.end()) return it->second;
        }
        WindowBucket built = build_window(a, b);
        std::lock_guard<std::mutex> lock(mu_);
        return windows_.emplace(key, std::move(built)).first->second;
    }

    const NormingFunctionalSet& full_set(int n) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = sets_.find(n);
            if (it != sets_.end()) return it->second;
        }
        NormingFunctionalSet s = build_full(n);
        std::lock_guard<std::mutex> lock(mu_);
        return sets_.emplace(n, std::move(s)).first->second;
    }

private:
    WindowBucket build_window(int a, int b) {
        WindowBucket out;
        if (a == b) {
            out.fns.push_back({1.0});
            out.depth.push_back(1);
            return out;
        }
        const int len = b - a + 1;
        const int kmax = std::min(a, len);
        if (kmax < 2) return out;
        std::vector<double> partial(static_cast<std::size_t>(len), 0.0);
        // chain(l, used, d): append one part starting at l, recurse for the next
        std::function<void(int, int, int)> chain = [&](int l, int used, int d) {
            for (int h = l; h <= b; ++h) {
                if (used == 0 && h == b) break;  // k >= 2 needs room for a second part
                const auto& part = window(l, h);
                for (std::size_t pi = 0; pi < part.fns.size(); ++pi) {
                    for (int j = l; j <= h; ++j)
                        partial[static_cast<std::size_t>(j - a)] +=
                            part.fns[pi][static_cast<std::size_t>(j - l)];
                    const int d2 = std::max(d, part.depth[pi]);
                    if (h == b && used + 1 >= 2) {
                        std::vector<double> f(partial);
                        for (double& v : f) v *= 0.5;
                        out.fns.push_back(std::move(f));
                        out.depth.push_back(d2 + 1);
                    }
                    if (h < b && used + 1 < kmax)
                        for (int l2 = h + 1; l2 <= b; ++l2) chain(l2, used + 1, d2);
                    for (int j = l; j <= h; ++j)
                        partial[static_cast<std::size_t>(j - a)] -=
                            part.fns[pi][static_cast<std::size_t>(j - l)];
                }
            }
        };
        chain(a, 0, 0);
        domination_prune(out.fns, out.depth);
        return out;
    }

    NormingFunctionalSet build_full(int n) {
        NormingFunctionalSet set;
        set.n = n;
        std::vector<std::vector<double>> all;
        std::vector<int> depths;
        for (int a = 1; a <= n; ++a) {
            for (int b = a; b <= n; ++b) {
                const auto& bucket = window(a, b);
                for (std::size_t i = 0; i < bucket.fns.size(); ++i) {
                    std::vector<double> dense(static_cast<std::size_t>(n), 0.0);
                    for (int j = a; j <= b; ++j)
                        dense[static_cast<std::size_t>(j - 1)] =
                            bucket.fns[i][static_cast<std::size_t>(j - a)];
                    all.push_back(std::move(dense));
                    depths.push_back(bucket.depth[i]);
                }
            }
        }
        domination_prune(all, depths);  // final global prune; nothing composes past here
        set.functionals = std::move(all);
        for (int d : depths) set.generation_depth = std::max(set.generation_depth, d);
        return set;
    }

    std::mutex mu_;
    std::map<std::pair<int, int>, WindowBucket> windows_;
    std::map<int, NormingFunctionalSet> sets_;
};

} // namespace detail

inline int norming_functional_cap_default() { return 16; }

/// Explicit maximal norming functionals on [1, n]. Memoized; concurrent
/// builders may race, any winner is correct.
inline const NormingFunctionalSet& norming_functionals(int n, int cap = norming_functional_cap_default()) {
    if (n < 1) throw std::invalid_argument("norming_functionals: n must be >= 1");
    if (n > cap) {
        // growth is roughly x2.5 per index; extrapolate from a cheap build
        const int base = std::min(cap, 9);
        const std::size_t cbase = detail::NfsCache::instance().full_set(base).functionals.size();
        const double est = static_cast<double>(cbase) * std::pow(2.5, n - base);
        throw std::length_error("norming_functionals: n=" + std::to_string(n) +
                                " exceeds cap " + std::to_string(cap) +
                                " (estimated set cardinality ~" +
                                std::to_string(static_cast<long long>(est)) + ")");
    }
    return detail::NfsCache::instance().full_set(n);
}

} // namespace derivlab
