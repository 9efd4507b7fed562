#pragma once

// Finitely supported real sequences on positive integer indices, kept in
// canonical sparse form: strictly increasing indices, no stored zeros.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace derivlab {

class SeqVector {
public:
    using Entry = std::pair<int, double>;

    SeqVector() = default;

    /// Builds from (index, value) pairs; zero values are dropped, duplicate
    /// indices rejected.
    explicit SeqVector(std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.first < b.first; });
        entries_.reserve(entries.size());
        for (const auto& [i, v] : entries) {
            if (i < 1) throw std::invalid_argument("SeqVector: index must be >= 1");
            if (!entries_.empty() && entries_.back().first == i)
                throw std::invalid_argument("SeqVector: duplicate index");
            if (v != 0.0) entries_.emplace_back(i, v);
        }
    }

    static SeqVector unit(int j, double value = 1.0) {
        SeqVector v;
        if (j < 1) throw std::invalid_argument("SeqVector: index must be >= 1");
        if (value != 0.0) v.entries_.emplace_back(j, value);
        return v;
    }

    static SeqVector ones(int n) {
        SeqVector v;
        v.entries_.reserve(static_cast<std::size_t>(n));
        for (int j = 1; j <= n; ++j) v.entries_.emplace_back(j, 1.0);
        return v;
    }

    /// Dense coefficients over [1, n] (0-based storage: dense[i] = a_{i+1}).
    static SeqVector from_dense(const std::vector<double>& dense) {
        SeqVector v;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0.0) v.entries_.emplace_back(static_cast<int>(i) + 1, dense[i]);
        return v;
    }

    std::vector<double> to_dense(int n = 0) const {
        const int dim = std::max(n, max_index());
        std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
        for (const auto& [i, v] : entries_) out[static_cast<std::size_t>(i - 1)] = v;
        return out;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    int max_index() const { return entries_.empty() ? 0 : entries_.back().first; }
    int min_index() const { return entries_.empty() ? 0 : entries_.front().first; }

    double at(int j) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                                   [](const Entry& e, int k) { return e.first < k; });
        return (it != entries_.end() && it->first == j) ? it->second : 0.0;
    }

    void set(int j, double v) {
        if (j < 1) throw std::invalid_argument("SeqVector: index must be >= 1");
        auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                                   [](const Entry& e, int k) { return e.first < k; });
        if (it != entries_.end() && it->first == j) {
            if (v == 0.0) entries_.erase(it);
            else it->second = v;
        } else if (v != 0.0) {
            entries_.insert(it, {j, v});
        }
    }

    SeqVector scaled(double t) const {
        SeqVector out;
        if (t == 0.0) return out;
        out.entries_.reserve(entries_.size());
        for (const auto& [i, v] : entries_) {
            const double w = t * v;
            if (w != 0.0) out.entries_.emplace_back(i, w);
        }
        return out;
    }

    SeqVector plus(const SeqVector& rhs) const { return merged(rhs, +1.0); }
    SeqVector minus(const SeqVector& rhs) const { return merged(rhs, -1.0); }

    /// Coordinatewise product (multiplier action of l_inf).
    SeqVector hadamard(const SeqVector& rhs) const {
        SeqVector out;
        auto a = entries_.begin();
        auto b = rhs.entries_.begin();
        while (a != entries_.end() && b != rhs.entries_.end()) {
            if (a->first < b->first) ++a;
            else if (b->first < a->first) ++b;
            else {
                const double w = a->second * b->second;
                if (w != 0.0) out.entries_.emplace_back(a->first, w);
                ++a; ++b;
            }
        }
        return out;
    }

    SeqVector abs() const {
        SeqVector out = *this;
        for (auto& [i, v] : out.entries_) v = std::abs(v);
        return out;
    }

    SeqVector squared() const {
        SeqVector out = *this;
        for (auto& [i, v] : out.entries_) v = v * v;
        return out;
    }

    double dot(const SeqVector& rhs) const {
        double s = 0.0;
        auto a = entries_.begin();
        auto b = rhs.entries_.begin();
        while (a != entries_.end() && b != rhs.entries_.end()) {
            if (a->first < b->first) ++a;
            else if (b->first < a->first) ++b;
            else { s += a->second * b->second; ++a; ++b; }
        }
        return s;
    }

    double norm_l2() const {
        double s = 0.0;
        for (const auto& [i, v] : entries_) s += v * v;
        return std::sqrt(s);
    }

    double norm_l1() const {
        double s = 0.0;
        for (const auto& [i, v] : entries_) s += std::abs(v);
        return s;
    }

    double norm_sup() const {
        double s = 0.0;
        for (const auto& [i, v] : entries_) s = std::max(s, std::abs(v));
        return s;
    }

    double norm_lp(double p) const {
        if (p < 1.0) throw std::invalid_argument("norm_lp: requires p >= 1");
        if (entries_.empty()) return 0.0;
        if (entries_.size() == 1) return std::abs(entries_.front().second);
        if (p == 1.0) return norm_l1();
        if (p == 2.0) return norm_l2();
        double s = 0.0;
        for (const auto& [i, v] : entries_) s += std::pow(std::abs(v), p);
        return std::pow(s, 1.0 / p);
    }

    bool operator==(const SeqVector& rhs) const { return entries_ == rhs.entries_; }

private:
    SeqVector merged(const SeqVector& rhs, double sign) const {
        SeqVector out;
        out.entries_.reserve(entries_.size() + rhs.entries_.size());
        auto a = entries_.begin();
        auto b = rhs.entries_.begin();
        while (a != entries_.end() || b != rhs.entries_.end()) {
            if (b == rhs.entries_.end() || (a != entries_.end() && a->first < b->first)) {
                out.entries_.emplace_back(*a); ++a;
            } else if (a == entries_.end() || b->first < a->first) {
                out.entries_.emplace_back(b->first, sign * b->second); ++b;
            } else {
                const double w = a->second + sign * b->second;
                if (w != 0.0) out.entries_.emplace_back(a->first, w);
                ++a; ++b;
            }
        }
        return out;
    }

    std::vector<Entry> entries_;
};

/// Relative l2 distance, with the convention 0/0 = 0.
inline double rel_l2_error(const SeqVector& got, const SeqVector& want) {
    const double scale = std::max(want.norm_l2(), got.norm_l2());
    if (scale == 0.0) return 0.0;
    return got.minus(want).norm_l2() / scale;
}

} // namespace derivlab
