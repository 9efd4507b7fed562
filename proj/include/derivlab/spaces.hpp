#pragma once

// Named finite-dimensional sequence spaces with norm evaluators: lp, c0,
// Tsirelson T, its 2-convexification T2, weighted l2, and duals thereof.
// Descriptor grammar: "lp:2", "c0", "l1" (alias lp:1), "T", "T2",
// "wl2:<path-to-weights>", "dual:<inner>".

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "derivlab/seq_vector.hpp"
#include "derivlab/tsirelson.hpp"

namespace derivlab {

enum class SpaceKind { lp, c0, tsirelson, tsirelson2, weighted_l2, dual_of };

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::lp;
    double p = 2.0;                         // lp only
    std::vector<double> weights;            // weighted_l2 only; weights[j-1] = w_j
    std::shared_ptr<const SpaceDescriptor> inner;  // dual_of only
    int support_bound = 16;

    static SpaceDescriptor lp_space(double p, int bound = 16) {
        if (!(p >= 1.0) || !std::isfinite(p))
            throw std::invalid_argument("SpaceDescriptor: lp requires 1 <= p < inf");
        SpaceDescriptor d;
        d.kind = SpaceKind::lp;
        d.p = p;
        d.support_bound = bound;
        return d;
    }
    static SpaceDescriptor c0_space(int bound = 16) {
        SpaceDescriptor d;
        d.kind = SpaceKind::c0;
        d.support_bound = bound;
        return d;
    }
    static SpaceDescriptor tsirelson_space(int bound = 16) {
        SpaceDescriptor d;
        d.kind = SpaceKind::tsirelson;
        d.support_bound = bound;
        return d;
    }
    static SpaceDescriptor tsirelson2_space(int bound = 16) {
        SpaceDescriptor d;
        d.kind = SpaceKind::tsirelson2;
        d.support_bound = bound;
        return d;
    }
    static SpaceDescriptor weighted_l2_space(std::vector<double> w, int bound = 0) {
        for (double wj : w)
            if (!(wj >= 1.0))
                throw std::invalid_argument("SpaceDescriptor: weighted_l2 requires w_j >= 1");
        if (w.empty()) throw std::invalid_argument("SpaceDescriptor: empty weight sequence");
        SpaceDescriptor d;
        d.kind = SpaceKind::weighted_l2;
        d.support_bound = bound > 0 ? bound : static_cast<int>(w.size());
        d.weights = std::move(w);
        return d;
    }
    static SpaceDescriptor dual_space(SpaceDescriptor base) {
        SpaceDescriptor d;
        d.kind = SpaceKind::dual_of;
        d.support_bound = base.support_bound;
        d.inner = std::make_shared<const SpaceDescriptor>(std::move(base));
        return d;
    }

    bool is_dual() const { return kind == SpaceKind::dual_of; }
    const SpaceDescriptor& primal() const {
        if (!is_dual()) return *this;
        return *inner;
    }

    double weight(int j) const {
        if (j < 1) throw std::invalid_argument("weight: index must be >= 1");
        if (static_cast<std::size_t>(j) <= weights.size()) return weights[static_cast<std::size_t>(j - 1)];
        return weights.empty() ? 1.0 : weights.back();  // constant continuation past the table
    }

    std::string to_string() const {
        switch (kind) {
            case SpaceKind::lp: {
                if (p == 1.0) return "l1";
                std::ostringstream os;
                os << "lp:" << p;
                return os.str();
            }
            case SpaceKind::c0: return "c0";
            case SpaceKind::tsirelson: return "T";
            case SpaceKind::tsirelson2: return "T2";
            case SpaceKind::weighted_l2: {
                std::ostringstream os;
                os << "wl2[" << weights.size() << "]";
                return os.str();
            }
            case SpaceKind::dual_of: return "dual:" + inner->to_string();
        }
        return "?";
    }
};

inline std::vector<double> load_weights_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("weights file not found: " + path);
    std::vector<double> w;
    double v;
    char c;
    // accepts a JSON-style array or whitespace-separated numbers
    while (in >> c) {
        if (c == '[' || c == ',' || c == ']') continue;
        in.putback(c);
        if (in >> v) w.push_back(v);
        else break;
    }
    if (w.empty()) throw std::invalid_argument("weights file has no numbers: " + path);
    return w;
}

inline SpaceDescriptor parse_space(const std::string& text, int support_bound = 16) {
    if (text == "c0") return SpaceDescriptor::c0_space(support_bound);
    if (text == "l1") return SpaceDescriptor::lp_space(1.0, support_bound);
    if (text == "l2") return SpaceDescriptor::lp_space(2.0, support_bound);
    if (text == "T") return SpaceDescriptor::tsirelson_space(support_bound);
    if (text == "T2") return SpaceDescriptor::tsirelson2_space(support_bound);
    if (text.rfind("lp:", 0) == 0) {
        const std::string num = text.substr(3);
        std::size_t pos = 0;
        double p = 0.0;
        try { p = std::stod(num, &pos); } catch (const std::exception&) {
            throw std::invalid_argument("parse_space: bad lp exponent in '" + text + "'");
        }
        if (pos != num.size())
            throw std::invalid_argument("parse_space: bad lp exponent in '" + text + "'");
        return SpaceDescriptor::lp_space(p, support_bound);
    }
    if (text.rfind("wl2:", 0) == 0)
        return SpaceDescriptor::weighted_l2_space(load_weights_file(text.substr(4)), support_bound);
    if (text.rfind("dual:", 0) == 0)
        return SpaceDescriptor::dual_space(parse_space(text.substr(5), support_bound));
    throw std::invalid_argument("parse_space: unknown space '" + text + "'");
}

namespace detail {

inline void check_support(const SpaceDescriptor& s, const SeqVector& v) {
    if (v.max_index() > s.support_bound)
        throw std::invalid_argument("vector support exceeds support_bound " +
                                    std::to_string(s.support_bound) + " of space " + s.to_string());
}

} // namespace detail

/// Norm of a primal (non-dual) kind. The full dispatcher including dual kinds
/// lives in dual_norm.hpp as space_norm().
inline double primal_norm(const SpaceDescriptor& s, const SeqVector& v) {
    switch (s.kind) {
        case SpaceKind::lp: return v.norm_lp(s.p);
        case SpaceKind::c0: return v.norm_sup();
        case SpaceKind::tsirelson: return tsirelson_norm(v);
        case SpaceKind::tsirelson2: return std::sqrt(tsirelson_norm(v.squared()));
        case SpaceKind::weighted_l2: {
            const auto& es = v.entries();
            if (es.empty()) return 0.0;
            if (es.size() == 1) return std::abs(es.front().second) / s.weight(es.front().first);
            double acc = 0.0;
            for (const auto& [j, x] : es) {
                const double t = x / s.weight(j);
                acc += t * t;
            }
            return std::sqrt(acc);
        }
        case SpaceKind::dual_of:
            throw std::invalid_argument("primal_norm: dual kind; use space_norm()");
    }
    return 0.0;
}

} // namespace derivlab
