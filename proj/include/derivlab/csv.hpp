#pragma once

// Deterministic CSV emission: %.17g round-trips doubles, and two runs with
// the same config produce identical bytes.

#include <cstdio>
#include <string>

#include "derivlab/derivation.hpp"
#include "derivlab/extremal.hpp"

namespace derivlab {

inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct KappaTableRow {
    int n = 0;
    double kappa = 0.0;
    double kappa_star = 0.0;
    double log_kappa = 0.0;
    int floor_log_kappa = 0;
    double certified_gap = 0.0;
};

inline std::vector<KappaTableRow> kappa_table(const SpaceDescriptor& space, int n_lo, int n_hi,
                                              const ExtremalOptions& opt = {}) {
    std::vector<KappaTableRow> rows;
    for (int n = std::max(n_lo, 1); n <= n_hi; ++n) {
        const KappaResult kr = kappa_segment(space, n, opt);
        const KappaResult ks = kappa_star_segment(space, n, opt);
        KappaTableRow row;
        row.n = n;
        row.kappa = kr.value;
        row.kappa_star = ks.value;
        row.log_kappa = std::log(kr.value);
        row.floor_log_kappa = static_cast<int>(std::floor(row.log_kappa));
        row.certified_gap = kr.certified_gap;
        rows.push_back(row);
    }
    return rows;
}

inline std::string to_csv(const std::vector<KappaTableRow>& rows) {
    std::string out = "n,kappa,kappa_star,log_kappa,floor_log_kappa,certified_gap\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + ',' + csv_double(r.kappa) + ',' + csv_double(r.kappa_star) +
               ',' + csv_double(r.log_kappa) + ',' + std::to_string(r.floor_log_kappa) + ',' +
               csv_double(r.certified_gap) + '\n';
    }
    return out;
}

inline std::string to_csv(const GrowthTable& table) {
    std::string out = "n,kappa,kappa_star,floor_log_kappa,floor_log_kappa_star,omega_scale\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.n) + ',' + csv_double(r.kappa) + ',' + csv_double(r.kappa_star) +
               ',' + std::to_string(r.floor_log_kappa) + ',' +
               std::to_string(r.floor_log_kappa_star) + ',' + csv_double(r.omega_scale) + '\n';
    }
    return out;
}

} // namespace derivlab
