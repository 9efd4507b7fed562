#pragma once

// JSON wire formats.
//   SeqVector      {"indices":[i1,...], "values":[v1,...]}   strictly increasing, no zeros
//   JSequence      {"theta":0.5, "couple":["T2","dual:T2"], "q":[2,2],
//                   "slots":[{"n":-4, "vector":{...}}, ...]}
//   DerivedVector  {"x":{...}, "y":{...}, "omega":{"kind":"kalton_peck", ...}}
// Parse errors name the offending field.

#include <string>
#include <utility>

#include <json.hpp>

#include "derivlab/derivation.hpp"
#include "derivlab/jspace.hpp"
#include "derivlab/rand_sums.hpp"
#include "derivlab/seq_vector.hpp"
#include "derivlab/twisted.hpp"

namespace derivlab {

using nlohmann::json;

inline json to_json(const SeqVector& v) {
    json idx = json::array(), val = json::array();
    for (const auto& [i, x] : v.entries()) {
        idx.push_back(i);
        val.push_back(x);
    }
    return json{{"indices", idx}, {"values", val}};
}

inline SeqVector seqvector_from_json(const json& j) {
    if (!j.is_object() || !j.contains("indices") || !j.contains("values"))
        throw std::invalid_argument("vector JSON: expected object with 'indices' and 'values'");
    const json& idx = j.at("indices");
    const json& val = j.at("values");
    if (!idx.is_array()) throw std::invalid_argument("vector JSON: 'indices' must be an array");
    if (!val.is_array()) throw std::invalid_argument("vector JSON: 'values' must be an array");
    if (idx.size() != val.size())
        throw std::invalid_argument("vector JSON: 'indices' and 'values' lengths differ");
    SeqVector v;
    int prev = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (!idx[k].is_number_integer())
            throw std::invalid_argument("vector JSON: 'indices' must hold integers");
        const int i = idx[k].get<int>();
        if (i < 1) throw std::invalid_argument("vector JSON: 'indices' must be >= 1");
        if (i <= prev)
            throw std::invalid_argument("vector JSON: 'indices' must be strictly increasing");
        prev = i;
        if (!val[k].is_number())
            throw std::invalid_argument("vector JSON: 'values' must hold numbers");
        const double x = val[k].get<double>();
        if (x == 0.0) throw std::invalid_argument("vector JSON: 'values' must not contain zeros");
        v.set(i, x);
    }
    return v;
}

inline json to_json(const DerivationMap& m) {
    json j{{"kind", m.kind_name()}};
    switch (m.kind) {
        case DerivationKind::lions_peetre:
        case DerivationKind::rank_j:
            j["p0"] = m.p0;
            j["p1"] = m.p1;
            j["theta"] = m.theta;
            break;
        case DerivationKind::critical_real:
        case DerivationKind::critical_complex:
            j["couple"] = json::array({m.couple.b0.to_string(), m.couple.b1.to_string()});
            break;
        case DerivationKind::weighted_demo:
            j["weights"] = m.weights;
            break;
        default:
            break;
    }
    return j;
}

inline DerivationMap derivation_map_from_json(const json& j, int support_bound = 16) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("omega JSON: expected object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return DerivationMap::zero_map();
    if (kind == "kalton_peck") return DerivationMap::kalton_peck();
    if (kind == "lions_peetre" || kind == "rank_J") {
        if (!j.contains("p0") || !j.contains("p1") || !j.contains("theta"))
            throw std::invalid_argument("omega JSON: '" + kind + "' needs 'p0', 'p1', 'theta'");
        const double p0 = j.at("p0").get<double>();
        const double p1 = j.at("p1").get<double>();
        const double theta = j.at("theta").get<double>();
        return kind == "lions_peetre" ? DerivationMap::lions_peetre(p0, p1, theta)
                                      : DerivationMap::rank_j(p0, p1, theta);
    }
    if (kind == "critical_real" || kind == "critical_complex") {
        if (!j.contains("couple") || !j.at("couple").is_array() || j.at("couple").size() != 2)
            throw std::invalid_argument("omega JSON: '" + kind + "' needs 'couple' of two spaces");
        Couple c{parse_space(j.at("couple")[0].get<std::string>(), support_bound),
                 parse_space(j.at("couple")[1].get<std::string>(), support_bound)};
        return kind == "critical_real" ? DerivationMap::critical_real(c)
                                       : DerivationMap::critical_complex(c);
    }
    if (kind == "weighted_demo") {
        if (!j.contains("weights") || !j.at("weights").is_array())
            throw std::invalid_argument("omega JSON: 'weighted_demo' needs 'weights' array");
        return DerivationMap::weighted_demo(j.at("weights").get<std::vector<double>>());
    }
    throw std::invalid_argument("omega JSON: unknown kind '" + kind + "'");
}

inline json to_json(const JSequence& s, double theta) {
    json slots = json::array();
    for (const auto& [n, b] : s.slots) slots.push_back(json{{"n", n}, {"vector", to_json(b)}});
    return json{{"theta", theta},
                {"couple", json::array({s.couple.b0.to_string(), s.couple.b1.to_string()})},
                {"q", json::array({s.q0, s.q1})},
                {"slots", slots}};
}

inline std::pair<JSequence, double> jsequence_from_json(const json& j, int support_bound = 16) {
    if (!j.is_object()) throw std::invalid_argument("jsequence JSON: expected object");
    for (const char* field : {"theta", "couple", "q", "slots"})
        if (!j.contains(field))
            throw std::invalid_argument(std::string("jsequence JSON: missing '") + field + "'");
    JSequence s;
    const double theta = j.at("theta").get<double>();
    const json& c = j.at("couple");
    if (!c.is_array() || c.size() != 2)
        throw std::invalid_argument("jsequence JSON: 'couple' must be two space strings");
    s.couple = {parse_space(c[0].get<std::string>(), support_bound),
                parse_space(c[1].get<std::string>(), support_bound)};
    const json& q = j.at("q");
    if (!q.is_array() || q.size() != 2)
        throw std::invalid_argument("jsequence JSON: 'q' must be [q0, q1]");
    s.q0 = q[0].get<double>();
    s.q1 = q[1].get<double>();
    for (const json& slot : j.at("slots")) {
        if (!slot.contains("n") || !slot.contains("vector"))
            throw std::invalid_argument("jsequence JSON: each slot needs 'n' and 'vector'");
        s.set_slot(slot.at("n").get<int>(), seqvector_from_json(slot.at("vector")));
    }
    return {s, theta};
}

inline json to_json(const DerivedVector& v, const DerivationMap& omega) {
    return json{{"x", to_json(v.x)}, {"y", to_json(v.y)}, {"omega", to_json(omega)}};
}

inline std::pair<DerivedVector, DerivationMap> derived_vector_from_json(const json& j,
                                                                        int support_bound = 16) {
    if (!j.is_object() || !j.contains("x") || !j.contains("y") || !j.contains("omega"))
        throw std::invalid_argument("derived vector JSON: needs 'x', 'y', 'omega'");
    DerivedVector v{seqvector_from_json(j.at("x")), seqvector_from_json(j.at("y"))};
    return {v, derivation_map_from_json(j.at("omega"), support_bound)};
}

inline json to_json(const SelectorReport& r) {
    return json{{"jsequence", to_json(r.jseq, r.theta)},
                {"target", to_json(r.target)},
                {"target_norm", r.target_norm},
                {"bound_ratio", r.bound_ratio},
                {"slot_offset", r.slot_offset},
                {"experimental_theta", r.experimental_theta},
                {"degenerate", r.degenerate}};
}

inline json to_json(const RandomaReport& r) {
    return json{{"m", r.m},     {"p", r.p},     {"theta", r.theta}, {"q", r.q},
                {"lhs", r.lhs}, {"rhs", r.rhs}, {"c_emp", r.c_emp}, {"mode", r.mode},
                {"seed", r.seed}};
}

inline json to_json(const AverageBoundReport& r) {
    return json{{"m", r.m},     {"p", r.p},     {"theta", r.theta}, {"q", r.q},
                {"lhs", r.lhs}, {"rhs", r.rhs}, {"c_emp", r.c_emp}, {"seed", r.seed}};
}

} // namespace derivlab
