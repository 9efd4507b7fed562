// derivlab: numerical laboratory for derivation operators on interpolation
// scales of sequence spaces.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage or input error. Machine-readable output goes to stdout,
// diagnostics to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "derivlab/derivlab.hpp"

namespace {

using namespace derivlab;

SeqVector read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("vector file not found: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("vector file " + path + ": " + e.what());
    }
    return seqvector_from_json(j);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto pos = text.find("..");
    try {
        if (pos == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad range '" + text + "', expected a..b");
    }
}

Couple parse_couple(const std::string& text, int bound) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("bad couple '" + text + "', expected B0,B1");
    return {parse_space(text.substr(0, comma), bound), parse_space(text.substr(comma + 1), bound)};
}

std::vector<double> parse_delta_spec(const std::string& spec, int n_max) {
    if (spec == "loglog") return loglog_delta(n_max);
    if (spec == "one") return std::vector<double>(static_cast<std::size_t>(n_max), 1.0);
    if (spec.rfind("file:", 0) == 0) return load_weights_file(spec.substr(5));
    throw std::invalid_argument("bad delta spec '" + spec + "' (loglog, one, file:<path>)");
}

struct Cli {
    RunConfig cfg;
    std::string config_path;

    ExtremalOptions extremal() const {
        ExtremalOptions opt;
        opt.seed = cfg.seed;
        opt.dual_tolerance = std::min(cfg.dual_tolerance, 1e-7);
        return opt;
    }
};

} // namespace

int main(int argc, char** argv) {
    using namespace derivlab;
    CLI::App app{"derivation-operator laboratory for interpolation scales"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    Cli cli;
    std::string space_str = "l2", couple_str = "l2,l2", map_str = "kalton_peck";
    std::string input_path, out_path, range_str = "1..8", suite = "all", delta_spec = "loglog";
    std::string space_m = "l1", space_n = "l2", selector_kind = "single_slot";
    double theta = 0.5, p0 = 1.0, p1 = 2.0;
    std::string q_str = "2,2";
    int n_single = 8, n_max = 16, floor_log = 0, sign = -1;

    app.add_option("--config", cli.config_path, "flat JSON config file (flags override)");
    app.add_option("--seed", cli.cfg.seed, "root seed");
    app.add_option("--tol", cli.cfg.dual_tolerance, "dual-solver tolerance");
    app.add_option("--trials", cli.cfg.trials, "Monte Carlo trial count");
    app.add_option("--support-cap", cli.cfg.support_cap, "support bound for spaces");
    app.add_option("--format", cli.cfg.output_format, "csv or json");

    auto* cmd_norm = app.add_subcommand("norm", "norm of a vector in a space");
    cmd_norm->add_option("--space", space_str, "space descriptor")->required();
    cmd_norm->add_option("--input", input_path, "vector JSON file")->required();

    auto* cmd_dual = app.add_subcommand("dual", "certified dual norm of a vector");
    cmd_dual->add_option("--space", space_str, "primal space descriptor")->required();
    cmd_dual->add_option("--input", input_path, "vector JSON file")->required();

    auto* cmd_kappa = app.add_subcommand("kappa", "kappa/kappa* table over initial segments");
    cmd_kappa->add_option("--space", space_str, "space descriptor")->required();
    cmd_kappa->add_option("--range", range_str, "n range a..b");
    cmd_kappa->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_dist = app.add_subcommand("distance", "Calderon gap/distance between two norms");
    cmd_dist->add_option("--space-m", space_m, "first space")->required();
    cmd_dist->add_option("--space-n", space_n, "second space")->required();
    cmd_dist->add_option("-n,--support", n_single, "support [1, n]");
    cmd_dist->add_option("--out", out_path, "output file");

    auto* cmd_derive = app.add_subcommand("derive", "apply a catalog derivation map");
    cmd_derive->add_option("--map", map_str, "kind: zero|kalton_peck|lions_peetre|rank_J|"
                                             "critical_real|critical_complex|weighted_demo");
    cmd_derive->add_option("--input", input_path, "vector JSON file")->required();
    cmd_derive->add_option("--p0", p0, "lions_peetre/rank_J parameter");
    cmd_derive->add_option("--p1", p1, "lions_peetre/rank_J parameter");
    cmd_derive->add_option("--theta", theta, "interpolation parameter");
    cmd_derive->add_option("--couple", couple_str, "B0,B1 for critical maps");
    cmd_derive->add_option("--delta", delta_spec, "weights for weighted_demo");
    cmd_derive->add_option("--out", out_path, "output file");

    auto* cmd_sel = app.add_subcommand("selector", "build a bounded selector, report J-norm bound");
    cmd_sel->add_option("--kind", selector_kind, "single_slot | lions_peetre");
    cmd_sel->add_option("--input", input_path, "target vector JSON file")->required();
    cmd_sel->add_option("--couple", couple_str, "B0,B1 (single_slot)");
    cmd_sel->add_option("--floor", floor_log, "floor(log kappa) (single_slot)");
    cmd_sel->add_option("--sign", sign, "+1 or -1 (single_slot)");
    cmd_sel->add_option("--q", q_str, "q0,q1 (single_slot)");
    cmd_sel->add_option("--p0", p0, "lions_peetre parameter");
    cmd_sel->add_option("--p1", p1, "lions_peetre parameter");
    cmd_sel->add_option("--theta", theta, "interpolation parameter");
    cmd_sel->add_option("--out", out_path, "output file");

    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    cmd_verify->add_option("--suite", suite,
                           "norms|duality|selectors|closed-forms|centralizer|twisted|randsums|all");

    auto* cmd_growth = app.add_subcommand("growth", "growth diagnostic table for a couple");
    cmd_growth->add_option("--couple", couple_str, "B0,B1")->required();
    cmd_growth->add_option("--n-max", n_max, "table height");
    cmd_growth->add_option("--out", out_path, "output file");

    auto* cmd_demo = app.add_subcommand("demo-slow-growth", "weighted-couple slow growth demo");
    cmd_demo->add_option("--delta", delta_spec, "loglog | one | file:<path>");
    cmd_demo->add_option("--n-max", n_max, "table height");
    cmd_demo->add_option("--out", out_path, "output file");

    try {
        // config file first, then flags override whatever they name
        for (int i = 1; i + 1 < argc + 1; ++i) {
            if (i < argc && std::string(argv[i]) == "--config" && i + 1 < argc) {
                cli.cfg = load_config(argv[i + 1]);
                break;
            }
        }
        app.parse(argc, argv);
        cli.cfg.validate();
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        const int bound = cli.cfg.support_cap;
        if (*cmd_norm) {
            const auto space = parse_space(space_str, bound);
            const SeqVector v = read_vector_file(input_path);
            std::cout << csv_double(space_norm(space, v, std::min(cli.cfg.dual_tolerance, 1e-8)))
                      << "\n";
        } else if (*cmd_dual) {
            const auto space = parse_space(space_str, bound);
            const SeqVector v = read_vector_file(input_path);
            const auto est = dual_norm(space, v, cli.cfg.dual_tolerance);
            nlohmann::json j{{"lower", est.lower},
                             {"upper", est.upper},
                             {"certified", est.certified},
                             {"iterations", est.iterations}};
            std::cout << j.dump() << "\n";
        } else if (*cmd_kappa) {
            const auto space = parse_space(space_str, bound);
            const auto [lo, hi] = parse_range(range_str);
            const auto rows = kappa_table(space, lo, hi, cli.extremal());
            write_output(to_csv(rows), out_path);
        } else if (*cmd_dist) {
            const auto M = parse_space(space_m, bound);
            const auto N = parse_space(space_n, bound);
            std::vector<int> F;
            for (int j = 1; j <= n_single; ++j) F.push_back(j);
            const auto d = calderon_distance(M, N, F, cli.extremal());
            if (cli.cfg.output_format == "json") {
                nlohmann::json j{{"gap_mn", d.gap_mn}, {"gap_nm", d.gap_nm}, {"distance", d.distance}};
                write_output(j.dump() + "\n", out_path);
            } else {
                write_output("gap_mn,gap_nm,distance\n" + csv_double(d.gap_mn) + ',' +
                                 csv_double(d.gap_nm) + ',' + csv_double(d.distance) + '\n',
                             out_path);
            }
        } else if (*cmd_derive) {
            const SeqVector v = read_vector_file(input_path);
            DerivationMap map;
            if (map_str == "zero") map = DerivationMap::zero_map();
            else if (map_str == "kalton_peck") map = DerivationMap::kalton_peck();
            else if (map_str == "lions_peetre") map = DerivationMap::lions_peetre(p0, p1, theta);
            else if (map_str == "rank_J") map = DerivationMap::rank_j(p0, p1, theta);
            else if (map_str == "critical_real")
                map = DerivationMap::critical_real(parse_couple(couple_str, bound));
            else if (map_str == "critical_complex")
                map = DerivationMap::critical_complex(parse_couple(couple_str, bound));
            else if (map_str == "weighted_demo")
                map = DerivationMap::weighted_demo(parse_delta_spec(delta_spec, bound));
            else throw std::invalid_argument("unknown map '" + map_str + "'");
            const SeqVector w = apply(map, v, cli.extremal());
            write_output(to_json(w).dump() + "\n", out_path);
        } else if (*cmd_sel) {
            const SeqVector a = read_vector_file(input_path);
            SelectorReport rep;
            if (selector_kind == "single_slot") {
                const auto comma = q_str.find(',');
                if (comma == std::string::npos)
                    throw std::invalid_argument("bad --q '" + q_str + "', expected q0,q1");
                const double q0 = std::stod(q_str.substr(0, comma));
                const double q1 = std::stod(q_str.substr(comma + 1));
                rep = single_slot_selector(a, parse_couple(couple_str, bound), floor_log, sign,
                                           theta, q0, q1);
            } else if (selector_kind == "lions_peetre") {
                rep = lions_peetre_selector(a, p0, p1, theta);
            } else {
                throw std::invalid_argument("unknown selector kind '" + selector_kind + "'");
            }
            write_output(to_json(rep).dump() + "\n", out_path);
        } else if (*cmd_verify) {
            const auto results = run_suite(suite, cli.cfg);
            bool all_pass = true;
            for (const auto& r : results) {
                all_pass &= r.pass;
                std::cout << (r.pass ? "ok   " : "FAIL ") << r.name;
                if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
                std::cout << "\n";
            }
            std::cout << (all_pass ? "all checks passed" : "CHECKS FAILED") << " ["
                      << results.size() << " checks, suite " << suite << ", seed " << cli.cfg.seed
                      << "]\n";
            return all_pass ? 0 : 1;
        } else if (*cmd_growth) {
            const auto couple = parse_couple(couple_str, std::max(bound, n_max));
            const auto table = growth_diagnostic(couple, n_max, cli.extremal());
            write_output(to_csv(table), out_path);
            std::cerr << "omega scale nonconstant on range: "
                      << (table.omega_scale_nonconstant ? "yes" : "no") << "\n";
        } else if (*cmd_demo) {
            const auto delta = parse_delta_spec(delta_spec, n_max);
            const auto table = slow_growth_demo(delta, n_max, cli.extremal());
            write_output(to_csv(table), out_path);
            std::cerr << "omega scale nonconstant on range: "
                      << (table.omega_scale_nonconstant ? "yes" : "no") << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
