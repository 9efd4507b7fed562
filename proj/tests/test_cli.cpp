#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "derivlab/json_io.hpp"

using namespace derivlab;

namespace {

struct RunOutput {
    int exit_code = -1;
    std::string out;
};

RunOutput run_cli(const std::string& args) {
    const std::string cmd = std::string(DERIVLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunOutput r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("cli: norm and dual") {
    write_file("cli_vec.json", to_json(SeqVector({{3, 1.0}, {4, 1.0}})).dump());
    auto r = run_cli("norm --space T --input cli_vec.json");
    REQUIRE(r.exit_code == 0);
    REQUIRE(std::stod(r.out) == 1.0);

    r = run_cli("dual --space T --input cli_vec.json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("certified").get<bool>());
    REQUIRE(j.at("lower").get<double>() == Catch::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("cli: kappa table for c0 is the sqrt column") {
    auto r = run_cli("kappa --space c0 --range 1..16");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "n,kappa,kappa_star,log_kappa,floor_log_kappa,certified_gap");
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        REQUIRE(std::stoi(cell) == n);
        std::getline(row, cell, ',');
        REQUIRE(std::stod(cell) == Catch::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-9));
    }
    REQUIRE(n == 16);

    // determinism of emitted bytes
    const auto again = run_cli("kappa --space c0 --range 1..16");
    REQUIRE(again.out == r.out);
}

TEST_CASE("cli: derive kalton_peck on the normalized ones") {
    write_file("cli_ones16.json", to_json(SeqVector::ones(16).scaled(0.25)).dump());
    const auto r = run_cli("derive --map kalton_peck --input cli_ones16.json");
    REQUIRE(r.exit_code == 0);
    const SeqVector got = seqvector_from_json(json::parse(r.out));
    const SeqVector want = SeqVector::ones(16).scaled(0.25).scaled(-2.0 * std::log(4.0));
    REQUIRE(rel_l2_error(got, want) <= 1e-12);
}

TEST_CASE("cli: growth and demo tables") {
    auto r = run_cli("growth --couple c0,l1 --n-max 6");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("n,kappa,kappa_star,", 0) == 0);

    r = run_cli("demo-slow-growth --delta loglog --n-max 6");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        std::getline(row, cell, ',');
        const double expect = 1.0 + std::log(1.0 + std::log(1.0 + static_cast<double>(n)));
        REQUIRE(std::stod(cell) == Catch::Approx(expect).epsilon(1e-12));
    }
    REQUIRE(n == 6);
}

TEST_CASE("cli: selector report") {
    write_file("cli_vec2.json", to_json(SeqVector({{1, 0.8}, {2, 0.6}})).dump());
    const auto r = run_cli(
        "selector --kind lions_peetre --input cli_vec2.json --p0 1 --p1 2 --theta 0.5");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("bound_ratio").get<double>() <= std::exp(0.5) * (1.0 + 1e-9));
}

TEST_CASE("cli: distance") {
    const auto r = run_cli("distance --space-m l1 --space-n l2 -n 4");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    const auto last = row.rfind(',');
    REQUIRE(std::stod(row.substr(last + 1)) == Catch::Approx(0.5 * std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("cli: usage errors exit with 2") {
    REQUIRE(run_cli("norm --space nope --input cli_vec.json").exit_code == 2);
    REQUIRE(run_cli("norm --space c0 --input missing_file.json").exit_code == 2);
    write_file("cli_bad.json", R"({"indices":[2,1],"values":[1.0,1.0]})");
    REQUIRE(run_cli("norm --space c0 --input cli_bad.json").exit_code == 2);
    REQUIRE(run_cli("verify --suite bogus").exit_code == 2);
}

TEST_CASE("cli: config file with flag override") {
    write_file("cli_cfg.json", R"({"seed": 7, "support_cap": 12})");
    write_file("cli_vec3.json", to_json(SeqVector::unit(1)).dump());
    const auto r = run_cli("--config cli_cfg.json --support-cap 4 norm --space c0 --input cli_vec3.json");
    REQUIRE(r.exit_code == 0);
    REQUIRE(std::stod(r.out) == 1.0);
}

TEST_CASE("cli: verify selectors suite passes") {
    const auto r = run_cli("verify --suite selectors --seed 7");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("all checks passed") != std::string::npos);
}
