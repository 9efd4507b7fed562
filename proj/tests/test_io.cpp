#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "derivlab/config.hpp"
#include "derivlab/csv.hpp"
#include "derivlab/json_io.hpp"

#include "oracles.hpp"

using namespace derivlab;

TEST_CASE("SeqVector JSON round trip") {
    SplitMix64 rng(71);
    for (int t = 0; t < 100; ++t) {
        const SeqVector v = oracle::random_vector(rng, 12);
        const SeqVector back = seqvector_from_json(to_json(v));
        REQUIRE(back == v);
    }
}

TEST_CASE("SeqVector JSON errors name the offending field") {
    auto expect_error = [](const char* text, const char* needle) {
        try {
            seqvector_from_json(json::parse(text));
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            REQUIRE(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error(R"({"values":[1.0]})", "indices");
    expect_error(R"({"indices":[1,2],"values":[1.0]})", "lengths differ");
    expect_error(R"({"indices":[2,1],"values":[1.0,2.0]})", "strictly increasing");
    expect_error(R"({"indices":[1,2],"values":[1.0,0.0]})", "zeros");
    expect_error(R"({"indices":[0],"values":[1.0]})", ">= 1");
    expect_error(R"({"indices":[1.5],"values":[1.0]})", "integers");
}

TEST_CASE("JSequence JSON round trip") {
    JSequence s;
    s.couple = {parse_space("T2", 16), parse_space("dual:T2", 16)};
    s.q0 = s.q1 = 2.0;
    s.set_slot(-4, SeqVector({{1, 0.5}, {3, -1.25}}));
    s.set_slot(2, SeqVector::unit(2));
    const json j = to_json(s, 0.5);
    const auto [back, theta] = jsequence_from_json(j, 16);
    REQUIRE(theta == 0.5);
    REQUIRE(back.slots.size() == 2);
    REQUIRE(back.slots.at(-4) == s.slots.at(-4));
    REQUIRE(back.slots.at(2) == s.slots.at(2));
    REQUIRE(back.couple.b0.to_string() == "T2");
    REQUIRE(back.couple.b1.to_string() == "dual:T2");

    REQUIRE_THROWS_AS(jsequence_from_json(json::parse(R"({"theta":0.5})"), 16),
                      std::invalid_argument);
}

TEST_CASE("DerivationMap and DerivedVector JSON") {
    for (const auto& m :
         {DerivationMap::kalton_peck(), DerivationMap::lions_peetre(1.0, 4.0, 0.25),
          DerivationMap::rank_j(2.0, 3.0, 0.5),
          DerivationMap::critical_real(dual_couple(SpaceDescriptor::tsirelson2_space(8))),
          DerivationMap::weighted_demo({1.0, 1.5, 2.0})}) {
        const auto back = derivation_map_from_json(to_json(m), 8);
        REQUIRE(back.kind_name() == m.kind_name());
    }
    REQUIRE_THROWS_AS(derivation_map_from_json(json::parse(R"({"kind":"nope"})"), 8),
                      std::invalid_argument);

    DerivedVector v{SeqVector({{1, 1.0}}), SeqVector({{2, -2.0}})};
    const json j = to_json(v, DerivationMap::kalton_peck());
    const auto [back, omega] = derived_vector_from_json(j, 8);
    REQUIRE(back.x == v.x);
    REQUIRE(back.y == v.y);
    REQUIRE(omega.kind == DerivationKind::kalton_peck);
}

TEST_CASE("config file loading") {
    const std::string path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << R"({"seed": 7, "support_cap": 12, "dual_tolerance": 1e-7, "trials": 500,
                   "output_format": "json"})";
    }
    const RunConfig cfg = load_config(path);
    REQUIRE(cfg.seed == 7);
    REQUIRE(cfg.support_cap == 12);
    REQUIRE(cfg.dual_tolerance == 1e-7);
    REQUIRE(cfg.trials == 500);
    REQUIRE(cfg.output_format == "json");
    std::remove(path.c_str());

    REQUIRE_THROWS_AS(load_config("does_not_exist.json"), std::invalid_argument);

    RunConfig bad;
    bad.output_format = "xml";
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("csv_double round-trips doubles") {
    SplitMix64 rng(72);
    for (int t = 0; t < 200; ++t) {
        const double v = rng.next_gaussian() * std::exp(rng.next_uniform(-20, 20));
        REQUIRE(std::stod(csv_double(v)) == v);
    }
}

TEST_CASE("table CSV is byte-identical across runs") {
    ExtremalOptions opt;
    const auto rows1 = kappa_table(SpaceDescriptor::c0_space(6), 1, 6, opt);
    const auto rows2 = kappa_table(SpaceDescriptor::c0_space(6), 1, 6, opt);
    REQUIRE(to_csv(rows1) == to_csv(rows2));

    const auto t1 = growth_diagnostic(dual_couple(SpaceDescriptor::c0_space(6)), 6, opt);
    const auto t2 = growth_diagnostic(dual_couple(SpaceDescriptor::c0_space(6)), 6, opt);
    REQUIRE(to_csv(t1) == to_csv(t2));
    REQUIRE(to_csv(t1).rfind("n,kappa,kappa_star,", 0) == 0);
}
