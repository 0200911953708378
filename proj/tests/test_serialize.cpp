#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "ecdkit/serialize.hpp"
#include "test_util.hpp"

using namespace ecdkit;
using testutil::frob_dist;
using testutil::random_channel;
using testutil::random_cmat;
using testutil::random_cp;
using testutil::random_observable;

TEST_CASE("CMat round trip and the [re, im] convention") {
    Rng rng(91);
    const CMat m = random_cmat(3, 4, rng);
    const json j = to_json(m);
    CHECK(j.at("rows") == 3);
    CHECK(j.at("cols") == 4);
    // Entry (1, 2) sits at flat index 1*4 + 2, encoded as [re, im].
    const json& e = j.at("entries").at(6);
    CHECK(e.is_array());
    CHECK(e.size() == 2);
    CHECK(e.at(0).get<double>() == m(1, 2).real());
    CHECK(e.at(1).get<double>() == m(1, 2).imag());

    const CMat back = cmat_from_json(j);
    CHECK(frob_dist(back, m) == 0.0);
}

TEST_CASE("CMat error paths: bad dims, wrong counts, malformed entries") {
    CHECK_THROWS_AS((void)cmat_from_json(json{{"rows", 0}, {"cols", 2}, {"entries", json::array()}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)cmat_from_json(json{{"rows", 1}, {"cols", 2}, {"entries", {{1.0, 0.0}}}}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)cmat_from_json(json{{"rows", 1}, {"cols", 1}, {"entries", {{1.0, 0.0, 2.0}}}}),
        std::invalid_argument);
    CHECK_THROWS((void)cmat_from_json(json{{"cols", 1}, {"entries", {{1.0, 0.0}}}}));
}

TEST_CASE("EnergyObservable round trip and validation") {
    const EnergyObservable g({0.0, 0.5, 2.0}, true);
    const EnergyObservable back = observable_from_json(to_json(g));
    CHECK(back.levels == g.levels);
    CHECK(back.grounded == g.grounded);

    // Decreasing levels are rejected on reconstruction.
    CHECK_THROWS_AS(
        (void)observable_from_json(json{{"levels", {1.0, 0.5}}, {"grounded", false}}),
        std::invalid_argument);
    // Grounded flag requires a zero ground level.
    CHECK_THROWS_AS(
        (void)observable_from_json(json{{"levels", {0.5, 1.0}}, {"grounded", true}}),
        std::invalid_argument);
}

TEST_CASE("KrausMap round trip, kind names, dimension cross-checks") {
    Rng rng(92);
    const KrausMap ch = random_channel(3, 2, 2, rng);
    const json j = to_json(ch);
    CHECK(j.at("kind") == "channel");
    CHECK(j.at("dim_in") == 3);
    CHECK(j.at("dim_out") == 2);
    const KrausMap back = kraus_from_json(j);
    CHECK(back.kind == MapKind::Channel);
    REQUIRE(back.ops.size() == ch.ops.size());
    for (size_t k = 0; k < ch.ops.size(); ++k) CHECK(frob_dist(back.ops[k], ch.ops[k]) == 0.0);

    json bad = j;
    bad["kind"] = "unitary";
    CHECK_THROWS_AS((void)kraus_from_json(bad), std::invalid_argument);
    json mismatched = j;
    mismatched["dim_in"] = 7;
    CHECK_THROWS_AS((void)kraus_from_json(mismatched), std::invalid_argument);
    // Declaring a non-channel a channel fails the flag validation.
    json wrong_kind = to_json(random_cp(3, 3, 2, rng));
    wrong_kind["kind"] = "channel";
    CHECK_THROWS_AS((void)kraus_from_json(wrong_kind), std::invalid_argument);
}

TEST_CASE("Dilation round trip and isometry flag validation") {
    Rng rng(93);
    const Dilation iso = stinespring_from_kraus(random_channel(3, 3, 2, rng));
    const json j = to_json(iso);
    CHECK(j.at("env_dim") == 2);
    CHECK(j.at("isometry") == true);
    const Dilation back = dilation_from_json(j);
    CHECK(back.env_dim == iso.env_dim);
    CHECK(frob_dist(back.v, iso.v) == 0.0);

    json forged = to_json(stinespring_from_kraus(random_cp(3, 3, 2, rng)));
    CHECK(forged.at("isometry") == false);
    forged["isometry"] = true;
    CHECK_THROWS_AS((void)dilation_from_json(forged), std::invalid_argument);
}

TEST_CASE("DistanceReport serialization carries the full sandwich") {
    DistanceReport r;
    r.estimate = 0.5;
    r.lower = 0.5;
    r.upper = 0.75;
    r.upper_provenance = "test-chain";
    r.witness = {cplx(1.0, 0.0), cplx(0.0, -1.0)};
    r.restarts = 4;
    r.iterations = 17;
    const json j = to_json(r);
    CHECK(j.at("estimate") == 0.5);
    CHECK(j.at("upper") == 0.75);
    CHECK(j.at("upper_provenance") == "test-chain");
    CHECK(j.at("witness").at(1) == json({0.0, -1.0}));
    CHECK(j.at("converged") == true);
}

TEST_CASE("load_json_file and file_digest") {
    const std::string path = "test_serialize_tmp.json";
    {
        std::ofstream f(path, std::ios::binary);
        f << "{\"levels\": [0.0, 1.0], \"grounded\": true}";
    }
    const EnergyObservable g = observable_from_json(load_json_file(path));
    CHECK(g.levels == std::vector<double>{0.0, 1.0});

    const std::string d1 = file_digest(path);
    CHECK(d1.size() == 16);
    CHECK(file_digest(path) == d1);  // stable across reads

    {
        std::ofstream f(path, std::ios::binary);
        f << "{\"levels\": [0.0, 2.0], \"grounded\": true}";
    }
    CHECK(file_digest(path) != d1);  // content change shows up

    {
        std::ofstream f(path, std::ios::binary);
        f << "{not json";
    }
    CHECK_THROWS_AS((void)load_json_file(path), std::invalid_argument);
    CHECK_THROWS_AS((void)load_json_file("does_not_exist.json"), std::invalid_argument);
    std::remove(path.c_str());
}
