#include "doctest.h"

#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "radialwave/io.hpp"

using namespace radialwave;

TEST_CASE("initial data CSV round-trips bit-exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    SimConfig cfg;
    cfg.params = ModelParams(3, 2.5, -1);
    cfg.N = 33;
    cfg.r_max = 5.0;
    InitialData data;
    data.t0 = 1.25;
    for (int i = 0; i <= 33; ++i) {
        data.u.push_back(dist(rng));
        data.ut.push_back(dist(rng) * 1e-7);
    }
    std::stringstream ss;
    write_initial_data_csv(ss, cfg, data);
    InitialDataFile f = read_initial_data_csv(ss);
    CHECK(f.params.n == 3);
    CHECK(f.params.q == 2.5);
    CHECK(f.params.k == -1);
    CHECK(f.data.t0 == 1.25);
    REQUIRE(f.data.u.size() == data.u.size());
    for (size_t i = 0; i < data.u.size(); ++i) {
        CHECK(f.data.u[i] == data.u[i]); // %.17g round-trips doubles exactly
        CHECK(f.data.ut[i] == data.ut[i]);
    }
}

TEST_CASE("initial data CSV rejects malformed input") {
    std::stringstream bad1("r,u,ut\n0,1,2\n");
    CHECK_THROWS_AS(read_initial_data_csv(bad1), ConfigError);
    std::stringstream bad2("t0,n,q,k\n0,3,3,1\nr,u\n");
    CHECK_THROWS_AS(read_initial_data_csv(bad2), ConfigError);
}

TEST_CASE("energy and convergence CSV formats") {
    SimState st;
    st.energy_history = {{1.0, 0.5}, {1.5, 0.5000001}};
    std::stringstream ss;
    write_energy_csv(ss, st);
    CHECK(ss.str().substr(0, 4) == "t,E\n");

    ConvergenceReport rep;
    rep.resolutions = {100, 200};
    rep.l2 = {1e-3, 2.5e-4};
    rep.linf = {2e-3, 5e-4};
    std::stringstream cs;
    write_convergence_csv(cs, rep);
    CHECK(cs.str().find("N,L2,Linf") == 0);
    CHECK(cs.str().find("200,") != std::string::npos);
}

TEST_CASE("run config JSON: schema versioning and unknown keys") {
    nlohmann::json good = {{"schema", 1}, {"n", 5},       {"q", 2.0},  {"k", 1},
                           {"family", "U6"}, {"c", -1.0}, {"N", 800}};
    RunFileConfig c = parse_run_config(good);
    CHECK(c.n == 5);
    CHECK(c.family == "U6");
    CHECK(c.N == 800);
    CHECK(c.cfl == 0.5); // default preserved

    nlohmann::json no_schema = {{"n", 3}};
    CHECK_THROWS_AS(parse_run_config(no_schema), ConfigError);
    nlohmann::json wrong_schema = {{"schema", 2}};
    CHECK_THROWS_AS(parse_run_config(wrong_schema), ConfigError);
    nlohmann::json unknown = {{"schema", 1}, {"frobnicate", true}};
    CHECK_THROWS_AS(parse_run_config(unknown), ConfigError);
}
