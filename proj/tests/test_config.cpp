#include <doctest.h>

#include <nlohmann/json.hpp>

#include "lookstop/errors.hpp"
#include "lookstop/run_config.hpp"
#include "lookstop/summary.hpp"
#include "lookstop/solver.hpp"

using namespace lookstop;

TEST_CASE("config round-trips through json") {
    RunConfig c;
    c.command = "sweep";
    c.horizon_T = 2.0;
    c.eps = 0.75;
    c.eps_grid = {0.0, 0.5, 1.0};
    c.n_steps = 123;
    c.n_paths = 4567;
    c.eval_paths = 890;
    c.seed = 0xDEADBEEFull;
    c.payoffs = {{"brownian_identity", 0.5}};
    c.floor_eps = 0.25;
    c.basis_degree = 3;
    c.basis_cross_terms = false;
    c.basis_time_to_go = true;
    c.floor_policy = "literal";
    c.lag_steps = 7;
    c.floor_steps = 2;
    c.delta = 0.5;
    c.oracle_cap = 20;
    c.curve_lags = {1, 2, 3};
    c.threads = 4;
    c.out_dir = "/tmp/somewhere";
    c.validate_steps = 64;
    c.validate_paths = 2048;
    c.inject_nan = true;

    const RunConfig parsed = config_from_json(config_to_json(c));
    CHECK(parsed == c);

    // defaults survive a minimal document
    const RunConfig d = config_from_json("{}");
    CHECK(d.command == "solve");
    CHECK(d.n_steps == 500);
    CHECK(config_from_json(config_to_json(d)) == d);
}

TEST_CASE("config validation rejects out-of-domain fields") {
    RunConfig c;
    CHECK_NOTHROW(validate_config(c));

    RunConfig bad = c;
    bad.command = "frobnicate";
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.horizon_T = -1.0;
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.eps = 2.0;
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.n_steps = 0;
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.basis_degree = 0;
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.floor_policy = "sometimes";
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.payoffs = {{"unknown_payoff", 0.1}};
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    bad = c;
    bad.command = "oracle";
    bad.lag_steps = 600;
    CHECK_THROWS_AS(validate_config(bad), InvalidArgumentError);

    CHECK_THROWS_AS(config_from_json("{nope"), InvalidArgumentError);
}

TEST_CASE("solve summary json carries the documented fields") {
    const TimeGrid grid = make_grid(1.0, 10);
    const BoundProblem bound = bind(shiryaev_spec(0.5, 1.0), grid);
    const RunOutput run = run_problem(bound, 500, 500, 3);
    const std::string text = summary_json(run.solution, run.policy, 0.5);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["epsilon"] == 0.5);
    CHECK(j["n_steps"] == 10);
    CHECK(j["n_paths"] == 500);
    CHECK(j["seed"] == 3);
    CHECK(j["value_insample"].contains("mean"));
    CHECK(j["value_policy"].contains("stderr"));
    CHECK(j["K_mass_profile"].size() == 11);
    CHECK(j["stop_histogram"].size() == 11);
    CHECK(j["stop_histogram_policy"].size() == 11);
    CHECK(j["basis"]["degree"] == 2);

    // byte-identical for identical inputs
    const std::string again = summary_json(run.solution, run.policy, 0.5);
    CHECK(text == again);
}
