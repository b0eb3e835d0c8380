#include <doctest.h>

#include <cmath>

#include "lookstop/analysis.hpp"
#include "lookstop/errors.hpp"
#include "lookstop/summary.hpp"

using namespace lookstop;

TEST_CASE("expected_max closed form") {
    CHECK(expected_max(0.0) == 0.0);
    CHECK(expected_max(1.0) == doctest::Approx(0.7978845608028654).epsilon(1e-15));
    CHECK(expected_max(0.25) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK_THROWS_AS(expected_max(-0.1), InvalidArgumentError);
}

TEST_CASE("expected_max is increasing and concave") {
    double prev = 0.0, prev_diff = 1e18;
    for (int i = 1; i <= 40; ++i) {
        const double s = 0.05 * i;
        const double v = expected_max(s);
        CHECK(v > prev);
        const double diff = v - prev;
        CHECK(diff < prev_diff);
        prev = v;
        prev_diff = diff;
    }
}

TEST_CASE("closed form exists exactly on the upper half of the lag range") {
    CHECK(*closed_form_value(0.5, 1.0) == doctest::Approx(0.5641895835477563).epsilon(1e-15));
    CHECK(*closed_form_value(1.0, 1.0) == 0.0);
    CHECK(!closed_form_value(0.25, 1.0));
    CHECK(!closed_form_value(0.49999, 1.0));
    CHECK(closed_form_value(0.5, 1.0).has_value());
    CHECK_THROWS_AS(closed_form_value(-0.1, 1.0), InvalidArgumentError);
    CHECK_THROWS_AS(closed_form_value(1.1, 1.0), InvalidArgumentError);
}

TEST_CASE("waiting and global bounds") {
    const Bounds b = bounds(0.25, 1.0);
    CHECK(b.lower == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(b.upper == doctest::Approx(0.7978845608028654).epsilon(1e-15));
    CHECK(b.lower_is_strict);

    const Bounds z = bounds(0.0, 1.0);
    CHECK(z.lower == 0.0);
    CHECK_FALSE(z.lower_is_strict);

    // at the half-horizon lag the waiting bound and the closed form coincide
    const Bounds h = bounds(0.5, 1.0);
    CHECK(h.lower == *closed_form_value(0.5, 1.0));
    CHECK_FALSE(h.lower_is_strict);

    const Bounds e = bounds(1.0, 1.0);
    CHECK(e.lower == 0.0);
    CHECK_FALSE(e.lower_is_strict);

    for (double eps : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const Bounds bb = bounds(eps, 1.0);
        CHECK(bb.lower <= bb.upper);
        if (auto cf = closed_form_value(eps, 1.0)) {
            CHECK(*cf >= bb.lower - 1e-15);
            CHECK(*cf <= bb.upper + 1e-15);
        }
    }
    CHECK_THROWS_AS(bounds(2.0, 1.0), InvalidArgumentError);
}

TEST_CASE("sweep structure at a small scale") {
    SweepConfig cfg;
    cfg.n_steps = 40;
    cfg.n_paths = 4000;
    cfg.eval_paths = 4000;
    cfg.seed = 5;
    const std::vector<double> eps{0.0, 0.25, 0.5, 0.75, 1.0};
    const SweepResult res = sweep(1.0, eps, cfg);

    REQUIRE(res.rows.size() == 5);
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow& r = res.rows[i];
        if (i > 0) CHECK(r.eps > res.rows[i - 1].eps);
        CHECK(r.lower <= r.upper);
        CHECK(r.closed_form.has_value() == (r.eps >= 0.5));
        CHECK(std::isfinite(r.value_policy));
        CHECK(r.stderr_ >= 0.0);
    }
    CHECK(res.rows.front().value_policy == doctest::Approx(0.0).epsilon(0.05));
    CHECK(res.rows.back().value_policy == 0.0);  // constant obstacle
    CHECK(res.max_adjacent_jump > 0.0);

    // identical config, identical rows
    const SweepResult res2 = sweep(1.0, eps, cfg);
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        CHECK(res.rows[i].value_policy == res2.rows[i].value_policy);
        CHECK(res.rows[i].value_insample == res2.rows[i].value_insample);
    }
}

TEST_CASE("convergence study toward the closed form") {
    const auto rows = convergence_study(0.75, 1.0, {{48, 10000}, {200, 10000}, {800, 10000}}, 9);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows)
        CHECK(r.closed_form == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(rows[0].abs_error > rows[1].abs_error);
    CHECK(rows[1].abs_error > rows[2].abs_error);

    CHECK_THROWS_AS(convergence_study(0.25, 1.0, {{50, 1000}}, 1), InvalidArgumentError);
}

TEST_CASE("quadrupling the paths roughly halves the stderr") {
    const TimeGrid grid = make_grid(1.0, 48);
    const BoundProblem bound = bind(shiryaev_spec(0.75, 1.0), grid);
    const RunOutput small = run_problem(bound, 4000, 4000, 31);
    const RunOutput big = run_problem(bound, 16000, 16000, 31);
    const double ratio = small.policy.estimate.stderr_ / big.policy.estimate.stderr_;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("csv emitters") {
    SweepResult res;
    res.rows.push_back({0.25, 0.41, 0.002, 0.42, 0.3989, 0.7979, std::nullopt});
    res.rows.push_back({0.75, 0.39, 0.002, 0.40, 0.3989, 0.7979, 0.39894228});
    res.max_adjacent_jump = 0.02;
    const std::string csv = sweep_csv(res);
    CHECK(csv.rfind("epsilon,value_policy,stderr,value_insample,lower,upper,closed_form\n", 0) == 0);
    CHECK(csv.find(",\n") != std::string::npos);       // empty closed-form field
    CHECK(csv.find("0.39894228") != std::string::npos);

    const std::string js = sweep_json(res);
    CHECK(js.find("\"closed_form\": null") != std::string::npos);

    const std::string curve = oracle_curve_csv({{0.5, 0.466}, {1.0, 0.0}}, 20);
    CHECK(curve.rfind("epsilon,n_steps,value\n", 0) == 0);
    CHECK(curve.find("0.5,20,0.466") != std::string::npos);
}
