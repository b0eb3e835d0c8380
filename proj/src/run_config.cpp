#include "lookstop/run_config.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "lookstop/errors.hpp"
#include "lookstop/obstacle.hpp"

namespace lookstop {

using nlohmann::json;

std::string config_to_json(const RunConfig& c) {
    json payoffs = json::array();
    for (const auto& [name, lag] : c.payoffs)
        payoffs.push_back(json{{"name", name}, {"lag", lag}});
    json j{
        {"schema_version", c.schema_version},
        {"command", c.command},
        {"horizon_T", c.horizon_T},
        {"eps", c.eps},
        {"eps_grid", c.eps_grid},
        {"eps_count", c.eps_count},
        {"n_steps", c.n_steps},
        {"n_paths", c.n_paths},
        {"eval_paths", c.eval_paths},
        {"seed", c.seed},
        {"payoffs", payoffs},
        {"floor_eps", c.floor_eps},
        {"basis_degree", c.basis_degree},
        {"basis_cross_terms", c.basis_cross_terms},
        {"basis_time_to_go", c.basis_time_to_go},
        {"floor_policy", c.floor_policy},
        {"lag_steps", c.lag_steps},
        {"floor_steps", c.floor_steps},
        {"delta", c.delta},
        {"oracle_cap", c.oracle_cap},
        {"curve_lags", c.curve_lags},
        {"threads", c.threads},
        {"out_dir", c.out_dir},
        {"validate_steps", c.validate_steps},
        {"validate_paths", c.validate_paths},
        {"inject_nan", c.inject_nan},
    };
    return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgumentError(std::string("config parse error: ") + e.what());
    }
    static const char* known[] = {
        "schema_version", "command", "horizon_T", "eps", "eps_grid", "eps_count",
        "n_steps", "n_paths", "eval_paths", "seed", "payoffs", "floor_eps",
        "basis_degree", "basis_cross_terms", "basis_time_to_go", "floor_policy",
        "lag_steps", "floor_steps", "delta", "oracle_cap", "curve_lags",
        "threads", "out_dir", "validate_steps", "validate_paths", "inject_nan"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok) throw InvalidArgumentError("unknown config field: " + key);
    }
    RunConfig c;
    try {
        c.schema_version = j.value("schema_version", 1);
        if (c.schema_version != 1)
            throw InvalidArgumentError("unsupported config schema version");
        c.command = j.value("command", std::string("solve"));
        c.horizon_T = j.value("horizon_T", 1.0);
        c.eps = j.value("eps", 0.5);
        c.eps_grid = j.value("eps_grid", std::vector<double>{});
        c.eps_count = j.value("eps_count", std::size_t{21});
        c.n_steps = j.value("n_steps", std::size_t{500});
        c.n_paths = j.value("n_paths", std::size_t{100000});
        c.eval_paths = j.value("eval_paths", std::size_t{0});
        c.seed = j.value("seed", std::uint64_t{1});
        c.payoffs.clear();
        if (j.contains("payoffs"))
            for (const auto& p : j["payoffs"])
                c.payoffs.emplace_back(p.at("name").get<std::string>(), p.at("lag").get<double>());
        c.floor_eps = j.value("floor_eps", 0.0);
        c.basis_degree = j.value("basis_degree", 2);
        c.basis_cross_terms = j.value("basis_cross_terms", true);
        c.basis_time_to_go = j.value("basis_time_to_go", false);
        c.floor_policy = j.value("floor_policy", std::string("raised"));
        c.lag_steps = j.value("lag_steps", std::size_t{0});
        c.floor_steps = j.value("floor_steps", std::size_t{0});
        c.delta = j.value("delta", 0.0);
        c.oracle_cap = j.value("oracle_cap", std::size_t{24});
        c.curve_lags = j.value("curve_lags", std::vector<std::size_t>{});
        c.threads = j.value("threads", 0);
        c.out_dir = j.value("out_dir", std::string{});
        c.validate_steps = j.value("validate_steps", std::size_t{100});
        c.validate_paths = j.value("validate_paths", std::size_t{20000});
        c.inject_nan = j.value("inject_nan", false);
    } catch (const json::exception& e) {
        throw InvalidArgumentError(std::string("config field error: ") + e.what());
    }
    return c;
}

void validate_config(const RunConfig& c) {
    if (c.command != "solve" && c.command != "sweep" && c.command != "oracle" && c.command != "validate")
        throw InvalidArgumentError("unknown command: " + c.command);
    if (!(c.horizon_T > 0.0) || !std::isfinite(c.horizon_T))
        throw InvalidArgumentError("horizon_T must be positive and finite");
    if (c.n_steps < 1) throw InvalidArgumentError("n_steps must be at least 1");
    if (c.command == "solve" || c.command == "sweep") {
        if (c.n_paths < 2) throw InvalidArgumentError("n_paths must be at least 2");
        if (c.eps < 0.0 || c.eps > c.horizon_T)
            throw InvalidArgumentError("eps must lie in [0, horizon_T]");
        for (double e : c.eps_grid)
            if (e < 0.0 || e > c.horizon_T)
                throw InvalidArgumentError("eps_grid entry outside [0, horizon_T]");
        if (c.command == "sweep" && c.eps_grid.empty() && c.eps_count < 2)
            throw InvalidArgumentError("sweep needs at least 2 grid points");
        if (c.basis_degree < 1 || c.basis_degree > 6)
            throw InvalidArgumentError("basis_degree must lie in [1, 6]");
        if (c.floor_policy != "raised" && c.floor_policy != "literal")
            throw InvalidArgumentError("floor_policy must be \"raised\" or \"literal\"");
        if (c.floor_eps < 0.0 || c.floor_eps > c.horizon_T)
            throw InvalidArgumentError("floor_eps must lie in [0, horizon_T]");
        for (const auto& [name, lag] : c.payoffs) {
            if (!builtin_payoff(name))
                throw InvalidArgumentError("unknown payoff name: " + name);
            if (lag < 0.0 || lag > c.horizon_T)
                throw InvalidArgumentError("payoff lag outside [0, horizon_T]");
        }
    }
    if (c.command == "oracle") {
        if (c.lag_steps > c.n_steps)
            throw InvalidArgumentError("lag_steps cannot exceed n_steps");
        if (c.floor_steps > c.n_steps)
            throw InvalidArgumentError("floor_steps cannot exceed n_steps");
        if (c.delta < 0.0 || !std::isfinite(c.delta))
            throw InvalidArgumentError("delta must be nonnegative and finite");
        for (std::size_t m : c.curve_lags)
            if (m > c.n_steps)
                throw InvalidArgumentError("curve lag exceeds n_steps");
    }
    if (c.command == "validate") {
        if (c.validate_steps < 4) throw InvalidArgumentError("validate_steps must be at least 4");
        if (c.validate_paths < 1000) throw InvalidArgumentError("validate_paths must be at least 1000");
    }
    if (c.threads < 0) throw InvalidArgumentError("threads must be nonnegative");
}

}  // namespace lookstop
