#include "lookstop/summary.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace lookstop {

using nlohmann::json;

namespace {

json estimate_json(const ValueEstimate& est) {
    return json{
        {"mean", est.mean},
        {"stderr", est.stderr_},
        {"n_samples", est.n_samples},
        {"bias_note", est.bias_note == ValueEstimate::Bias::insample_high ? "in-sample-high" : "policy-low"},
    };
}

json basis_json(const BasisSpec& basis) {
    return json{
        {"use_current", basis.use_current},
        {"use_lagged", basis.use_lagged},
        {"use_window_max", basis.use_window_max},
        {"use_time_to_go", basis.use_time_to_go},
        {"degree", basis.degree},
        {"cross_terms", basis.cross_terms},
    };
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string summary_json(const RbsdeSolution& sol, const PolicyEvalResult& policy, double eps) {
    json j{
        {"schema_version", 1},
        {"epsilon", eps},
        {"horizon_T", sol.grid.horizon_T},
        {"n_steps", sol.grid.n_steps},
        {"n_paths", sol.n_paths},
        {"eval_paths", policy.estimate.n_samples},
        {"seed", sol.seed},
        {"floor_index", sol.floor_index},
        {"floor_time", sol.grid.times[sol.floor_index]},
        {"problem_floor_index", sol.problem_floor},
        {"basis", basis_json(sol.basis)},
        {"n_features", sol.n_features},
        {"value_insample", estimate_json(sol.value_insample)},
        {"value_policy", estimate_json(policy.estimate)},
        {"K_mass_profile", sol.k_mass_profile},
        {"stop_histogram", stopping_histogram(sol)},
        {"stop_histogram_policy", policy.stop_histogram},
    };
    return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = "epsilon,value_policy,stderr,value_insample,lower,upper,closed_form\n";
    for (const auto& r : result.rows) {
        out += format_double(r.eps) + ',' + format_double(r.value_policy) + ',' +
               format_double(r.stderr_) + ',' + format_double(r.value_insample) + ',' +
               format_double(r.lower) + ',' + format_double(r.upper) + ',';
        if (r.closed_form) out += format_double(*r.closed_form);
        out += '\n';
    }
    return out;
}

std::string sweep_json(const SweepResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) {
        json row{
            {"epsilon", r.eps},
            {"value_policy", r.value_policy},
            {"stderr", r.stderr_},
            {"value_insample", r.value_insample},
            {"lower", r.lower},
            {"upper", r.upper},
        };
        row["closed_form"] = r.closed_form ? json(*r.closed_form) : json(nullptr);
        rows.push_back(row);
    }
    json j{
        {"schema_version", 1},
        {"rows", rows},
        {"max_adjacent_jump", result.max_adjacent_jump},
    };
    return j.dump(2) + "\n";
}

std::string oracle_curve_csv(const std::vector<std::pair<double, double>>& rows, std::size_t n_steps) {
    std::string out = "epsilon,n_steps,value\n";
    for (const auto& [eps, value] : rows)
        out += format_double(eps) + ',' + std::to_string(n_steps) + ',' + format_double(value) + '\n';
    return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "n_steps,n_paths,value_policy,stderr,closed_form,abs_error\n";
    for (const auto& r : rows)
        out += std::to_string(r.n_steps) + ',' + std::to_string(r.n_paths) + ',' +
               format_double(r.value_policy) + ',' + format_double(r.stderr_) + ',' +
               format_double(r.closed_form) + ',' + format_double(r.abs_error) + '\n';
    return out;
}

}  // namespace lookstop
