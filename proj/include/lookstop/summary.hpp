#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lookstop/analysis.hpp"
#include "lookstop/solver.hpp"

namespace lookstop {

/// Solve summary as JSON: both value estimates, floor and lag, sizes, basis,
/// seed, per-step K mass, and the stop histograms (in-sample rule and fresh
/// policy paths). Serialization is deterministic: identical inputs give
/// byte-identical text.
std::string summary_json(const RbsdeSolution& sol, const PolicyEvalResult& policy, double eps);

/// CSV with header `epsilon,value_policy,stderr,value_insample,lower,upper,closed_form`;
/// the closed-form field is empty on rows where none exists.
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);

/// CSV with header `epsilon,n_steps,value`.
std::string oracle_curve_csv(const std::vector<std::pair<double, double>>& rows, std::size_t n_steps);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Fixed-precision float formatting shared by the CSV emitters.
std::string format_double(double v);

}  // namespace lookstop
