#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lookstop/analysis.hpp"
#include "lookstop/errors.hpp"
#include "lookstop/oracle.hpp"
#include "lookstop/parallel.hpp"
#include "lookstop/rng.hpp"
#include "lookstop/solver.hpp"

namespace py = pybind11;
using namespace lookstop;

namespace {

// Zero-copy logical [n_paths x (n_steps+1)] view over step-major storage.
py::array_t<double> matrix_view(py::object owner, const std::vector<double>& data,
                                std::size_t n_paths, std::size_t n_cols) {
    return py::array_t<double>(
        {static_cast<py::ssize_t>(n_paths), static_cast<py::ssize_t>(n_cols)},
        {static_cast<py::ssize_t>(sizeof(double)),
         static_cast<py::ssize_t>(n_paths * sizeof(double))},
        data.data(), owner);
}

ProblemSpec make_problem(const std::vector<std::pair<std::string, double>>& payoffs,
                         double floor_eps, double horizon_T) {
    ProblemSpec spec;
    for (const auto& [name, lag] : payoffs) {
        auto payoff = builtin_payoff(name);
        if (!payoff) throw InvalidArgumentError("unknown payoff name: " + name);
        spec.payoffs.emplace_back(std::move(*payoff), lag);
    }
    spec.floor_eps = floor_eps;
    spec.horizon_T = horizon_T;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Look-ahead optimal stopping: regression RBSDE solver and exact walk oracle";

    py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", PyExc_ValueError);
    py::register_exception<GridMismatchError>(m, "GridMismatchError", PyExc_ValueError);
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def_readonly("horizon_T", &TimeGrid::horizon_T)
        .def_readonly("n_steps", &TimeGrid::n_steps)
        .def_readonly("dt", &TimeGrid::dt)
        .def_readonly("times", &TimeGrid::times)
        .def("__repr__", [](const TimeGrid& g) {
            return "TimeGrid(T=" + std::to_string(g.horizon_T) +
                   ", n_steps=" + std::to_string(g.n_steps) + ")";
        });
    m.def("make_grid", &make_grid, py::arg("horizon_T"), py::arg("n_steps"));

    py::enum_<PathKind>(m, "PathKind")
        .value("brownian", PathKind::brownian)
        .value("walk", PathKind::walk);

    py::class_<PathBatch>(m, "PathBatch")
        .def_readonly("grid", &PathBatch::grid)
        .def_readonly("n_paths", &PathBatch::n_paths)
        .def_readonly("seed", &PathBatch::seed)
        .def_property_readonly("values", [](py::object self) {
            const auto& b = self.cast<const PathBatch&>();
            return matrix_view(self, b.values, b.n_paths, b.grid.n_steps + 1);
        });
    m.def("simulate_brownian", &simulate_brownian, py::arg("grid"), py::arg("n_paths"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def("simulate_walk", &simulate_walk, py::arg("grid"), py::arg("n_paths"), py::arg("seed"),
          py::arg("step_size"), py::call_guard<py::gil_scoped_release>());
    m.def("lagged_index", &lagged_index, py::arg("k"), py::arg("lag_steps"));

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def_readonly("floor_eps", &ProblemSpec::floor_eps)
        .def_readonly("horizon_T", &ProblemSpec::horizon_T);
    m.def("shiryaev_spec", &shiryaev_spec, py::arg("eps"), py::arg("T"));
    m.def("problem", &make_problem, py::arg("payoffs"), py::arg("floor_eps") = 0.0,
          py::arg("horizon_T") = 1.0,
          "Problem from built-in payoff names: [(name, lag), ...]");

    py::class_<BoundProblem>(m, "BoundProblem")
        .def_readonly("grid", &BoundProblem::grid)
        .def_readonly("lag_steps", &BoundProblem::lag_steps)
        .def_readonly("floor_index", &BoundProblem::floor_index);
    m.def("bind", &bind, py::arg("spec"), py::arg("grid"));

    py::class_<ObstacleValues>(m, "ObstacleValues")
        .def_readonly("n_paths", &ObstacleValues::n_paths)
        .def_property_readonly("xi", [](py::object self) {
            const auto& o = self.cast<const ObstacleValues&>();
            return matrix_view(self, o.xi, o.n_paths, o.grid.n_steps + 1);
        });
    m.def("build_obstacle", &build_obstacle, py::arg("bound"), py::arg("batch"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<IntegrabilityEstimate>(m, "IntegrabilityEstimate")
        .def_readonly("mean", &IntegrabilityEstimate::mean)
        .def_readonly("stderr", &IntegrabilityEstimate::stderr_)
        .def_readonly("n_paths", &IntegrabilityEstimate::n_paths)
        .def_readonly("growth_warning", &IntegrabilityEstimate::growth_warning);
    m.def("integrability_probe", &integrability_probe, py::arg("obstacle"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<WalkTree>(m, "WalkTree")
        .def_readonly("n_steps", &WalkTree::n_steps)
        .def_readonly("step_size", &WalkTree::step_size);
    m.def("enumerate_walk", &enumerate_walk, py::arg("n_steps"), py::arg("step_size"),
          py::arg("cap") = WalkTree::kDefaultCap);

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("value_at_floor", &OracleResult::value_at_floor)
        .def_readonly("value_profile", &OracleResult::value_profile)
        .def_readonly("node_count", &OracleResult::node_count)
        .def_readonly("floor_index", &OracleResult::floor_index)
        .def("stops", &OracleResult::stops, py::arg("depth"), py::arg("code"));
    m.def("oracle_solve", &oracle_solve, py::arg("tree"), py::arg("bound"),
          py::call_guard<py::gil_scoped_release>());
    m.def("brute_force_rules", &brute_force_rules, py::arg("tree"), py::arg("bound"),
          py::call_guard<py::gil_scoped_release>());
    m.def("window_max_subpolicy_value", &window_max_subpolicy_value, py::arg("tree"),
          py::arg("bound"), py::call_guard<py::gil_scoped_release>());
    m.def("oracle_value_curve", &oracle_value_curve, py::arg("n_steps"), py::arg("T"),
          py::arg("lags"), py::arg("cap") = WalkTree::kDefaultCap,
          py::call_guard<py::gil_scoped_release>());

    py::class_<BasisSpec>(m, "BasisSpec")
        .def(py::init([](bool use_current, bool use_lagged, bool use_window_max,
                         bool use_time_to_go, int degree, bool cross_terms) {
                 BasisSpec b;
                 b.use_current = use_current;
                 b.use_lagged = use_lagged;
                 b.use_window_max = use_window_max;
                 b.use_time_to_go = use_time_to_go;
                 b.degree = degree;
                 b.cross_terms = cross_terms;
                 return b;
             }),
             py::arg("use_current") = true, py::arg("use_lagged") = true,
             py::arg("use_window_max") = true, py::arg("use_time_to_go") = false,
             py::arg("degree") = 2, py::arg("cross_terms") = true)
        .def_readwrite("degree", &BasisSpec::degree)
        .def_readwrite("cross_terms", &BasisSpec::cross_terms);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init([](BasisSpec basis, std::optional<std::size_t> floor_override, bool keep_y,
                         bool keep_k, double ridge_rel) {
                 SolveOptions o;
                 o.basis = basis;
                 o.floor_override = floor_override;
                 o.keep_y = keep_y;
                 o.keep_k = keep_k;
                 o.ridge_rel = ridge_rel;
                 return o;
             }),
             py::arg("basis") = BasisSpec{}, py::arg("floor_override") = std::nullopt,
             py::arg("keep_y") = true, py::arg("keep_k") = true, py::arg("ridge_rel") = 1e-8)
        .def_readwrite("keep_y", &SolveOptions::keep_y)
        .def_readwrite("keep_k", &SolveOptions::keep_k);

    py::class_<ValueEstimate>(m, "ValueEstimate")
        .def_readonly("mean", &ValueEstimate::mean)
        .def_readonly("stderr", &ValueEstimate::stderr_)
        .def_readonly("n_samples", &ValueEstimate::n_samples)
        .def("__repr__", [](const ValueEstimate& v) {
            return "ValueEstimate(mean=" + std::to_string(v.mean) +
                   ", stderr=" + std::to_string(v.stderr_) + ")";
        });

    py::class_<RbsdeSolution>(m, "RbsdeSolution")
        .def_readonly("n_paths", &RbsdeSolution::n_paths)
        .def_readonly("floor_index", &RbsdeSolution::floor_index)
        .def_readonly("value_insample", &RbsdeSolution::value_insample)
        .def_readonly("value_policy", &RbsdeSolution::value_policy)
        .def_readonly("rule", &RbsdeSolution::rule)
        .def_readonly("k_mass_profile", &RbsdeSolution::k_mass_profile)
        .def_readonly("y_mean_profile", &RbsdeSolution::y_mean_profile)
        .def_property_readonly("y", [](py::object self) {
            const auto& s = self.cast<const RbsdeSolution&>();
            return matrix_view(self, s.y, s.n_paths, s.grid.n_steps + 1);
        })
        .def_property_readonly("k_inc", [](py::object self) {
            const auto& s = self.cast<const RbsdeSolution&>();
            return matrix_view(self, s.k_inc, s.n_paths, s.grid.n_steps + 1);
        });

    py::class_<PolicyEvalResult>(m, "PolicyEvalResult")
        .def_readonly("estimate", &PolicyEvalResult::estimate)
        .def_readonly("stop_histogram", &PolicyEvalResult::stop_histogram);

    m.def("solve", &solve, py::arg("batch"), py::arg("obstacle"), py::arg("bound"),
          py::arg("options") = SolveOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_policy", &evaluate_policy, py::arg("solution"), py::arg("fresh"),
          py::arg("fresh_obstacle"), py::arg("bound"), py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_policy_fresh", &evaluate_policy_fresh, py::arg("solution"), py::arg("bound"),
          py::arg("n_paths"), py::arg("seed"), py::arg("kind") = PathKind::brownian,
          py::arg("walk_step") = 0.0, py::call_guard<py::gil_scoped_release>());
    m.def("stopping_histogram", &stopping_histogram, py::arg("solution"));

    py::class_<RunOutput>(m, "RunOutput")
        .def_readonly("solution", &RunOutput::solution)
        .def_readonly("policy", &RunOutput::policy)
        .def_readonly("probe", &RunOutput::probe);
    m.def("run_problem", &run_problem, py::arg("bound"), py::arg("n_paths"),
          py::arg("eval_paths"), py::arg("seed"), py::arg("options") = SolveOptions{},
          py::arg("kind") = PathKind::brownian, py::arg("walk_step") = 0.0,
          py::call_guard<py::gil_scoped_release>());

    m.def("expected_max", &expected_max, py::arg("s"));
    m.def("closed_form_value", &closed_form_value, py::arg("eps"), py::arg("T"));
    py::class_<Bounds>(m, "Bounds")
        .def_readonly("lower", &Bounds::lower)
        .def_readonly("upper", &Bounds::upper)
        .def_readonly("lower_is_strict", &Bounds::lower_is_strict);
    m.def("bounds", &bounds, py::arg("eps"), py::arg("T"));

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("eps", &SweepRow::eps)
        .def_readonly("value_policy", &SweepRow::value_policy)
        .def_readonly("stderr", &SweepRow::stderr_)
        .def_readonly("value_insample", &SweepRow::value_insample)
        .def_readonly("lower", &SweepRow::lower)
        .def_readonly("upper", &SweepRow::upper)
        .def_readonly("closed_form", &SweepRow::closed_form);
    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init([](std::size_t n_steps, std::size_t n_paths, std::size_t eval_paths,
                         std::uint64_t seed) {
                 SweepConfig c;
                 c.n_steps = n_steps;
                 c.n_paths = n_paths;
                 c.eval_paths = eval_paths;
                 c.seed = seed;
                 return c;
             }),
             py::arg("n_steps") = 500, py::arg("n_paths") = 50000,
             py::arg("eval_paths") = 50000, py::arg("seed") = 1);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("max_adjacent_jump", &SweepResult::max_adjacent_jump);
    m.def("sweep", &sweep, py::arg("T"), py::arg("eps_values"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    m.def("set_max_threads", &set_max_threads, py::arg("n"));
    m.def("policy_eval_seed", &rng::policy_eval_seed, py::arg("seed"));
}
