// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

// Python bindings. Dictionaries cross the boundary as float64 (d, p) arrays;
// indices are 0-based, traces are returned as plain dicts.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqscreen/dictionary.hpp"
#include "seqscreen/error.hpp"
#include "seqscreen/json_io.hpp"
#include "seqscreen/lasso.hpp"
#include "seqscreen/regions.hpp"
#include "seqscreen/sequence.hpp"

namespace py = pybind11;
using namespace seqscreen;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;
using CArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Dictionary to_dictionary(const FArray& a, bool normalize) {
    if (a.ndim() != 2) throw InvalidArgument("dictionary must be a 2-D array");
    const auto d = static_cast<std::size_t>(a.shape(0));
    const auto p = static_cast<std::size_t>(a.shape(1));
    Dictionary dict(d, p, std::vector<double>(a.data(), a.data() + d * p));
    return normalize ? dict.normalize_columns() : dict;
}

std::vector<double> to_vector(const CArray& a) {
    if (a.ndim() != 1) throw InvalidArgument("expected a 1-D array");
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> dictionary_array(const Dictionary& dict) {
    const auto d = static_cast<py::ssize_t>(dict.rows()), p = static_cast<py::ssize_t>(dict.cols());
    py::array_t<double, py::array::f_style> out({d, p});
    const auto data = dict.data();
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

SolverConfig solver_config(double gap_tol, std::size_t max_iters, const std::string& algorithm) {
    SolverConfig cfg;
    cfg.gap_tol = gap_tol;
    cfg.max_iters = max_iters;
    cfg.algorithm = solver_algorithm_from_string(algorithm);
    return cfg;
}

Region make_region(const CArray& center, double radius, std::optional<CArray> normal, double offset) {
    Region r;
    r.center = to_vector(center);
    r.radius = radius;
    if (normal) r.halfspace = Halfspace{to_vector(*normal), offset};
    r.validate();
    return r;
}

} // namespace

PYBIND11_MODULE(_seqscreen, m) {
    m.doc() = "Sequential safe screening for the lasso";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<MemoryCapExceeded>(m, "MemoryCapExceeded", PyExc_MemoryError);

    m.def(
        "gen_synthetic",
        [](std::size_t d, std::size_t p, std::uint64_t seed, const std::string& target) {
            const auto mode = target == "random" ? TargetMode::random
                              : (target == "in-range" || target == "in_range")
                                  ? TargetMode::in_range
                                  : throw InvalidArgument("target must be 'random' or 'in-range'");
            const auto inst = gen_synthetic(d, p, seed, mode);
            return py::make_tuple(dictionary_array(inst.dictionary), to_array(inst.x));
        },
        py::arg("d"), py::arg("p"), py::arg("seed"), py::arg("target") = "in-range",
        "Unit-norm Gaussian dictionary (d, p) and unit target x.");

    m.def(
        "lambda_max",
        [](const FArray& D, const CArray& x, bool normalize) {
            const auto dict = to_dictionary(D, normalize);
            const auto r = lambda_max(dict, to_vector(x));
            py::dict out;
            out["lambda_max"] = r.lambda_max;
            out["index"] = r.argmax_index;
            out["sign"] = r.sign;
            return out;
        },
        py::arg("D"), py::arg("x"), py::arg("normalize") = false);

    m.def(
        "solve_lasso",
        [](const FArray& D, const CArray& x, double lam, double gap_tol, std::size_t max_iters,
           const std::string& algorithm, std::optional<CArray> warm_start, bool normalize) {
            const auto dict = to_dictionary(D, normalize);
            const auto xv = to_vector(x);
            std::optional<std::vector<double>> warm;
            if (warm_start) warm = to_vector(*warm_start);
            const auto sol = solve_lasso(LassoProblem{dict, xv, lam},
                                         warm ? std::optional<std::span<const double>>(*warm) : std::nullopt,
                                         solver_config(gap_tol, max_iters, algorithm));
            py::dict out;
            out["w"] = to_array(sol.w);
            out["theta"] = to_array(sol.theta);
            out["gap"] = sol.gap;
            out["primal_objective"] = sol.primal_objective;
            out["dual_objective"] = sol.dual_objective;
            out["converged"] = sol.converged;
            out["iterations"] = sol.iterations;
            return out;
        },
        py::arg("D"), py::arg("x"), py::arg("lam"), py::arg("gap_tol") = 1e-8, py::arg("max_iters") = 100000,
        py::arg("algorithm") = "cd", py::arg("warm_start") = py::none(), py::arg("normalize") = false,
        "Lasso 1/2||x - Dw||^2 + lam ||w||_1 to relative duality gap gap_tol.");

    m.def(
        "region_max",
        [](const CArray& center, double radius, const CArray& a, std::optional<CArray> normal, double offset) {
            return region_max(make_region(center, radius, normal, offset), to_vector(a));
        },
        py::arg("center"), py::arg("radius"), py::arg("a"), py::arg("normal") = py::none(), py::arg("offset") = 0.0,
        "max a^T theta over {||theta - center|| <= radius, normal^T theta <= offset}.");

    m.def(
        "region_diameter",
        [](const CArray& center, double radius, std::optional<CArray> normal, double offset) {
            return region_diameter(make_region(center, radius, normal, offset));
        },
        py::arg("center"), py::arg("radius"), py::arg("normal") = py::none(), py::arg("offset") = 0.0);

    m.def(
        "step_region",
        [](const CArray& x, double lambda_k, double lambda_prev, const CArray& theta_prev) {
            const auto r = build_step_region(to_vector(x), lambda_k, lambda_prev, to_vector(theta_prev));
            py::dict out;
            out["center"] = to_array(r.center);
            out["radius"] = r.radius;
            out["normal"] = r.halfspace ? py::object(to_array(r.halfspace->normal)) : py::object(py::none());
            out["offset"] = r.halfspace ? r.halfspace->offset : 0.0;
            out["degenerate"] = r.degenerate;
            out["diameter"] = region_diameter(r);
            return out;
        },
        py::arg("x"), py::arg("lambda_k"), py::arg("lambda_prev"), py::arg("theta_prev"));

    m.def(
        "screen",
        [](const FArray& D, const CArray& center, double radius, std::optional<CArray> normal, double offset) {
            const auto dict = to_dictionary(D, false);
            const auto mask = screen(dict, make_region(center, radius, normal, offset));
            py::array_t<bool> out(static_cast<py::ssize_t>(mask.keep.size()));
            std::copy(mask.keep.begin(), mask.keep.end(), out.mutable_data());
            return out;
        },
        py::arg("D"), py::arg("center"), py::arg("radius"), py::arg("normal") = py::none(), py::arg("offset") = 0.0,
        "Boolean keep mask: True where the feature may be active for any dual point in the region.");

    m.def("next_lambda_dass",
          [](double lambda_prev, const CArray& x, const CArray& n_prev, double R) {
              return next_lambda_dass(lambda_prev, to_vector(x), to_vector(n_prev), R);
          },
          py::arg("lambda_prev"), py::arg("x"), py::arg("n_prev"), py::arg("R"));
    m.def("next_lambda_dpp_feedback", &next_lambda_dpp_feedback, py::arg("lambda_prev"), py::arg("R"));
    m.def("geometric_grid", &geometric_grid, py::arg("lambda_1"), py::arg("lambda_t"), py::arg("N"));
    m.def(
        "n_upper_bound",
        [](double lambda_t, double R, double C, double rho) { return n_upper_bound(lambda_t, R, BoundParams{C, rho}); },
        py::arg("lambda_t"), py::arg("R"), py::arg("C"), py::arg("rho") = 0.0);
    m.def("dpp_feedback_n_bound", &dpp_feedback_n_bound, py::arg("lambda_t"), py::arg("lambda_1"), py::arg("R"));

    m.def(
        "run_sequence",
        [](const FArray& D, const CArray& x, double lambda_ratio, const std::string& strategy, double R, std::size_t N,
           const std::string& rule, double lambda_1_factor, double gap_tol, std::size_t max_iters,
           const std::string& algorithm, std::optional<double> noise_nsr, std::optional<double> noise_threshold,
           std::uint64_t seed, bool normalize, std::size_t chunk_size) {
            const auto dict = to_dictionary(D, normalize);
            const auto xv = to_vector(x);
            SequenceStrategy s;
            switch (strategy_kind_from_string(strategy)) {
            case StrategyKind::dass: s = SequenceStrategy::dass(R); break;
            case StrategyKind::dpp_feedback: s = SequenceStrategy::dpp_feedback(R); break;
            case StrategyKind::geometric: s = SequenceStrategy::geometric(N, screening_rule_from_string(rule)); break;
            }
            s.lambda_1_factor = lambda_1_factor;
            std::optional<NoiseConfig> noise;
            if (noise_nsr) noise = NoiseConfig{*noise_nsr, noise_threshold, seed};
            RunOptions opts;
            opts.chunk_size = chunk_size;
            const double lt = lambda_ratio * lambda_max(dict, xv, chunk_size).lambda_max;
            SequenceTrace trace;
            {
                py::gil_scoped_release release;
                trace = run_sequence(dict, xv, lt, s, solver_config(gap_tol, max_iters, algorithm), noise, opts);
            }
            return to_python(trace_to_json(trace));
        },
        py::arg("D"), py::arg("x"), py::arg("lambda_ratio"), py::arg("strategy") = "dass", py::arg("R") = 0.4,
        py::arg("N") = 0, py::arg("rule") = "dome", py::arg("lambda_1_factor") = 0.95, py::arg("gap_tol") = 1e-8,
        py::arg("max_iters") = 100000, py::arg("algorithm") = "cd", py::arg("noise_nsr") = py::none(),
        py::arg("noise_threshold") = py::none(), py::arg("seed") = 0, py::arg("normalize") = true,
        py::arg("chunk_size") = 256,
        "Screen and solve down to lambda_t = lambda_ratio * lambda_max; returns the trace as a dict.");

    m.def(
        "validate_trace",
        [](const py::object& trace) {
            const auto text = py::module_::import("json").attr("dumps")(trace).cast<std::string>();
            return validate_trace_json(nlohmann::json::parse(text));
        },
        py::arg("trace"), "List of schema violations (empty when valid).");
}
