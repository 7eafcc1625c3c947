// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqscreen/dictionary.hpp"

namespace seqscreen {

/// min_w 1/2 ||x - D w||^2 + lambda ||w||_1
struct LassoProblem {
    const Dictionary& dictionary;
    std::span<const double> x;
    double lambda;

    void validate() const;
};

enum class SolverAlgorithm { coordinate_descent, proximal_gradient };

std::string to_string(SolverAlgorithm a);
SolverAlgorithm solver_algorithm_from_string(const std::string& s);

struct SolverConfig {
    double gap_tol = 1e-8;          // relative to 1/2 ||x||^2
    std::size_t max_iters = 100000; // passes (CD) or gradient steps (PG)
    SolverAlgorithm algorithm = SolverAlgorithm::coordinate_descent;
    bool track_objective = false;   // record P(w) after every iteration

    void validate() const;
};

struct LassoSolution {
    std::vector<double> w;
    std::vector<double> theta;    // dual feasible for the solved dictionary
    std::vector<double> residual; // x - D w
    double gap = 0.0;             // absolute duality gap P(w) - D(theta)
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    std::size_t iterations = 0;
    double solve_seconds = 0.0;
    bool converged = false;
    std::vector<double> objective_history;
};

/// Solves to relative duality gap <= config.gap_tol. Requires an in-memory
/// dictionary. On hitting max_iters the last iterate is returned with
/// converged == false.
LassoSolution solve_lasso(const LassoProblem& problem, std::optional<std::span<const double>> warm_start,
                          const SolverConfig& config);

/// theta = rho / max(lambda, ||D^T rho||_inf) with rho = x - D w; always dual
/// feasible, equal to rho / lambda whenever that is already feasible.
std::vector<double> dual_point(const LassoProblem& problem, std::span<const double> w);

/// Same construction from a residual and its correlations max_i |a_i^T rho|.
std::vector<double> dual_point_from_residual(std::span<const double> residual, double lambda,
                                             double max_abs_correlation);

double primal_objective(const LassoProblem& problem, std::span<const double> w);
/// 1/2 ||x||^2 - lambda^2/2 ||theta - x/lambda||^2
double dual_objective(std::span<const double> x, double lambda, std::span<const double> theta);

/// P(w) - D(theta). Throws InvalidArgument if theta is infeasible (|a_i^T theta| > 1 + 1e-9).
double duality_gap(const LassoProblem& problem, std::span<const double> w, std::span<const double> theta);

/// Relative rounding floor applied to a computed duality gap.
inline constexpr double kGapRounding = 1e-14;

/// Bound on ||theta - theta*|| for a feasible theta, from the objectives of a
/// primal/dual pair: the dual is lambda^2-strongly concave, so
/// ||theta - theta*|| <= sqrt(2 gap) / lambda. The gap is floored at
/// kGapRounding * (|primal| + |dual|) since P - D cancels catastrophically near
/// the optimum.
double dual_error_bound(double primal, double dual, double lambda);

/// x - D w, streaming the dictionary.
std::vector<double> residual(const Dictionary& dict, std::span<const double> x, std::span<const double> w);

} // namespace seqscreen
