// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "seqscreen/dictionary.hpp"
#include "seqscreen/error.hpp"
#include "seqscreen/lasso.hpp"

using namespace seqscreen;

namespace {

// Independent objective evaluations.
double ref_primal(const std::vector<double>& m, std::size_t d, const std::vector<double>& x,
                  const std::vector<double>& w, double lambda) {
    std::vector<double> r = x;
    double l1 = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        for (std::size_t i = 0; i < d; ++i) r[i] -= m[j * d + i] * w[j];
        l1 += std::abs(w[j]);
    }
    return 0.5 * oracle::dot(r, r) + lambda * l1;
}

double ref_dual(const std::vector<double>& x, const std::vector<double>& theta, double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (theta[i] - x[i] / lambda) * (theta[i] - x[i] / lambda);
    return 0.5 * oracle::dot(x, x) - 0.5 * lambda * lambda * s;
}

double max_abs_corr(const Dictionary& D, const std::vector<double>& v) {
    double best = 0.0;
    for (std::size_t j = 0; j < D.cols(); ++j) {
        const auto c = D.column(j);
        best = std::max(best, std::abs(oracle::dot(std::vector<double>(c.begin(), c.end()), v)));
    }
    return best;
}

} // namespace

TEST_CASE("scalar soft threshold") {
    Dictionary D(2, 1, {1, 0});
    const std::vector<double> x{2, 0};
    const auto sol = solve_lasso(LassoProblem{D, x, 1.0}, std::nullopt, SolverConfig{});
    CHECK(sol.converged);
    CHECK(sol.w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.theta[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sol.theta[1]) <= 1e-15);
    CHECK(sol.gap <= 1e-8 * 2.0);

    const auto zero = solve_lasso(LassoProblem{D, x, 2.5}, std::nullopt, SolverConfig{});
    CHECK(zero.w[0] == 0.0);
}

TEST_CASE("orthonormal design thresholds coordinate-wise") {
    Dictionary D(2, 2, {1, 0, 0, 1});
    const std::vector<double> x{3, 1};
    for (auto alg : {SolverAlgorithm::coordinate_descent, SolverAlgorithm::proximal_gradient}) {
        SolverConfig cfg;
        cfg.algorithm = alg;
        cfg.gap_tol = 1e-16;
        const auto sol = solve_lasso(LassoProblem{D, x, 1.0}, std::nullopt, cfg);
        // Unit curvature: |w - w*| and ||theta - theta*|| are at most sqrt(2 gap) (lambda = 1).
        const double bound = dual_error_bound(sol.primal_objective, sol.dual_objective, 1.0);
        CHECK(bound <= 1e-6);
        CHECK(std::abs(sol.w[0] - 2.0) <= bound);
        CHECK(std::abs(sol.w[1]) <= bound);
        CHECK(std::abs(sol.theta[0] - 1.0) <= bound);
        CHECK(std::abs(sol.theta[1] - 1.0) <= bound);
    }
}

TEST_CASE("dual_point examples") {
    Dictionary D(2, 1, {1, 0});
    const std::vector<double> x{2, 0};
    const auto t = dual_point(LassoProblem{D, x, 1.0}, std::vector<double>{1.0});
    CHECK(t == std::vector<double>{1.0, 0.0});

    const auto inst = gen_synthetic(20, 100, 12, TargetMode::random);
    const double lmax = lambda_max(inst.dictionary, inst.x).lambda_max;
    const std::vector<double> w0(100, 0.0);
    const auto at_max = dual_point(LassoProblem{inst.dictionary, inst.x, lmax}, w0);
    for (std::size_t i = 0; i < 20; ++i) CHECK(at_max[i] == doctest::Approx(inst.x[i] / lmax).epsilon(1e-14));

    const auto half = dual_point(LassoProblem{inst.dictionary, inst.x, lmax / 2}, w0);
    for (std::size_t i = 0; i < 20; ++i) CHECK(half[i] == doctest::Approx(inst.x[i] / lmax).epsilon(1e-14));
    CHECK(max_abs_corr(inst.dictionary, half) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dual points are always feasible") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = gen_synthetic(8, 25, seed, TargetMode::random);
        std::vector<double> w(25);
        for (auto& v : w) v = nd(rng);
        for (double lambda : {0.01, 0.1, 1.0, 10.0}) {
            const auto theta = dual_point(LassoProblem{inst.dictionary, inst.x, lambda}, w);
            CHECK(max_abs_corr(inst.dictionary, theta) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("duality gap examples") {
    Dictionary D(2, 1, {1, 0});
    const std::vector<double> x{2, 0};
    const LassoProblem prob{D, x, 1.0};
    CHECK(std::abs(duality_gap(prob, std::vector<double>{1.0}, std::vector<double>{1.0, 0.0})) <= 1e-12);
    CHECK(duality_gap(prob, std::vector<double>{0.0}, std::vector<double>{0.0, 0.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(duality_gap(prob, std::vector<double>{0.0}, std::vector<double>{1.5, 0.0}), InvalidArgument);
}

TEST_CASE("solver gap matches independent objective evaluation") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = gen_synthetic(20, 60, seed, TargetMode::in_range);
        const double lambda = 0.2 * lambda_max(inst.dictionary, inst.x).lambda_max;
        const auto sol = solve_lasso(LassoProblem{inst.dictionary, inst.x, lambda}, std::nullopt, SolverConfig{});
        const std::vector<double> m(inst.dictionary.data().begin(), inst.dictionary.data().end());
        const double gap = ref_primal(m, 20, inst.x, sol.w, lambda) - ref_dual(inst.x, sol.theta, lambda);
        CHECK(std::abs(gap - sol.gap) <= 1e-10);
        CHECK(sol.gap >= -1e-12);
        CHECK(sol.gap <= 1e-8 * 0.5 * oracle::dot(inst.x, inst.x));
        CHECK(max_abs_corr(inst.dictionary, sol.theta) <= 1.0 + 1e-12);
    }
}

TEST_CASE("warm start reaches the same objective") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = gen_synthetic(20, 80, seed, TargetMode::in_range);
        const double lmax = lambda_max(inst.dictionary, inst.x).lambda_max;
        SolverConfig cfg;
        const auto cold = solve_lasso(LassoProblem{inst.dictionary, inst.x, 0.1 * lmax}, std::nullopt, cfg);
        const auto prev = solve_lasso(LassoProblem{inst.dictionary, inst.x, 0.3 * lmax}, std::nullopt, cfg);
        const auto warm =
            solve_lasso(LassoProblem{inst.dictionary, inst.x, 0.1 * lmax}, std::span<const double>(prev.w), cfg);
        CHECK(std::abs(cold.primal_objective - warm.primal_objective) <=
              2 * cfg.gap_tol * std::max(cold.primal_objective, warm.primal_objective));
    }
}

TEST_CASE("single column matches closed form") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(6), x(6);
        for (auto& v : a) v = nd(rng);
        for (auto& v : x) v = nd(rng);
        Dictionary D(6, 1, a);
        const double aa = oracle::dot(a, a), ax = oracle::dot(a, x);
        const double lambda = 0.5 * std::abs(ax) * std::abs(nd(rng));
        if (!(lambda > 0.0)) continue;
        const double expected = (ax > 0 ? 1 : -1) * std::max(std::abs(ax) - lambda, 0.0) / aa;
        for (auto alg : {SolverAlgorithm::coordinate_descent, SolverAlgorithm::proximal_gradient}) {
            SolverConfig cfg;
            cfg.algorithm = alg;
            cfg.gap_tol = 1e-14;
            const auto sol = solve_lasso(LassoProblem{D, x, lambda}, std::nullopt, cfg);
            // P is aa-strongly convex in w, so |w - w*| <= sqrt(2 gap / aa).
            const double err = dual_error_bound(sol.primal_objective, sol.dual_objective, 1.0) / std::sqrt(aa);
            CHECK(std::abs(sol.w[0] - expected) <= err);
            CHECK(std::abs(sol.w[0] - expected) <= 1e-6);
        }
    }
}

TEST_CASE("proximal gradient descends monotonically") {
    const auto inst = gen_synthetic(30, 90, 17, TargetMode::random);
    const double lambda = 0.05 * lambda_max(inst.dictionary, inst.x).lambda_max;
    SolverConfig cfg;
    cfg.algorithm = SolverAlgorithm::proximal_gradient;
    cfg.track_objective = true;
    const auto sol = solve_lasso(LassoProblem{inst.dictionary, inst.x, lambda}, std::nullopt, cfg);
    REQUIRE(sol.objective_history.size() > 2);
    for (std::size_t t = 1; t < sol.objective_history.size(); ++t) {
        CHECK(sol.objective_history[t] <= sol.objective_history[t - 1] + 1e-15);
    }
    const auto cd = solve_lasso(LassoProblem{inst.dictionary, inst.x, lambda}, std::nullopt, SolverConfig{});
    CHECK(std::abs(cd.primal_objective - sol.primal_objective) <= 1e-7);
}

TEST_CASE("iteration cap is reported as non-convergence") {
    const auto inst = gen_synthetic(30, 90, 3, TargetMode::random);
    const double lambda = 0.01 * lambda_max(inst.dictionary, inst.x).lambda_max;
    SolverConfig cfg;
    cfg.max_iters = 1;
    cfg.gap_tol = 1e-14;
    const auto sol = solve_lasso(LassoProblem{inst.dictionary, inst.x, lambda}, std::nullopt, cfg);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations <= 1);
    CHECK(max_abs_corr(inst.dictionary, sol.theta) <= 1.0 + 1e-12);
}

TEST_CASE("solver input validation") {
    Dictionary D(2, 1, {1, 0});
    const std::vector<double> x{2, 0};
    CHECK_THROWS_AS(solve_lasso(LassoProblem{D, x, 0.0}, std::nullopt, SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(solve_lasso(LassoProblem{D, std::vector<double>{1, 2, 3}, 1.0}, std::nullopt, SolverConfig{}),
                    InvalidArgument);
    const std::vector<double> warm{1, 2};
    CHECK_THROWS_AS(solve_lasso(LassoProblem{D, x, 1.0}, std::span<const double>(warm), SolverConfig{}),
                    InvalidArgument);
    SolverConfig bad;
    bad.gap_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK(solver_algorithm_from_string("pg") == SolverAlgorithm::proximal_gradient);
}
