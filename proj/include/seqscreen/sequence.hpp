// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

// Sequential screening toward a fixed target lambda_t.
//
// Every run screens and solves lambda_1 > ... > lambda_N = lambda_t. The
// feedback strategy (dass) picks each lambda_k from the previous dual point so
// that the dome used at step k has diameter R; dpp_feedback does the same for
// the DPP sphere; geometric uses a log-spaced grid fixed in advance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqscreen/dictionary.hpp"
#include "seqscreen/lasso.hpp"
#include "seqscreen/regions.hpp"

namespace seqscreen {

enum class StrategyKind { dass, geometric, dpp_feedback };
enum class ScreeningRule { dome, dpp, strong };

std::string to_string(StrategyKind k);
std::string to_string(ScreeningRule r);
StrategyKind strategy_kind_from_string(const std::string& s);
ScreeningRule screening_rule_from_string(const std::string& s);

struct SequenceStrategy {
    StrategyKind kind = StrategyKind::dass;
    double R = 0.4;                // diameter budget (dass, dpp_feedback)
    std::size_t N = 0;             // grid length (geometric)
    double lambda_1_factor = 0.95; // lambda_1 = factor * lambda_max
    ScreeningRule rule = ScreeningRule::dome; // geometric only

    static SequenceStrategy dass(double R);
    static SequenceStrategy dpp_feedback(double R);
    static SequenceStrategy geometric(std::size_t N, ScreeningRule rule);

    void validate() const;
    /// Rule actually applied: dome for dass, dpp for dpp_feedback.
    ScreeningRule effective_rule() const;
    std::string label() const;
};

struct NoiseConfig {
    double nsr = 0.0;                 // noise power / weight power
    std::optional<double> threshold;  // absolute; default 1e-3 * max|w|
    std::uint64_t seed = 0;

    void validate() const;
};

struct NoisyWeights {
    std::vector<double> w;
    bool power_undefined = false; // w == 0 with nsr > 0: returned unchanged
};

/// Adds i.i.d. N(0, nsr * mean(w^2)) noise to every entry, then zeroes entries
/// below the threshold. `stream` separates the draws of different steps.
NoisyWeights inject_noise(std::span<const double> w, const NoiseConfig& noise, std::uint64_t stream = 0);

struct FeedbackStep {
    double lambda = 0.0;
    bool floored = false; // quadratic form vanished; ||x||^2 used instead
};

/// 1/lambda_k = 1/lambda_prev + (R/2) / sqrt(x^T (I - n n^T) x).
FeedbackStep next_lambda_dass_step(double lambda_prev, std::span<const double> x, std::span<const double> n_prev,
                                   double R);
double next_lambda_dass(double lambda_prev, std::span<const double> x, std::span<const double> n_prev, double R);

/// 1/lambda_k = 1/lambda_prev + R/2: the DPP sphere 2(1/lambda_k - 1/lambda_prev)
/// then has diameter R for a unit-norm target.
double next_lambda_dpp_feedback(double lambda_prev, double R);

/// [lambda_1, a lambda_1, ..., lambda_t] with a = (lambda_t/lambda_1)^(1/(N-1)).
std::vector<double> geometric_grid(double lambda_1, double lambda_t, std::size_t N);

struct RunOptions {
    std::size_t chunk_size = 256;
    std::size_t memory_cap_bytes = 0; // 0: unlimited; caps the gathered kept columns
    bool keep_masks = false;          // store every step's KeepMask in the trace
};

struct StepRecord {
    double lambda = 0.0;
    std::size_t kept_count = 0;
    std::optional<double> region_diameter; // empty for the Strong rule and lambda >= lambda_max
    std::string region_kind;               // dome | sphere | dpp | strong | none
    double gap = 0.0;                      // absolute duality gap of the reduced solve
    bool converged = true;
    std::size_t iterations = 0;
    double screen_seconds = 0.0;
    double solve_seconds = 0.0;
    double theta_norm = 0.0;
    std::size_t false_rejections = 0; // discarded features certifiably violating optimality
    bool degenerate = false;
    double dual_error = 0.0; // bound on ||theta_prev - theta*_prev|| the screening region was widened by
};

struct SequenceTrace {
    SequenceStrategy strategy;
    double lambda_max = 0.0;
    std::size_t lambda_max_index = 0;
    double lambda_t = 0.0;
    double x_norm = 0.0;
    std::size_t p = 0;
    std::vector<double> lambdas;
    std::vector<StepRecord> steps;
    std::vector<double> w;                  // final solution, full length p
    std::vector<std::size_t> degenerate_steps; // 1-based step numbers
    std::vector<KeepMask> masks;            // only with RunOptions::keep_masks
    std::size_t N = 0;
    double total_seconds = 0.0;
    bool noise_injected = false;

    bool all_converged() const;
    std::size_t final_kept() const { return steps.empty() ? 0 : steps.back().kept_count; }
    std::size_t total_false_rejections() const;
};

/// Screens and solves along the strategy's sequence down to lambda_t.
/// Throws NumericalError on an integrity failure (all features screened away
/// below lambda_max, dome center inside its half-space, broken trace
/// invariants) and MemoryCapExceeded when the kept columns exceed the cap.
SequenceTrace run_sequence(const Dictionary& dict, std::span<const double> x, double lambda_t,
                           const SequenceStrategy& strategy, const SolverConfig& solver,
                           const std::optional<NoiseConfig>& noise = std::nullopt, const RunOptions& options = {});

struct BoundParams {
    double C = 1.0;   // bound on ||theta(lambda)||
    double rho = 0.0; // dual inexactness
};

/// 1 + ln(1/lambda_t) / ln(1 + R / (2 (C + rho))); 1 when lambda_t >= 1.
double n_upper_bound(double lambda_t, double R, const BoundParams& params);

/// 1 + 2 (1/lambda_t - 1/lambda_1) / R
double dpp_feedback_n_bound(double lambda_t, double lambda_1, double R);

/// C = max_k ||theta_k||; rho = max_k sqrt(2 gap_k) / lambda_k over steps with gap > 1e-12.
BoundParams estimate_dual_bound(const SequenceTrace& trace);

} // namespace seqscreen
