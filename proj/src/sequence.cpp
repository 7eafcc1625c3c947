// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "seqscreen/sequence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "seqscreen/error.hpp"
#include "seqscreen/kernels.hpp"

namespace seqscreen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Full-dictionary state after solving step k.
struct DualState {
    double lambda = 0.0;
    std::vector<double> theta;
    std::vector<double> residual;
    std::vector<double> w; // full length p
    double error = 0.0;    // certified bound on ||theta - theta*||
};

// Unit normal of the separating hyperplane at theta for x/lambda; empty when undefined.
std::vector<double> separating_normal(std::span<const double> x, double lambda, std::span<const double> theta) {
    std::vector<double> n(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) n[i] = x[i] / lambda - theta[i];
    const double len = kernels::norm(n);
    if (len <= kRegionTolerance) return {};
    for (auto& v : n) v /= len;
    return n;
}

void check_trace(const SequenceTrace& trace) {
    const auto& l = trace.lambdas;
    if (l.empty() || l.back() != trace.lambda_t) throw NumericalError("trace does not end at lambda_t");
    for (std::size_t k = 1; k < l.size(); ++k) {
        if (!(l[k] < l[k - 1])) throw NumericalError("trace lambdas are not strictly decreasing");
    }
    if (trace.strategy.kind == StrategyKind::dass) {
        for (std::size_t k = 1; k < trace.steps.size(); ++k) {
            const auto& diam = trace.steps[k].region_diameter;
            if (diam && *diam > trace.strategy.R + 1e-9) {
                throw NumericalError("DASS region at step " + std::to_string(k + 1) + " has diameter " +
                                     std::to_string(*diam) + " > R");
            }
        }
    }
}

} // namespace

std::string to_string(StrategyKind k) {
    switch (k) {
    case StrategyKind::dass: return "dass";
    case StrategyKind::geometric: return "geometric";
    case StrategyKind::dpp_feedback: return "dpp-feedback";
    }
    return "?";
}

std::string to_string(ScreeningRule r) {
    switch (r) {
    case ScreeningRule::dome: return "dome";
    case ScreeningRule::dpp: return "dpp";
    case ScreeningRule::strong: return "strong";
    }
    return "?";
}

StrategyKind strategy_kind_from_string(const std::string& s) {
    if (s == "dass") return StrategyKind::dass;
    if (s == "geometric") return StrategyKind::geometric;
    if (s == "dpp-feedback" || s == "dpp_feedback") return StrategyKind::dpp_feedback;
    throw InvalidArgument("unknown strategy '" + s + "'");
}

ScreeningRule screening_rule_from_string(const std::string& s) {
    if (s == "dome") return ScreeningRule::dome;
    if (s == "dpp") return ScreeningRule::dpp;
    if (s == "strong") return ScreeningRule::strong;
    throw InvalidArgument("unknown screening rule '" + s + "'");
}

SequenceStrategy SequenceStrategy::dass(double R) {
    SequenceStrategy s;
    s.kind = StrategyKind::dass;
    s.R = R;
    return s;
}

SequenceStrategy SequenceStrategy::dpp_feedback(double R) {
    SequenceStrategy s;
    s.kind = StrategyKind::dpp_feedback;
    s.R = R;
    s.rule = ScreeningRule::dpp;
    return s;
}

SequenceStrategy SequenceStrategy::geometric(std::size_t N, ScreeningRule rule) {
    SequenceStrategy s;
    s.kind = StrategyKind::geometric;
    s.N = N;
    s.R = 0.0;
    s.rule = rule;
    return s;
}

void SequenceStrategy::validate() const {
    if (!(lambda_1_factor > 0.0 && lambda_1_factor < 1.0)) {
        throw InvalidArgument("lambda_1_factor must lie in (0, 1)");
    }
    if (kind == StrategyKind::geometric) {
        if (N < 2) throw InvalidArgument("geometric strategy needs N >= 2");
    } else if (!(R > 0.0) || !std::isfinite(R)) {
        throw InvalidArgument("feedback strategies need R > 0");
    }
}

ScreeningRule SequenceStrategy::effective_rule() const {
    switch (kind) {
    case StrategyKind::dass: return ScreeningRule::dome;
    case StrategyKind::dpp_feedback: return ScreeningRule::dpp;
    case StrategyKind::geometric: return rule;
    }
    return rule;
}

std::string SequenceStrategy::label() const {
    std::ostringstream os;
    switch (kind) {
    case StrategyKind::dass: os << "DASS(R=" << R << ")"; break;
    case StrategyKind::dpp_feedback: os << "DPP-feedback(R=" << R << ")"; break;
    case StrategyKind::geometric: {
        const char* name = rule == ScreeningRule::dome ? "Dome" : rule == ScreeningRule::dpp ? "DPP" : "Strong";
        os << "geometric-" << name << "(N=" << N << ")";
        break;
    }
    }
    return os.str();
}

void NoiseConfig::validate() const {
    if (!(nsr >= 0.0) || !std::isfinite(nsr)) throw InvalidArgument("noise nsr must be >= 0");
    if (threshold && !(*threshold >= 0.0)) throw InvalidArgument("noise threshold must be >= 0");
}

NoisyWeights inject_noise(std::span<const double> w, const NoiseConfig& noise, std::uint64_t stream) {
    noise.validate();
    NoisyWeights out{std::vector<double>(w.begin(), w.end()), false};
    if (w.empty()) return out;
    const double max_abs = kernels::max_abs(w);
    if (noise.nsr > 0.0) {
        if (max_abs == 0.0) {
            out.power_undefined = true;
            return out;
        }
        const double power = kernels::squared_norm(w) / static_cast<double>(w.size());
        const double sigma = std::sqrt(noise.nsr * power);
        std::seed_seq seq{noise.seed, stream};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, sigma);
        for (auto& v : out.w) v += normal(rng);
    }
    const double threshold = noise.threshold.value_or(1e-3 * max_abs);
    for (auto& v : out.w) {
        if (std::abs(v) < threshold) v = 0.0;
    }
    return out;
}

FeedbackStep next_lambda_dass_step(double lambda_prev, std::span<const double> x, std::span<const double> n_prev,
                                   double R) {
    if (!(lambda_prev > 0.0)) throw InvalidArgument("lambda_prev must be positive");
    if (!(R > 0.0)) throw InvalidArgument("R must be positive");
    if (n_prev.size() != x.size()) throw InvalidArgument("normal has wrong dimension");
    const double xx = kernels::squared_norm(x);
    if (xx == 0.0) throw InvalidArgument("target vector is zero");
    const double xn = kernels::dot(x, n_prev);
    double quad = xx - xn * xn;
    FeedbackStep step;
    if (quad <= 1e-12 * xx) {
        quad = xx;
        step.floored = true;
    }
    step.lambda = 1.0 / (1.0 / lambda_prev + 0.5 * R / std::sqrt(quad));
    return step;
}

double next_lambda_dass(double lambda_prev, std::span<const double> x, std::span<const double> n_prev, double R) {
    return next_lambda_dass_step(lambda_prev, x, n_prev, R).lambda;
}

double next_lambda_dpp_feedback(double lambda_prev, double R) {
    if (!(lambda_prev > 0.0)) throw InvalidArgument("lambda_prev must be positive");
    if (!(R > 0.0)) throw InvalidArgument("R must be positive");
    // Increment R/2 in 1/lambda (not 1/(2R)): this is what makes the DPP
    // sphere diameter equal R.
    return 1.0 / (0.5 * R + 1.0 / lambda_prev);
}

std::vector<double> geometric_grid(double lambda_1, double lambda_t, std::size_t N) {
    if (N < 2) throw InvalidArgument("geometric grid needs N >= 2");
    if (!(lambda_t > 0.0 && lambda_t < lambda_1)) throw InvalidArgument("need 0 < lambda_t < lambda_1");
    const double log_ratio = std::log(lambda_t / lambda_1);
    std::vector<double> grid(N);
    grid[0] = lambda_1;
    for (std::size_t k = 1; k + 1 < N; ++k) {
        grid[k] = lambda_1 * std::exp(log_ratio * static_cast<double>(k) / static_cast<double>(N - 1));
    }
    grid[N - 1] = lambda_t;
    return grid;
}

bool SequenceTrace::all_converged() const {
    return std::all_of(steps.begin(), steps.end(), [](const StepRecord& s) { return s.converged; });
}

std::size_t SequenceTrace::total_false_rejections() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.false_rejections;
    return n;
}

SequenceTrace run_sequence(const Dictionary& dict_in, std::span<const double> x, double lambda_t,
                           const SequenceStrategy& strategy, const SolverConfig& solver,
                           const std::optional<NoiseConfig>& noise, const RunOptions& options) {
    const auto t_start = Clock::now();
    strategy.validate();
    solver.validate();
    if (noise) noise->validate();
    if (x.size() != dict_in.rows()) throw InvalidArgument("target length does not match dictionary rows");
    if (!(lambda_t > 0.0) || !std::isfinite(lambda_t)) throw InvalidArgument("lambda_t must be positive");
    if (options.chunk_size == 0) throw InvalidArgument("chunk_size must be at least 1");

    const Dictionary dict = dict_in.with_column_norms();
    const std::size_t p = dict.cols();
    const std::size_t d = dict.rows();
    const auto lmr = lambda_max(dict, x, options.chunk_size);
    const double lmax = lmr.lambda_max;
    const ScreeningRule rule = strategy.effective_rule();

    SequenceTrace trace;
    trace.strategy = strategy;
    trace.lambda_max = lmax;
    trace.lambda_max_index = lmr.argmax_index;
    trace.lambda_t = lambda_t;
    trace.x_norm = kernels::norm(x);
    trace.p = p;
    trace.w.assign(p, 0.0);
    trace.noise_injected = noise.has_value();

    if (lambda_t >= lmax) {
        // Every feature is certified zero: theta = x / lambda_t is optimal.
        StepRecord step;
        step.lambda = lambda_t;
        step.kept_count = 0;
        step.region_kind = "none";
        step.theta_norm = trace.x_norm / lambda_t;
        trace.lambdas.push_back(lambda_t);
        trace.steps.push_back(step);
        if (options.keep_masks) trace.masks.push_back(KeepMask::all(p, false));
        trace.N = 1;
        trace.total_seconds = seconds_since(t_start);
        return trace;
    }

    const double lambda_1 = std::max(strategy.lambda_1_factor * lmax, lambda_t);
    std::vector<double> grid;
    if (strategy.kind == StrategyKind::geometric) {
        grid = lambda_1 > lambda_t ? geometric_grid(lambda_1, lambda_t, strategy.N) : std::vector<double>{lambda_t};
    }

    DualState prev;
    prev.lambda = lmax;
    prev.theta.resize(d);
    for (std::size_t i = 0; i < d; ++i) prev.theta[i] = x[i] / lmax;
    prev.residual.assign(x.begin(), x.end());
    prev.w.assign(p, 0.0);

    const std::vector<double> a_star = read_column(dict, lmr.argmax_index);
    double lambda_k = lambda_1;
    for (std::size_t k = 1;; ++k) {
        const bool final_step = lambda_k == lambda_t;
        StepRecord step;
        step.lambda = lambda_k;

        // Screen.
        auto t0 = Clock::now();
        KeepMask mask;
        if (rule == ScreeningRule::strong) {
            mask = strong_rule_screen_residual(dict, prev.residual, lambda_k, prev.lambda, options.chunk_size);
            step.region_kind = "strong";
        } else {
            Region region;
            if (rule == ScreeningRule::dpp) {
                region = dpp_region(prev.theta, lambda_k, prev.lambda, trace.x_norm);
                step.region_kind = "dpp";
            } else if (k == 1) {
                region = build_initial_region(x, lambda_k, lmr, a_star);
                step.region_kind = "dome";
            } else {
                region = build_step_region(x, lambda_k, prev.lambda, prev.theta);
                step.region_kind = region.halfspace ? "dome" : "sphere";
            }
            step.degenerate = region.degenerate;
            step.region_diameter = region_diameter(region);
            step.dual_error = prev.error;
            const Region safe = widen_for_dual_error(region, x, lambda_k, prev.lambda, prev.theta, prev.error);
            mask = screen(dict, safe, {options.chunk_size, nullptr});
            // Features active at the previous lambda lie on a face through
            // theta*_prev, which every exact region contains; keep them even
            // when a perturbed dual point says otherwise.
            bool added = false;
            for (std::size_t i = 0; i < p; ++i) {
                if (prev.w[i] != 0.0 && !mask.keep[i]) {
                    mask.keep[i] = 1;
                    added = true;
                }
            }
            if (added) mask = KeepMask::from_flags(std::move(mask.keep));
        }
        step.kept_count = mask.kept_count;
        if (mask.kept_count == 0) {
            throw NumericalError("integrity failure: every feature was screened out at lambda = " +
                                 std::to_string(lambda_k) + " < lambda_max");
        }
        const auto kept = mask.kept_indices();
        if (options.memory_cap_bytes > 0 && kept.size() * d * sizeof(double) > options.memory_cap_bytes) {
            throw MemoryCapExceeded("step " + std::to_string(k) + " keeps " + std::to_string(kept.size()) +
                                    " columns, above the memory cap");
        }
        const Dictionary reduced = dict.gather(kept);
        step.screen_seconds = seconds_since(t0);

        // Solve the reduced problem, warm-started by global feature index.
        std::vector<double> warm(kept.size());
        for (std::size_t j = 0; j < kept.size(); ++j) warm[j] = prev.w[kept[j]];
        const LassoProblem problem{reduced, x, lambda_k};
        auto sol = solve_lasso(problem, std::span<const double>(warm), solver);
        step.gap = sol.gap;
        step.converged = sol.converged;
        step.iterations = sol.iterations;
        step.solve_seconds = sol.solve_seconds;

        t0 = Clock::now();
        std::vector<double> w_reduced = std::move(sol.w);
        std::vector<double> rho = std::move(sol.residual);
        // Certified distance of the solver's dual point from theta*. Injected
        // noise is deliberately left out: its effect on screening is what a
        // noisy run measures.
        const double solver_error = [&] {
            const auto corr0 = correlations(dict, rho, options.chunk_size);
            const auto theta0 = dual_point_from_residual(rho, lambda_k, kernels::max_abs(corr0));
            const double primal = 0.5 * kernels::squared_norm(rho) + lambda_k * kernels::l1_norm(w_reduced);
            return dual_error_bound(primal, dual_objective(x, lambda_k, theta0), lambda_k);
        }();
        if (noise && !final_step) {
            auto noisy = inject_noise(w_reduced, *noise, k);
            w_reduced = std::move(noisy.w);
            rho = residual(reduced, x, w_reduced);
        }

        // Dual point feasible for the whole dictionary, not only the kept columns.
        const auto corr = correlations(dict, rho, options.chunk_size);
        double max_corr = 0.0;
        for (double c : corr) max_corr = std::max(max_corr, std::abs(c));
        DualState next;
        next.lambda = lambda_k;
        next.theta = dual_point_from_residual(rho, lambda_k, max_corr);
        next.error = solver_error;
        next.w.assign(p, 0.0);
        for (std::size_t j = 0; j < kept.size(); ++j) next.w[kept[j]] = w_reduced[j];
        if (rule == ScreeningRule::strong) {
            // |a_i^T rho*| = lambda on the support and ||rho - rho*|| <= sqrt(2 gap).
            const double slack = std::sqrt(2.0 * std::max(sol.gap, 0.0));
            const auto* norms = dict.column_norms();
            for (std::size_t i = 0; i < p; ++i) {
                if (!mask.keep[i] && std::abs(corr[i]) > lambda_k + slack * (*norms)[i]) ++step.false_rejections;
            }
        }
        next.residual = std::move(rho);
        step.theta_norm = kernels::norm(next.theta);
        step.screen_seconds += seconds_since(t0);

        trace.lambdas.push_back(lambda_k);
        if (options.keep_masks) trace.masks.push_back(mask);
        prev = std::move(next);

        if (final_step) {
            trace.steps.push_back(step);
            break;
        }

        // Choose the next lambda.
        double next_lambda = 0.0;
        switch (strategy.kind) {
        case StrategyKind::geometric: next_lambda = grid[k]; break;
        case StrategyKind::dpp_feedback:
            next_lambda = next_lambda_dpp_feedback(lambda_k, strategy.R / trace.x_norm);
            break;
        case StrategyKind::dass: {
            auto n = separating_normal(x, lambda_k, prev.theta);
            if (n.empty()) {
                n.assign(x.begin(), x.end());
                for (auto& v : n) v /= trace.x_norm;
            }
            const auto fb = next_lambda_dass_step(lambda_k, x, n, strategy.R);
            next_lambda = fb.lambda;
            if (fb.floored) step.degenerate = true;
            break;
        }
        }
        trace.steps.push_back(step);
        lambda_k = next_lambda <= lambda_t ? lambda_t : next_lambda;
    }

    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        if (trace.steps[k].degenerate) trace.degenerate_steps.push_back(k + 1);
    }
    trace.w = std::move(prev.w);
    trace.N = trace.lambdas.size();
    trace.total_seconds = seconds_since(t_start);
    check_trace(trace);
    return trace;
}

double n_upper_bound(double lambda_t, double R, const BoundParams& params) {
    if (!(R > 0.0) || !(params.C > 0.0) || !(params.rho >= 0.0)) {
        throw InvalidArgument("n_upper_bound needs R > 0, C > 0, rho >= 0");
    }
    if (lambda_t >= 1.0) return 1.0;
    return 1.0 + std::log(1.0 / lambda_t) / std::log1p(R / (2.0 * (params.C + params.rho)));
}

double dpp_feedback_n_bound(double lambda_t, double lambda_1, double R) {
    return 1.0 + 2.0 * (1.0 / lambda_t - 1.0 / lambda_1) / R;
}

BoundParams estimate_dual_bound(const SequenceTrace& trace) {
    if (trace.steps.empty()) throw InvalidArgument("trace has no steps");
    BoundParams b;
    b.C = 0.0;
    b.rho = 0.0;
    for (const auto& s : trace.steps) {
        b.C = std::max(b.C, s.theta_norm);
        if (s.gap > 1e-12) b.rho = std::max(b.rho, std::sqrt(2.0 * s.gap) / s.lambda);
    }
    return b;
}

} // namespace seqscreen
