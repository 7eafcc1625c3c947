// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

// seqscreen command-line tool.
//
// Exit status: 0 success, 1 usage, 2 I/O or format, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqscreen/bench.hpp"
#include "seqscreen/dictionary.hpp"
#include "seqscreen/error.hpp"
#include "seqscreen/formats.hpp"
#include "seqscreen/json_io.hpp"
#include "seqscreen/lasso.hpp"
#include "seqscreen/sequence.hpp"

using namespace seqscreen;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

struct InputOptions {
    std::string dict;
    std::string x;
    std::string format = "dmat";
    bool no_normalize = false;
    std::size_t chunk_size = 0; // 0: load in memory
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool chunked) {
    cmd->add_option("--dict", in.dict, "dictionary file (DMAT, or CSV with --format csv)")->required();
    cmd->add_option("--x", in.x, "target vector file (DVEC, or CSV with --format csv)")->required();
    cmd->add_option("--format", in.format, "input format")->check(CLI::IsMember({"dmat", "csv"}));
    cmd->add_flag("--no-normalize", in.no_normalize, "keep dictionary columns as stored");
    if (chunked) {
        cmd->add_option("--chunk-size", in.chunk_size, "screen from disk in blocks of this many columns")
            ->check(CLI::PositiveNumber);
    }
}

SyntheticInstance load_input(const InputOptions& in, bool allow_file_backed) {
    InstanceSpec spec;
    spec.name = in.dict;
    spec.dict_path = in.dict;
    spec.x_path = in.x;
    spec.csv = in.format == "csv";
    const bool out_of_core = allow_file_backed && in.chunk_size > 0 && !spec.csv;
    auto inst = load_instance(spec, !in.no_normalize, out_of_core);
    if (inst.x.size() != inst.dictionary.rows()) {
        throw IoError("target length " + std::to_string(inst.x.size()) + " does not match dictionary rows " +
                      std::to_string(inst.dictionary.rows()));
    }
    return inst;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

json support_of(std::span<const double> w) {
    json s = json::array();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 0.0) s.push_back(i + 1);
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential safe screening for the lasso"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "seqscreen 0.1.0");

    // gen
    std::size_t gen_d = 0, gen_p = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_target = "in-range", gen_out_dict, gen_out_x;
    auto* gen = app.add_subcommand("gen", "write a synthetic instance");
    gen->add_option("--d", gen_d, "rows")->required()->check(CLI::PositiveNumber);
    gen->add_option("--p", gen_p, "columns")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "generator seed")->required();
    gen->add_option("--target", gen_target, "target mode")->check(CLI::IsMember({"random", "in-range"}));
    gen->add_option("--out-dict", gen_out_dict, "output DMAT path")->required();
    gen->add_option("--out-x", gen_out_x, "output DVEC path")->required();

    // lambda-max
    InputOptions lm_in;
    auto* lm = app.add_subcommand("lambda-max", "print lambda_max and its feature (1-based)");
    add_input_options(lm, lm_in, true);

    // solve
    InputOptions solve_in;
    double solve_ratio = 0.0;
    double solve_gap_tol = 1e-8;
    std::size_t solve_max_iters = 100000;
    std::string solve_algorithm = "cd", solve_out_w;
    auto* solve = app.add_subcommand("solve", "unscreened solve at lambda = ratio * lambda_max");
    add_input_options(solve, solve_in, false);
    solve->add_option("--lambda-ratio", solve_ratio, "lambda / lambda_max")->required()->check(CLI::PositiveNumber);
    solve->add_option("--gap-tol", solve_gap_tol, "relative duality gap tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--max-iters", solve_max_iters, "iteration cap")->check(CLI::PositiveNumber);
    solve->add_option("--algorithm", solve_algorithm, "solver")->check(CLI::IsMember({"cd", "pg"}));
    solve->add_option("--out-w", solve_out_w, "write the weights as DVEC");

    // run
    InputOptions run_in;
    double run_ratio = 0.0, run_R = 0.4, run_gap_tol = 1e-8, run_l1 = 0.95;
    std::size_t run_N = 0, run_max_iters = 100000;
    std::string run_strategy = "dass", run_rule = "dome", run_trace, run_algorithm = "cd";
    std::optional<double> run_nsr, run_threshold;
    std::uint64_t run_seed = 0;
    std::size_t run_cap = 0;
    auto* run = app.add_subcommand("run", "sequential screening down to lambda_t; writes a trace");
    add_input_options(run, run_in, true);
    run->add_option("--lambda-ratio", run_ratio, "lambda_t / lambda_max")->required()->check(CLI::PositiveNumber);
    run->add_option("--strategy", run_strategy, "lambda schedule")
        ->check(CLI::IsMember({"dass", "geometric", "dpp-feedback"}));
    run->add_option("--R", run_R, "diameter budget (dass, dpp-feedback)")->check(CLI::PositiveNumber);
    run->add_option("--N", run_N, "grid length (geometric)");
    run->add_option("--rule", run_rule, "screening rule (geometric)")->check(CLI::IsMember({"dome", "dpp", "strong"}));
    run->add_option("--lambda1-factor", run_l1, "lambda_1 / lambda_max");
    run->add_option("--noise-nsr", run_nsr, "inject noise with this noise-to-signal power ratio")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--noise-threshold", run_threshold, "hard threshold after noise (default 1e-3 max|w|)")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--seed", run_seed, "noise seed");
    run->add_option("--gap-tol", run_gap_tol, "relative duality gap tolerance")->check(CLI::PositiveNumber);
    run->add_option("--max-iters", run_max_iters, "iteration cap per solve")->check(CLI::PositiveNumber);
    run->add_option("--algorithm", run_algorithm, "solver")->check(CLI::IsMember({"cd", "pg"}));
    run->add_option("--memory-cap", run_cap, "max bytes of kept columns (0: unlimited)");
    run->add_option("--trace", run_trace, "trace JSON output path")->required();

    // bench
    std::string bench_config, bench_out, bench_csv;
    auto* bench = app.add_subcommand("bench", "run a benchmark described by a JSON config");
    bench->add_option("--config", bench_config, "config JSON")->required();
    bench->add_option("--out", bench_out, "report JSON output")->required();
    bench->add_option("--csv", bench_csv, "report CSV output");

    // report
    std::string report_in, report_out;
    auto* report = app.add_subcommand("report", "write plot-ready CSV series from a report");
    report->add_option("--in", report_in, "report JSON")->required();
    report->add_option("--out", report_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            auto inst = gen_synthetic(gen_d, gen_p, gen_seed,
                                      gen_target == "random" ? TargetMode::random : TargetMode::in_range);
            write_dmat(gen_out_dict, gen_d, gen_p, inst.dictionary.data());
            write_dvec(gen_out_x, inst.x);
            return 0;
        }

        if (*lm) {
            auto inst = load_input(lm_in, true);
            const auto r = lambda_max(inst.dictionary, inst.x, lm_in.chunk_size ? lm_in.chunk_size : 256);
            print_json({{"lambda_max", r.lambda_max}, {"index", r.argmax_index + 1}, {"sign", r.sign}});
            return 0;
        }

        if (*solve) {
            auto inst = load_input(solve_in, false);
            const auto lmr = lambda_max(inst.dictionary, inst.x);
            SolverConfig cfg;
            cfg.gap_tol = solve_gap_tol;
            cfg.max_iters = solve_max_iters;
            cfg.algorithm = solver_algorithm_from_string(solve_algorithm);
            const double lambda = solve_ratio * lmr.lambda_max;
            const auto sol = solve_lasso(LassoProblem{inst.dictionary, inst.x, lambda}, std::nullopt, cfg);
            const double half_xx = 0.5 * std::inner_product(inst.x.begin(), inst.x.end(), inst.x.begin(), 0.0);
            const auto support = support_of(sol.w);
            print_json({{"lambda", lambda},
                        {"lambda_max", lmr.lambda_max},
                        {"lambda_ratio", solve_ratio},
                        {"algorithm", to_string(cfg.algorithm)},
                        {"nnz", support.size()},
                        {"support", support},
                        {"primal_objective", sol.primal_objective},
                        {"dual_objective", sol.dual_objective},
                        {"gap", sol.gap},
                        {"relative_gap", sol.gap / half_xx},
                        {"iterations", sol.iterations},
                        {"converged", sol.converged},
                        {"solve_seconds", sol.solve_seconds}});
            if (!solve_out_w.empty()) write_dvec(solve_out_w, sol.w);
            if (!sol.converged) {
                std::cerr << "seqscreen: solver did not converge within " << cfg.max_iters << " iterations\n";
                return kExitNumerical;
            }
            return 0;
        }

        if (*run) {
            auto inst = load_input(run_in, true);
            SequenceStrategy strategy;
            const auto kind = strategy_kind_from_string(run_strategy);
            switch (kind) {
            case StrategyKind::dass: strategy = SequenceStrategy::dass(run_R); break;
            case StrategyKind::dpp_feedback: strategy = SequenceStrategy::dpp_feedback(run_R); break;
            case StrategyKind::geometric:
                strategy = SequenceStrategy::geometric(run_N, screening_rule_from_string(run_rule));
                break;
            }
            strategy.lambda_1_factor = run_l1;
            SolverConfig cfg;
            cfg.gap_tol = run_gap_tol;
            cfg.max_iters = run_max_iters;
            cfg.algorithm = solver_algorithm_from_string(run_algorithm);
            std::optional<NoiseConfig> noise;
            if (run_nsr || run_threshold) {
                noise = NoiseConfig{run_nsr.value_or(0.0), run_threshold, run_seed};
            }
            RunOptions options;
            if (run_in.chunk_size) options.chunk_size = run_in.chunk_size;
            options.memory_cap_bytes = run_cap;
            const double lmax = lambda_max(inst.dictionary, inst.x, options.chunk_size).lambda_max;
            const auto trace = run_sequence(inst.dictionary, inst.x, run_ratio * lmax, strategy, cfg, noise, options);
            const auto doc = trace_to_json(trace);
            write_text_file(run_trace, doc.dump(2) + "\n");
            print_json({{"strategy", trace.strategy.label()},
                        {"N", trace.N},
                        {"lambda_t", trace.lambda_t},
                        {"final_kept", trace.final_kept()},
                        {"rejection_percentage", rejection_percentage(trace.final_kept(), trace.p)},
                        {"false_rejections", trace.total_false_rejections()},
                        {"all_converged", trace.all_converged()},
                        {"total_seconds", trace.total_seconds}});
            if (!trace.all_converged()) {
                std::cerr << "seqscreen: at least one step did not converge\n";
                return kExitNumerical;
            }
            return 0;
        }

        if (*bench) {
            const std::filesystem::path cfg_path(bench_config);
            const auto cfg = bench_config_from_json(read_json_file(cfg_path), cfg_path.parent_path());
            const auto rep = run_benchmark(cfg);
            write_text_file(bench_out, report_to_json(rep).dump(2) + "\n");
            if (!bench_csv.empty()) write_text_file(bench_csv, report_to_csv(rep));
            std::size_t completed = 0;
            for (const auto& r : rep.rows) completed += r.completed ? 1 : 0;
            std::cerr << "seqscreen: " << rep.rows.size() << " rows, " << completed << " completed\n";
            return 0;
        }

        if (*report) {
            const auto rep = report_from_json(read_json_file(report_in));
            for (const auto& p : write_plot_series(rep, report_out)) std::cout << p.string() << '\n';
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "seqscreen: " << e.what() << '\n';
        return kExitIo;
    } catch (const MemoryCapExceeded& e) {
        std::cerr << "seqscreen: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "seqscreen: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InvalidArgument& e) {
        std::cerr << "seqscreen: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "seqscreen: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}
