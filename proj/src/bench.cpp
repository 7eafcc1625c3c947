// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "seqscreen/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "seqscreen/error.hpp"
#include "seqscreen/formats.hpp"
#include "seqscreen/parallel.hpp"

namespace seqscreen {

double rejection_percentage(std::span<const KeepMask> masks, std::size_t p) {
    if (masks.empty()) throw InvalidArgument("rejection_percentage: no masks");
    if (masks.back().keep.size() != p) throw InvalidArgument("rejection_percentage: mask length differs from p");
    return rejection_percentage(masks.back().kept_count, p);
}

double rejection_percentage(std::size_t final_kept, std::size_t p) {
    if (p == 0) throw InvalidArgument("rejection_percentage: p must be >= 1");
    if (final_kept > p) throw InvalidArgument("rejection_percentage: kept count exceeds p");
    return static_cast<double>(p - final_kept) / static_cast<double>(p);
}

double speedup(double baseline_seconds, double sequence_seconds) {
    if (!(baseline_seconds > 0.0) || !(sequence_seconds > 0.0)) {
        throw InvalidArgument("speedup: durations must be positive");
    }
    return baseline_seconds / sequence_seconds;
}

MeanSe mean_and_standard_error(std::span<const double> values) {
    MeanSe out;
    out.n = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(out.n);
    if (out.n < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double stdev = std::sqrt(ss / static_cast<double>(out.n - 1));
    out.se = stdev / std::sqrt(static_cast<double>(out.n));
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

void BenchConfig::validate() const {
    if (instances.empty()) throw InvalidArgument("bench config: no instances");
    if (lambda_ratios.empty()) throw InvalidArgument("bench config: no lambda_ratios");
    if (strategies.empty()) throw InvalidArgument("bench config: no strategies");
    if (repetitions == 0) throw InvalidArgument("bench config: repetitions must be >= 1");
    if (chunk_size == 0) throw InvalidArgument("bench config: chunk_size must be >= 1");
    for (double r : lambda_ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("bench config: lambda ratios must be positive");
    }
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const auto& s = strategies[i];
        if (!s.match_n.empty()) {
            if (s.strategy.kind != StrategyKind::geometric) {
                throw InvalidArgument("bench config: match_n is only valid for geometric strategies");
            }
            const auto it = std::find_if(strategies.begin(), strategies.begin() + static_cast<std::ptrdiff_t>(i),
                                         [&](const StrategySpec& o) { return o.name == s.match_n; });
            if (it == strategies.begin() + static_cast<std::ptrdiff_t>(i)) {
                throw InvalidArgument("bench config: match_n '" + s.match_n + "' must name an earlier strategy");
            }
        } else {
            s.strategy.validate();
        }
    }
    solver.validate();
    if (noise) noise->validate();
}

SyntheticInstance load_instance(const InstanceSpec& spec, bool normalize, bool out_of_core) {
    if (spec.generator) {
        const auto& g = *spec.generator;
        return gen_synthetic(g.d, g.p, g.seed, g.mode);
    }
    if (spec.csv) {
        auto m = read_csv_matrix(spec.dict_path);
        Dictionary dict(m.rows, m.cols, std::move(m.values));
        auto x = read_csv_vector(spec.x_path);
        return {normalize ? dict.normalize_columns() : dict, std::move(x)};
    }
    Dictionary dict = Dictionary::open(spec.dict_path);
    if (!out_of_core) dict = dict.load();
    auto x = read_dvec(spec.x_path);
    if (x.size() != dict.rows()) {
        throw IoError("instance '" + spec.name + "': target length " + std::to_string(x.size()) +
                      " does not match dictionary rows " + std::to_string(dict.rows()));
    }
    return {normalize ? dict.normalize_columns() : dict, std::move(x)};
}

namespace {

using Clock = std::chrono::steady_clock;

struct Cell {
    std::size_t instance;
    std::size_t ratio;
};

std::vector<BenchRow> run_cell(const BenchConfig& config, const SyntheticInstance& inst, const std::string& name,
                               double ratio) {
    const auto& dict = inst.dictionary;
    const double lmax = lambda_max(dict, inst.x, config.chunk_size).lambda_max;
    const double lambda_t = ratio * lmax;
    const bool timed = !config.parallel;

    // Unscreened baseline at lambda_t; needs the whole dictionary in memory.
    std::optional<double> baseline;
    const std::size_t full_bytes = dict.rows() * dict.cols() * sizeof(double);
    if (timed && (config.memory_cap_bytes == 0 || full_bytes <= config.memory_cap_bytes)) {
        const Dictionary full = dict.file_backed() ? dict.load() : dict;
        std::vector<double> times;
        for (std::size_t r = 0; r < config.repetitions; ++r) {
            const auto t0 = Clock::now();
            solve_lasso(LassoProblem{full, inst.x, lambda_t}, std::nullopt, config.solver);
            times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
        }
        baseline = median(times);
    }

    RunOptions options;
    options.chunk_size = config.chunk_size;
    options.memory_cap_bytes = config.memory_cap_bytes;

    std::vector<BenchRow> rows;
    std::map<std::string, std::size_t> realized_n;
    for (const auto& spec : config.strategies) {
        BenchRow row;
        row.instance = name;
        row.strategy = spec.name;
        row.lambda_ratio = ratio;
        row.p = dict.cols();
        SequenceStrategy strategy = spec.strategy;
        if (!spec.match_n.empty()) {
            const auto it = realized_n.find(spec.match_n);
            strategy.N = it == realized_n.end() ? 0 : std::max<std::size_t>(it->second, 2);
        }
        row.label = strategy.label();
        try {
            if (strategy.N == 0 && strategy.kind == StrategyKind::geometric) {
                throw NumericalError("matched strategy '" + spec.match_n + "' did not complete");
            }
            std::vector<double> times;
            SequenceTrace trace;
            for (std::size_t r = 0; r < (timed ? config.repetitions : 1); ++r) {
                trace = run_sequence(dict, inst.x, lambda_t, strategy, config.solver, config.noise, options);
                times.push_back(trace.total_seconds);
            }
            row.N = trace.N;
            row.final_kept = trace.final_kept();
            row.rejection_percentage = rejection_percentage(row.final_kept, row.p);
            row.sequence_seconds = median(times);
            row.false_rejections = trace.total_false_rejections();
            row.baseline_seconds = baseline;
            if (baseline && *baseline > 0.0 && row.sequence_seconds > 0.0) {
                row.speedup = speedup(*baseline, row.sequence_seconds);
            }
            realized_n[spec.name] = trace.N;
        } catch (const MemoryCapExceeded& e) {
            row.completed = false;
            row.failure = e.what();
        } catch (const NumericalError& e) {
            row.completed = false;
            row.failure = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::vector<BenchAggregate> aggregate_rows(std::span<const BenchRow> rows) {
    std::vector<BenchAggregate> out;
    std::vector<std::pair<std::string, double>> keys;
    for (const auto& r : rows) {
        const std::pair<std::string, double> key{r.strategy, r.lambda_ratio};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [strategy, ratio] : keys) {
        BenchAggregate agg;
        agg.strategy = strategy;
        agg.lambda_ratio = ratio;
        std::vector<double> rej, sp, n, fr;
        for (const auto& r : rows) {
            if (r.strategy != strategy || r.lambda_ratio != ratio) continue;
            ++agg.rows;
            if (!r.completed) continue;
            ++agg.completed;
            rej.push_back(r.rejection_percentage);
            if (r.speedup) sp.push_back(*r.speedup);
            n.push_back(static_cast<double>(r.N));
            fr.push_back(static_cast<double>(r.false_rejections));
        }
        agg.completion_rate = agg.rows ? static_cast<double>(agg.completed) / static_cast<double>(agg.rows) : 0.0;
        agg.rejection = mean_and_standard_error(rej);
        agg.speedup = mean_and_standard_error(sp);
        agg.N = mean_and_standard_error(n);
        agg.false_rejections = mean_and_standard_error(fr);
        out.push_back(agg);
    }
    return out;
}

BenchReport run_benchmark(const BenchConfig& config) {
    config.validate();
    std::vector<SyntheticInstance> instances;
    instances.reserve(config.instances.size());
    for (const auto& spec : config.instances) {
        instances.push_back(load_instance(spec, config.normalize, config.out_of_core));
    }

    std::vector<Cell> cells;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (std::size_t r = 0; r < config.lambda_ratios.size(); ++r) cells.push_back({i, r});
    }
    std::vector<std::vector<BenchRow>> results(cells.size());
    auto work = [&](std::size_t c) {
        const auto& cell = cells[c];
        results[c] = run_cell(config, instances[cell.instance], config.instances[cell.instance].name,
                              config.lambda_ratios[cell.ratio]);
    };
    if (config.parallel) {
        parallel_for(cells.size(), work);
    } else {
        for (std::size_t c = 0; c < cells.size(); ++c) work(c);
    }

    BenchReport report;
    report.speedup_suppressed = config.parallel;
    for (auto& rs : results) {
        for (auto& r : rs) report.rows.push_back(std::move(r));
    }
    report.aggregates = aggregate_rows(report.rows);
    return report;
}

} // namespace seqscreen
