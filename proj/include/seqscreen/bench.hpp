// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

// Rejection and speedup metrics, and a batch runner comparing strategies.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqscreen/dictionary.hpp"
#include "seqscreen/lasso.hpp"
#include "seqscreen/regions.hpp"
#include "seqscreen/sequence.hpp"

namespace seqscreen {

/// (p - kept_N) / p, taken from the last mask.
double rejection_percentage(std::span<const KeepMask> masks, std::size_t p);
double rejection_percentage(std::size_t final_kept, std::size_t p);

/// baseline / sequence.
double speedup(double baseline_seconds, double sequence_seconds);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0; // sample stdev / sqrt(n); 0 for n < 2
    std::size_t n = 0;
};
MeanSe mean_and_standard_error(std::span<const double> values);
double median(std::vector<double> values);

struct GeneratorSpec {
    std::size_t d = 0;
    std::size_t p = 0;
    std::uint64_t seed = 0;
    TargetMode mode = TargetMode::in_range;
};

struct InstanceSpec {
    std::string name;
    std::optional<GeneratorSpec> generator;
    std::filesystem::path dict_path; // DMAT (or CSV with csv = true)
    std::filesystem::path x_path;
    bool csv = false;
};

struct StrategySpec {
    std::string name;
    SequenceStrategy strategy;
    std::string match_n; // geometric only: take N from this strategy's realized N on the same cell
};

struct BenchConfig {
    std::vector<InstanceSpec> instances;
    std::vector<double> lambda_ratios;
    std::vector<StrategySpec> strategies;
    std::size_t repetitions = 3;
    std::size_t memory_cap_bytes = std::size_t{512} << 20;
    std::size_t chunk_size = 256;
    bool out_of_core = false; // screen file-backed instances from disk
    bool normalize = true;
    bool parallel = false;    // run cells concurrently; speedup columns suppressed
    SolverConfig solver;
    std::optional<NoiseConfig> noise;

    void validate() const;
};

struct BenchRow {
    std::string instance;
    std::string strategy;
    std::string label;
    double lambda_ratio = 0.0;
    std::size_t N = 0;
    std::size_t final_kept = 0;
    std::size_t p = 0;
    double rejection_percentage = 0.0;
    std::optional<double> speedup;
    std::optional<double> baseline_seconds;
    double sequence_seconds = 0.0;
    std::size_t false_rejections = 0;
    bool completed = true;
    std::string failure; // empty when completed
};

struct BenchAggregate {
    std::string strategy;
    double lambda_ratio = 0.0;
    std::size_t rows = 0;
    std::size_t completed = 0;
    double completion_rate = 0.0;
    MeanSe rejection;
    MeanSe speedup;
    MeanSe N;
    MeanSe false_rejections;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchAggregate> aggregates;
    bool speedup_suppressed = false;
};

/// Loads an instance as (dictionary, x). File-backed when out_of_core is set
/// and the instance is a DMAT file.
SyntheticInstance load_instance(const InstanceSpec& spec, bool normalize, bool out_of_core);

BenchReport run_benchmark(const BenchConfig& config);
std::vector<BenchAggregate> aggregate_rows(std::span<const BenchRow> rows);

} // namespace seqscreen
