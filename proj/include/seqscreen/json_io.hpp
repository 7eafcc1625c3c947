// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

// JSON and CSV forms of traces, benchmark configs and reports.
// Feature indices in JSON are 1-based.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqscreen/bench.hpp"
#include "seqscreen/sequence.hpp"

namespace seqscreen {

inline constexpr int kTraceVersion = 1;

nlohmann::json trace_to_json(const SequenceTrace& trace);

/// Strict structural check of a trace document: required keys, types, no
/// unknown keys, and the trace invariants (strictly decreasing lambdas ending
/// at lambda_t, one step per lambda). Returns the list of problems found.
std::vector<std::string> validate_trace_json(const nlohmann::json& doc);

/// Relative instance paths resolve against `base_dir`.
BenchConfig bench_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

nlohmann::json report_to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::json& doc);
/// One line per row, header first.
std::string report_to_csv(const BenchReport& report);

/// Writes rejection_vs_ratio.csv, speedup_vs_ratio.csv (aggregates, one
/// column pair per strategy) and scatter.csv (per-row points) into `dir`.
std::vector<std::filesystem::path> write_plot_series(const BenchReport& report, const std::filesystem::path& dir);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace seqscreen
