// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include <doctest.h>

#include "seqscreen/dictionary.hpp"
#include "seqscreen/json_io.hpp"
#include "seqscreen/sequence.hpp"

using namespace seqscreen;
using nlohmann::json;

namespace {

json sample_trace() {
    const auto inst = gen_synthetic(20, 100, 11, TargetMode::in_range);
    const double lt = 0.1 * lambda_max(inst.dictionary, inst.x).lambda_max;
    return trace_to_json(run_sequence(inst.dictionary, inst.x, lt, SequenceStrategy::dass(0.4), SolverConfig{}));
}

} // namespace

TEST_CASE("trace JSON validates and ends at lambda_t") {
    const auto doc = sample_trace();
    const auto errors = validate_trace_json(doc);
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());
    CHECK(doc["trace_version"] == 1);
    CHECK(doc["lambdas"].back().get<double>() == doc["lambda_t"].get<double>());
    CHECK(doc["lambda_ratio"].get<double>() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(doc["strategy"]["kind"] == "dass");
    CHECK(doc["w"].size() == 100);
}

TEST_CASE("trace validator is strict") {
    const auto good = sample_trace();

    auto extra = good;
    extra["surprise"] = true;
    CHECK_FALSE(validate_trace_json(extra).empty());

    auto missing = good;
    missing.erase("lambdas");
    CHECK_FALSE(validate_trace_json(missing).empty());

    auto version = good;
    version["trace_version"] = 2;
    CHECK_FALSE(validate_trace_json(version).empty());

    auto unordered = good;
    std::swap(unordered["lambdas"][0], unordered["lambdas"][1]);
    CHECK_FALSE(validate_trace_json(unordered).empty());

    auto unclamped = good;
    unclamped["lambda_t"] = unclamped["lambda_t"].get<double>() * 0.5;
    CHECK_FALSE(validate_trace_json(unclamped).empty());

    auto kind = good;
    kind["strategy"]["kind"] = "edpp";
    CHECK_FALSE(validate_trace_json(kind).empty());

    auto step = good;
    step["steps"][0]["kept_count"] = -3;
    CHECK_FALSE(validate_trace_json(step).empty());

    auto step_key = good;
    step_key["steps"][0]["extra"] = 0;
    CHECK_FALSE(validate_trace_json(step_key).empty());

    CHECK_FALSE(validate_trace_json(json::array()).empty());
}
