# Copyright 2026 seqscreen contributors
#
# Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
# https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
# copied, modified, or distributed except according to those terms.

"""Sequential safe screening for the lasso (Python bindings)."""

from ._seqscreen import (
    InvalidArgument,
    IoError,
    MemoryCapExceeded,
    NumericalError,
    dpp_feedback_n_bound,
    gen_synthetic,
    geometric_grid,
    lambda_max,
    n_upper_bound,
    next_lambda_dass,
    next_lambda_dpp_feedback,
    region_diameter,
    region_max,
    run_sequence,
    screen,
    solve_lasso,
    step_region,
    validate_trace,
)

__all__ = [
    "InvalidArgument",
    "IoError",
    "MemoryCapExceeded",
    "NumericalError",
    "dpp_feedback_n_bound",
    "gen_synthetic",
    "geometric_grid",
    "lambda_max",
    "n_upper_bound",
    "next_lambda_dass",
    "next_lambda_dpp_feedback",
    "region_diameter",
    "region_max",
    "run_sequence",
    "screen",
    "solve_lasso",
    "step_region",
    "validate_trace",
]
