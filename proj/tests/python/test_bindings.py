# Copyright 2026 seqscreen contributors
#
# Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
# https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
# copied, modified, or distributed except according to those terms.

import json
import os
from pathlib import Path

import numpy as np
import pytest

import seqscreen as ss


def test_gen_and_lambda_max():
    D, x = ss.gen_synthetic(20, 100, 11)
    assert D.shape == (20, 100) and x.shape == (20,)
    np.testing.assert_allclose(np.linalg.norm(D, axis=0), 1.0, rtol=1e-12)
    r = ss.lambda_max(D, x)
    corr = np.abs(D.T @ x)
    assert r["lambda_max"] == pytest.approx(corr.max(), rel=1e-13)
    assert r["index"] == int(np.argmax(corr))


def test_solve_matches_kkt():
    D, x = ss.gen_synthetic(20, 60, 3)
    lam = 0.3 * ss.lambda_max(D, x)["lambda_max"]
    sol = ss.solve_lasso(D, x, lam, gap_tol=1e-12)
    w = sol["w"]
    g = D.T @ (x - D @ w)
    active = w != 0
    np.testing.assert_allclose(g[active], lam * np.sign(w[active]), atol=1e-5)
    assert np.all(np.abs(g[~active]) <= lam * (1 + 1e-6))


def test_region_max_closed_form():
    # Hemisphere of the unit disc: the max of a^T theta along (1, 1)/sqrt(2) is 1/sqrt(2).
    a = np.array([1.0, 1.0]) / np.sqrt(2.0)
    mu = ss.region_max(np.zeros(2), 1.0, a, normal=np.array([1.0, 0.0]), offset=0.0)
    assert mu == pytest.approx(np.sqrt(0.5), rel=1e-12)
    assert ss.region_diameter(np.zeros(2), 1.0, normal=np.array([1.0, 0.0]), offset=-0.6) == pytest.approx(1.6)


def test_run_sequence_is_exact_and_valid():
    D, x = ss.gen_synthetic(20, 100, 11)
    trace = ss.run_sequence(D, x, 0.1, strategy="dass", R=0.4, gap_tol=1e-12)
    assert ss.validate_trace(trace) == []
    lt = trace["lambda_t"]
    ref = ss.solve_lasso(D, x, lt, gap_tol=1e-12)["w"]
    np.testing.assert_allclose(np.array(trace["w"]), ref, atol=1e-6)
    schema_path = os.environ.get("SEQSCREEN_SCHEMA")
    if schema_path:
        import jsonschema

        jsonschema.validate(trace, json.loads(Path(schema_path).read_text()))


def test_sequence_helpers():
    assert ss.next_lambda_dass(1.0, np.array([0.0, 2.0]), np.array([1.0, 0.0]), 0.4) == pytest.approx(1 / 1.1)
    grid = ss.geometric_grid(1.0, 0.1, 5)
    assert grid[0] == 1.0 and grid[-1] == 0.1 and len(grid) == 5
    assert ss.dpp_feedback_n_bound(0.5, 1.0, 0.4) == pytest.approx(6.0)


def test_errors_map_to_python_exceptions():
    D, x = ss.gen_synthetic(5, 8, 0)
    with pytest.raises(ValueError):
        ss.solve_lasso(D, x[:3], 0.1)
    with pytest.raises(ValueError):
        ss.run_sequence(D, x, 0.1, strategy="nope")
