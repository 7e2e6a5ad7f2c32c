"""Shared helpers: random tropical matrices and reference implementations."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from tropsched.linalg import TropMatrix
from tropsched.semiring import TropValue

NEG_INF = float("-inf")

_FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

FIXTURES = {
    "worked": str(_FIXTURE_DIR / "worked_1x1.json"),
    "infeasible": str(_FIXTURE_DIR / "infeasible_1x1.json"),
    "stage2_infeasible": str(_FIXTURE_DIR / "stage2_infeasible_1x1.json"),
    "team_a": str(_FIXTURE_DIR / "team_2x3_a.json"),
    "team_b": str(_FIXTURE_DIR / "team_2x3_b.json"),
}


def rand_raw(rng, rows, cols, density=0.85, lo=-5, hi=5):
    """Integer-valued float matrix with zero-element holes."""
    vals = rng.integers(lo, hi + 1, size=(rows, cols)).astype(float)
    mask = rng.random((rows, cols)) < density
    return np.where(mask, vals, NEG_INF)


def rand_mat(rng, rows, cols, **kwargs) -> TropMatrix:
    return TropMatrix(rand_raw(rng, rows, cols, **kwargs))


def reference_mat_mul(a: TropMatrix, b: TropMatrix) -> TropMatrix:
    """Triple-loop max-plus product, independent of the vectorised kernel."""
    out = np.full((a.rows, b.cols), NEG_INF)
    wa, wb = a.raw, b.raw
    for i in range(a.rows):
        for j in range(b.cols):
            best = NEG_INF
            for k in range(a.cols):
                if np.isfinite(wa[i, k]) and np.isfinite(wb[k, j]):
                    best = max(best, wa[i, k] + wb[k, j])
            out[i, j] = best
    return TropMatrix(out)


def enumerate_cycle_means(a: TropMatrix) -> float:
    """Brute-force maximum cycle mean over all simple cycles."""
    import itertools

    w = a.raw
    n = a.rows
    best = NEG_INF
    for length in range(1, n + 1):
        for nodes in itertools.permutations(range(n), length):
            if nodes[0] != min(nodes):
                continue  # one rotation per cycle is enough
            total = 0.0
            ok = True
            for u, v in zip(nodes, nodes[1:] + (nodes[0],)):
                if not np.isfinite(w[u, v]):
                    ok = False
                    break
                total += w[u, v]
            if ok:
                best = max(best, total / length)
    return best


def assert_close(value: TropValue, expected: float | None, tol: float = 1e-9):
    if expected is None:
        assert value.is_zero
    else:
        assert not value.is_zero
        assert abs(value.value - expected) <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
