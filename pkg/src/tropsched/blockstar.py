"""Trace function and Kleene star of skew block diagonal matrices.

A square matrix of order p + q with zero diagonal blocks and off-diagonal
blocks B (upper right, p x q) and C (lower left, q x p) has all its cycles
alternating between the two blocks, so its even powers are block diagonal
in (BC)^k and (CB)^k and its odd powers have zero diagonal blocks.  Trace
function and star therefore reduce to powers of the product of the smaller
order, cutting an (p+q)-order computation down to min(p, q)-order ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, StarDiverges
from .linalg import TropMatrix, mat_add, mat_mul, trace
from .semiring import TropValue, t_add

_NEG_INF = float("-inf")

_STAR_TOL = 1e-9


@dataclass(frozen=True)
class SkewBlock:
    """Off-diagonal blocks of a skew block diagonal matrix.

    B sits in the upper right (p x q), C in the lower left (q x p); the
    represented square matrix has order p + q with all-zero diagonal blocks.
    """

    B: TropMatrix
    C: TropMatrix

    def __post_init__(self):
        if self.B.rows != self.C.cols or self.B.cols != self.C.rows:
            raise DimensionMismatch(
                f"blocks must be p x q and q x p, got {self.B.shape} and {self.C.shape}"
            )

    @property
    def order(self) -> int:
        return self.B.rows + self.B.cols


def assemble(sb: SkewBlock) -> TropMatrix:
    """Materialise the full (p+q)-order matrix (mainly for cross-checks)."""
    p, q = sb.B.shape
    data = np.full((p + q, p + q), _NEG_INF)
    data[:p, p:] = sb.B.raw
    data[p:, :p] = sb.C.raw
    return TropMatrix._wrap(data)


def skew_trace(sb: SkewBlock) -> TropValue:
    """Trace function of the assembled matrix, via the smaller block product.

    Only even powers have finite diagonal entries, and tr(BC)^k = tr(CB)^k,
    so the value is the join of tr(BC)^k for k = 1..min(p, q).  The sum is
    computed unconditionally: callers that need the convergence condition
    compare the result against the unit themselves, which keeps the
    violating value available for diagnostics.
    """
    p, q = sb.B.shape
    core = mat_mul(sb.B, sb.C) if p <= q else mat_mul(sb.C, sb.B)
    best = trace(core)
    power = core
    for _ in range(min(p, q) - 1):
        power = mat_mul(power, core)
        best = t_add(best, trace(power))
    return best


def skew_star(sb: SkewBlock) -> TropMatrix:
    """Kleene star of the assembled matrix, computed blockwise.

    The star blocks are the joins over k = 0..min(p, q) of (BC)^k,
    (BC)^k B, C (BC)^k and the identity join C (BC)^(k-1) B, all driven by
    powers of the smaller of BC and CB.
    """
    p, q = sb.B.shape
    tr_value = skew_trace(sb)
    if tr_value.raw > _STAR_TOL:
        raise StarDiverges(
            f"skew star diverges: trace function value {tr_value.raw}", tr_value
        )
    k_max = min(p, q)
    if p <= q:
        core = mat_mul(sb.B, sb.C)  # p x p
        partial = TropMatrix.identity(p)  # join of core^k, k <= k_max - 1
        power = TropMatrix.identity(p)
        for _ in range(k_max - 1):
            power = mat_mul(power, core)
            partial = mat_add(partial, power)
        full = mat_add(partial, mat_mul(power, core))  # k <= k_max
        ul = full
        ur = mat_mul(full, sb.B)
        ll = mat_mul(sb.C, full)
        lr = mat_add(
            TropMatrix.identity(q), mat_mul(mat_mul(sb.C, partial), sb.B)
        )
    else:
        core = mat_mul(sb.C, sb.B)  # q x q
        partial = TropMatrix.identity(q)
        power = TropMatrix.identity(q)
        for _ in range(k_max - 1):
            power = mat_mul(power, core)
            partial = mat_add(partial, power)
        full = mat_add(partial, mat_mul(power, core))
        lr = full
        ll = mat_mul(full, sb.C)
        ur = mat_mul(sb.B, full)
        ul = mat_add(
            TropMatrix.identity(p), mat_mul(mat_mul(sb.B, partial), sb.C)
        )
    data = np.full((p + q, p + q), _NEG_INF)
    data[:p, :p] = ul.raw
    data[:p, p:] = ur.raw
    data[p:, :p] = ll.raw
    data[p:, p:] = lr.raw
    return TropMatrix._wrap(data)
