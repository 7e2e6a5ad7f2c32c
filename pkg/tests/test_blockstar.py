import numpy as np
import pytest
from conftest import NEG_INF, assert_close, rand_mat

from tropsched.blockstar import SkewBlock, assemble, skew_star, skew_trace
from tropsched.errors import DimensionMismatch, StarDiverges
from tropsched.linalg import (
    TropMatrix,
    kleene_star,
    mat_pow,
    scalar_mul,
    spectral_radius_via_traces,
    trace_function,
)
from tropsched.semiring import ZERO, t_inv


def test_assemble_examples():
    sb = SkewBlock(TropMatrix([[-2]]), TropMatrix([[1]]))
    assert assemble(sb) == TropMatrix([[None, -2], [1, None]])
    sb = SkewBlock(TropMatrix.zeros(1, 1), TropMatrix.zeros(1, 1))
    assert assemble(sb) == TropMatrix.zeros(2, 2)
    sb = SkewBlock(TropMatrix([[5], [6]]), TropMatrix([[7, 8]]))
    assert assemble(sb) == TropMatrix(
        [[None, None, 5], [None, None, 6], [7, 8, None]]
    )


def test_block_shape_validation():
    with pytest.raises(DimensionMismatch):
        SkewBlock(TropMatrix([[1, 2]]), TropMatrix([[3, 4]]))


def test_skew_trace_examples():
    assert_close(skew_trace(SkewBlock(TropMatrix([[-2]]), TropMatrix([[1]]))), -1)
    assert skew_trace(SkewBlock(TropMatrix([[5]]), TropMatrix.zeros(1, 1))) == ZERO
    sb = SkewBlock(TropMatrix([[2], [3]]), TropMatrix([[1, -1]]))
    # min block order 1: single term tr(CB) = max(1+2, -1+3) = 3
    assert_close(skew_trace(sb), 3)


def test_skew_star_examples():
    assert skew_star(SkewBlock(TropMatrix([[-2]]), TropMatrix([[1]]))) == TropMatrix(
        [[0, -2], [1, 0]]
    )
    sb = SkewBlock(TropMatrix.zeros(2, 1), TropMatrix.zeros(1, 2))
    assert skew_star(sb) == TropMatrix.identity(3)
    with pytest.raises(StarDiverges) as exc_info:
        skew_star(SkewBlock(TropMatrix([[-2]]), TropMatrix([[3]])))
    assert_close(exc_info.value.trace_value, 1)


def test_boundary_convergence():
    # tr(CB) = 0 sits exactly on the unit: the star still converges.
    star = skew_star(SkewBlock(TropMatrix([[-2]]), TropMatrix([[2]])))
    assert star == TropMatrix([[0, -2], [2, 0]])


def _scaled_skew(rng, p, q):
    b = rand_mat(rng, p, q)
    c = rand_mat(rng, q, p)
    full = assemble(SkewBlock(b, c))
    rho = spectral_radius_via_traces(full)
    if not rho.is_zero and rho.value > 0:
        shift = t_inv(rho)
        b, c = scalar_mul(shift, b), scalar_mul(shift, c)
    return SkewBlock(b, c)


def test_identities_against_full_matrix(rng):
    for p in range(1, 5):
        for q in range(1, 5):
            for _ in range(8):
                sb = _scaled_skew(rng, p, q)
                full = assemble(sb)
                tr_full = trace_function(full)
                tr_skew = skew_trace(sb)
                assert (tr_full.is_zero and tr_skew.is_zero) or tr_full.isclose(tr_skew)
                assert skew_star(sb).allclose(kleene_star(full))


def test_even_odd_power_structure(rng):
    for _ in range(10):
        p, q = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        sb = SkewBlock(rand_mat(rng, p, q), rand_mat(rng, q, p))
        full = assemble(sb)
        for k in (2, 4):
            w = mat_pow(full, k).raw
            assert (w[:p, p:] == NEG_INF).all() and (w[p:, :p] == NEG_INF).all()
        for k in (1, 3):
            w = mat_pow(full, k).raw
            assert (w[:p, :p] == NEG_INF).all() and (w[p:, p:] == NEG_INF).all()
