import itertools

import numpy as np
import pytest
from conftest import assert_close, rand_mat, rand_raw

from tropsched.errors import NotColumnRegular, NotRegularVector
from tropsched.inequality import solve_double_inequality, solve_upper_bound
from tropsched.linalg import TropMatrix, mat_add, mat_mul
from tropsched.semiring import TropValue


def test_upper_bound_examples():
    assert solve_upper_bound(TropMatrix.identity(2), TropMatrix.column([3, 5])) == TropMatrix.column([3, 5])
    got = solve_upper_bound(TropMatrix([[1, 0], [2, 4]]), TropMatrix.column([5, 5]))
    assert got == TropMatrix.column([3, 1])
    with pytest.raises(NotRegularVector):
        solve_upper_bound(TropMatrix.identity(2), TropMatrix.column([3, None]))
    with pytest.raises(NotColumnRegular):
        solve_upper_bound(TropMatrix([[1, None], [2, None]]), TropMatrix.column([5, 5]))


def test_upper_bound_is_greatest_solution(rng):
    for _ in range(40):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        a = rand_mat(rng, m, n, density=0.8)
        if not np.isfinite(a.raw).any(axis=0).all():
            continue
        d = rand_mat(rng, m, 1, density=1.0)
        x_max = solve_upper_bound(a, d)
        assert bool((mat_mul(a, x_max).raw <= d.raw + 1e-9).all())
        for j in range(n):
            bumped = x_max.raw.copy()
            bumped[j, 0] += 1e-6
            assert not bool(
                (mat_mul(a, TropMatrix(bumped)).raw <= d.raw + 1e-12).all()
            )


def test_double_inequality_examples():
    box = solve_double_inequality(
        TropMatrix.zeros(1, 1), TropMatrix.column([1]), TropMatrix.column([5])
    )
    assert box.feasible
    assert_close(box.delta, -4)
    assert box.generator == TropMatrix.identity(1)
    assert box.lower == TropMatrix.column([1])
    assert box.upper == TropMatrix.column([5])

    box = solve_double_inequality(
        TropMatrix([[-1]]), TropMatrix.column([0]), TropMatrix.column([3])
    )
    assert box.feasible
    assert_close(box.delta, -1)
    assert box.lower == TropMatrix.column([0])
    assert box.upper == TropMatrix.column([3])

    box = solve_double_inequality(
        TropMatrix([[1]]), TropMatrix.column([0]), TropMatrix.column([3])
    )
    assert not box.feasible
    assert_close(box.delta, 1)
    assert box.upper is None
    assert box.generator is None  # diverging star is never formed

    # Convergent star but the lower bound cannot fit under d.
    box = solve_double_inequality(
        TropMatrix([[-1]]), TropMatrix.column([5]), TropMatrix.column([3])
    )
    assert not box.feasible
    assert_close(box.delta, 2)
    assert box.generator is not None and box.upper is None


def _random_system(rng):
    n = int(rng.integers(1, 4))
    a = rand_mat(rng, n, n, density=0.7, lo=-4, hi=2)
    b = rand_mat(rng, n, 1, density=0.8, lo=-3, hi=3)
    d_arr = rand_raw(rng, n, 1, density=1.0, lo=0, hi=6)
    return a, b, TropMatrix(d_arr)


def test_soundness_of_parameterization(rng):
    checked = 0
    while checked < 200:
        a, b, d = _random_system(rng)
        box = solve_double_inequality(a, b, d)
        if not box.feasible:
            continue
        checked += 1
        lo = np.where(np.isfinite(box.lower.raw), box.lower.raw, box.upper.raw - 10)
        w = lo + rng.uniform(0, 1, size=lo.shape) * np.maximum(box.upper.raw - lo, 0)
        x = mat_mul(box.generator, TropMatrix(w))
        lhs = mat_add(mat_mul(a, x), box.lower)
        assert bool((lhs.raw <= x.raw + 1e-9).all())
        assert bool((x.raw <= d.raw + 1e-9).all())


def _grid_points(lo, hi, step=0.5):
    axes = [np.arange(l, h + 1e-9, step) for l, h in zip(lo, hi)]
    return itertools.product(*axes)


def test_completeness_and_infeasibility_on_grid(rng):
    # Every feasible grid point must land inside the parameterised family,
    # and infeasible systems must have no regular grid solution at all.
    for _ in range(60):
        a, b, d = _random_system(rng)
        n = a.rows
        box = solve_double_inequality(a, b, d)
        finite = [v for v in (a.raw[np.isfinite(a.raw)].tolist() + b.raw[np.isfinite(b.raw)].tolist() + d.raw[:, 0].tolist())]
        lo = [min(finite) - 2.0] * n
        hi = [max(finite) + 2.0] * n
        for pt in _grid_points(lo, hi):
            x = TropMatrix.column(list(pt))
            ax_b = mat_add(mat_mul(a, x), b)
            feasible = bool((ax_b.raw <= x.raw + 1e-9).all()) and bool(
                (x.raw <= d.raw + 1e-9).all()
            )
            if not feasible:
                continue
            assert box.feasible, "solver reported infeasible but a grid point solves it"
            # Membership: x must sit below the box's greatest solution and
            # be recovered by the generator from its own coordinates.
            top = mat_mul(box.generator, box.upper)
            assert bool((x.raw <= top.raw + 1e-9).all())
            w = np.maximum(x.raw, box.lower.raw)
            regenerated = mat_mul(box.generator, TropMatrix(w))
            assert regenerated.allclose(x, tol=1e-9)
