#!/usr/bin/env python3
"""Solve the 1x1 reference instance end to end and cross-check the oracle.

Walks through every pipeline phase with printed intermediates; useful as a
worked tour of the solver's moving parts.
"""

import tropsched as ts
from tropsched.instances import worked_example
from tropsched.io_cli import dumps_report, report_to_dict
from tropsched.linalg import TropMatrix
from tropsched.oracle import grid_search_stage1, grid_search_stage2


def _vec(v: TropMatrix) -> list:
    return [row[0] for row in v.to_rows()]


def main():
    inst = worked_example()
    print("instance: single task, single worker")
    print(f"  second project lags A={inst.A.to_rows()} B={inst.B.to_rows()}")
    print(f"  first project lags  C={inst.C.to_rows()} D={inst.D.to_rows()}")
    print(f"  start box [{_vec(inst.g)}, {_vec(inst.h)}], "
          f"due box [{_vec(inst.q)}, {_vec(inst.r)}]")

    feasible, value = ts.check_stage1_feasibility(inst)
    print(f"\nstage 1 condition value: {value.raw} (feasible: {feasible})")
    terms = ts.mu_term_families(inst)
    for name, term in terms.items():
        print(f"  {name}: {term.raw}")
    mu = ts.compute_mu(inst)
    print(f"mu = {mu.raw}")

    dm = ts.derive_matrices(inst, mu)
    print(f"\nderived: D1~={dm.D1conj.to_rows()} C1={dm.C1.to_rows()} "
          f"P={dm.P.to_rows()} Q={dm.Q.to_rows()} R={dm.R.to_rows()} S={dm.S.to_rows()}")
    feasible, value = ts.check_stage2_feasibility(dm, inst)
    print(f"stage 2 condition value: {value.raw} (feasible: {feasible})")
    for name, term in ts.eta_term_families(dm, inst).items():
        print(f"  {name}: {term.raw}")
    eta = ts.compute_eta(dm, inst)
    print(f"eta = {eta.raw}")

    result = ts.solution_set(dm, eta, inst)
    print(f"\nu box: {_vec(result.u_lower)} .. {_vec(result.u_upper)}")
    print(f"v box: {_vec(result.v_lower)} .. {_vec(result.v_upper)}")
    for u, v in [(0, 5), (6, 8)]:
        sol = ts.materialize(result, TropMatrix.column([u]), TropMatrix.column([v]), inst)
        print(f"  (u={u}, v={v}) -> start {_vec(sol.x)}, due {_vec(sol.y)}, "
              f"lateness {sol.objective.raw}")

    oracle1 = grid_search_stage1(inst)
    oracle2 = grid_search_stage2(inst, mu)
    print(f"\ngrid oracle: stage1 {oracle1.best.raw}, stage2 {oracle2.best.raw}")

    print("\nfull report:")
    print(dumps_report(report_to_dict(ts.solve(inst))))


if __name__ == "__main__":
    main()
