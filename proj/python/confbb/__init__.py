"""LP based branch and bound with conflict graph and dual ray learning.

The solver learns from infeasible subproblems in two ways: conflict
constraints cut from the propagation implication graph, and proof
constraints aggregated from LP infeasibility certificates.  `solve` picks
the combination via `mode`:

    none | conflict | dualray | combined | combined-pool

>>> import confbb
>>> m = confbb.generate_instance("markshare-like", size=10, seed=1)
>>> r = confbb.solve(m, mode="combined")
>>> r.status, r.objective, r.stats["nodes"]
"""

from ._core import (
    Model,
    SolveResult,
    check_solution,
    generate_instance,
    parse_mps,
    parse_mps_file,
    shifted_geomean,
    solve,
    solve_lp,
    write_mps,
    write_mps_file,
)

__all__ = [
    "Model",
    "SolveResult",
    "check_solution",
    "generate_instance",
    "parse_mps",
    "parse_mps_file",
    "shifted_geomean",
    "solve",
    "solve_lp",
    "write_mps",
    "write_mps_file",
]
