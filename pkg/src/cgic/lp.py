"""Thin typed wrappers around the simplex kernel."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InfeasibleError, NumericalDegeneracyError, UnboundedError

LP_TOL = 1e-9


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    duals: np.ndarray
    objective: float
    iterations: int


def _solve(c, A, b, tol):
    c = np.ascontiguousarray(c, dtype=float)
    A = np.ascontiguousarray(A, dtype=float).reshape(len(b), len(c))
    b = np.ascontiguousarray(b, dtype=float)
    max_iter = 200 * (A.shape[0] + A.shape[1] + 10)
    status, x, y, obj, it = kernels.simplex_standard(c, A, b, tol, max_iter)
    if status == kernels.LP_INFEASIBLE:
        raise InfeasibleError("linear program is infeasible")
    if status == kernels.LP_UNBOUNDED:
        raise UnboundedError("linear program is unbounded")
    if status != kernels.LP_OK:
        raise NumericalDegeneracyError(f"simplex stopped after {it} iterations")
    return LPResult(x, y, float(obj), int(it))


def solve_standard(c, A_eq, b_eq, tol=LP_TOL):
    """``min c.x`` subject to ``A_eq x = b_eq`` and ``x >= 0``."""
    return _solve(c, A_eq, b_eq, tol)


def maximize_free(c, A_ub, b_ub, tol=LP_TOL):
    """``max c.x`` over free ``x`` subject to ``A_ub x <= b_ub``.

    Returned ``duals`` are the nonnegative row multipliers ``y`` with
    ``A_ub.T @ y = c`` and ``b_ub @ y`` equal to the optimum.
    """
    A_ub = np.asarray(A_ub, dtype=float)
    m, n = A_ub.shape
    A = np.hstack([A_ub, -A_ub, np.eye(m)])
    cost = np.concatenate([-np.asarray(c, float), np.asarray(c, float), np.zeros(m)])
    res = _solve(cost, A, b_ub, tol)
    x = res.x[:n] - res.x[n:2 * n]
    return LPResult(x, -res.duals, -res.objective, res.iterations)
