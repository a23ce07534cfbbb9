"""Move negative layer rates onto neighbouring layers of the same user.

Points of the projected region may carry negative layer rates as long as
each user's total is nonnegative. The map here shifts those negatives
between adjacent layers until every component is nonnegative, without
touching either user's total. Arithmetic is plain ``+`` and assignment,
so ``Fraction`` inputs give exact results.

Levels are ordered ``p, a1, ..., aN`` (private first, public last).
"""

from .errors import InvalidInputError, PreconditionError
from .inequality_gen import ConstraintSystem

PRECONDITION_TOL = 1e-9


def _step_names(levels):
    n = len(levels) - 1
    if n == 2:
        return ["1a", "1b"], ["2a", "2b"]
    return [f"1.{lv}" for lv in range(n, 0, -1)], [f"2.{lv}" for lv in range(n)]


def rebalance_levels(levels, trace=None):
    """Rebalance one user's ``[p, a1, ..., aN]`` list; returns a new list.

    Pass 1 walks from the public layer down and folds a negative layer into
    the one below it; pass 2 walks up from the private layer and folds a
    negative layer into the one above. Each move is appended to ``trace``
    as ``(step, levels after)`` when a list is given.
    """
    out = list(levels)
    if not out:
        raise InvalidInputError("empty rate vector")
    first, second = _step_names(out)
    for name, n in zip(first, range(len(out) - 1, 0, -1)):
        if out[n] < 0:
            out[n - 1] = out[n - 1] + out[n]
            out[n] = 0 * out[n]
            if trace is not None:
                trace.append((name, list(out)))
    for name, n in zip(second, range(len(out) - 1)):
        if out[n] < 0:
            out[n + 1] = out[n + 1] + out[n]
            out[n] = 0 * out[n]
            if trace is not None:
                trace.append((name, list(out)))
    return out


def rebalance(v, system: ConstraintSystem, rhs, tol=PRECONDITION_TOL, check=True, trace=None):
    """Map a projected-region point to a nonnegative one with the same user totals.

    ``v`` is indexed like ``system.components``. With ``check`` set, the
    input must satisfy every row of the projected system (sum
    nonnegativity included), else :class:`PreconditionError` names the
    first violated row. ``trace`` collects ``(user, step, levels)`` moves.
    """
    v = list(v)
    if len(v) != system.dim:
        raise InvalidInputError(f"rate vector has {len(v)} components, system needs {system.dim}")
    if check:
        bad = system.violations(v, rhs, guarded=False, tol=tol)
        if bad:
            tag, lhs, r = bad[0]
            if tag.startswith("nonneg"):
                raise PreconditionError(f"input violates {tag}: user total {float(lhs):.9g} is negative")
            raise PreconditionError(f"input violates {tag}: {float(lhs):.9g} > {float(r):.9g}")
    m = system.n_states + 1
    out = []
    for k in (0, 1):
        steps = [] if trace is not None else None
        out += rebalance_levels(v[k * m:(k + 1) * m], steps)
        if trace is not None:
            trace += [(k + 1, name, lv) for name, lv in steps]
    return out


def user_sums(v, n_states):
    m = n_states + 1
    return sum(v[:m]), sum(v[m:])
