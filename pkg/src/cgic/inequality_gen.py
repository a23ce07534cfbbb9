"""Linear constraint systems of the superposition inner bound.

Each user splits its rate into a private part (level 0) and one part per
state, ``alpha_1 .. alpha_N`` (levels 1..N). Level ``n`` is decoded by the
other receiver in states ``1..n``, so ``alpha_1`` is the layer that only the
strongest-interference state decodes and ``alpha_N`` is public. For two
states the usual names are ``alpha = alpha_1`` and ``beta = alpha_2``.

A receiver of user ``k`` in state ``n`` yields one constraint per pair
(own levels in error, interferer levels in error). Own errors always form a
prefix ``0..m``; interferer errors form a run ``n..n+L-1`` starting at the
innermost level that state decodes.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError
from .gaussian_stats import MISpec, U, X, Y

PROJECTED = "projected_region"
CONDITIONAL = "conditional_region"
_VARIANTS = (PROJECTED, CONDITIONAL)


class RateComponent(NamedTuple):
    user: int
    level: int

    def name(self, n_states):
        if self.level == 0:
            return f"R{self.user}p"
        if n_states == 2:
            return f"R{self.user}{'ab'[self.level - 1]}"
        return f"R{self.user}a{self.level}"


@dataclass(frozen=True)
class ConstraintSpec:
    lhs: frozenset
    mi: MISpec
    receiver: tuple
    tag: str
    guard: frozenset

    def structure(self):
        """Everything except the tag, for structural comparison."""
        return (self.lhs, self.mi, self.receiver, self.guard)


@dataclass(frozen=True)
class ConstraintSystem:
    n_states: int
    constraints: tuple
    nonneg: str

    @property
    def dim(self):
        return 2 * (self.n_states + 1)

    @property
    def components(self):
        return [RateComponent(k, lv) for k in (1, 2) for lv in range(self.n_states + 1)]

    def col(self, comp):
        return (comp.user - 1) * (self.n_states + 1) + comp.level

    @property
    def names(self):
        return [c.name(self.n_states) for c in self.components]

    @property
    def tags(self):
        return [c.tag for c in self.constraints]

    def coefficient_matrix(self):
        A = np.zeros((len(self.constraints), self.dim))
        for i, c in enumerate(self.constraints):
            for comp in c.lhs:
                A[i, self.col(comp)] = 1.0
        return A

    def nonneg_matrix(self):
        """Rows ``g`` meaning ``g . R >= 0``."""
        if self.nonneg == "sum":
            G = np.zeros((2, self.dim))
            for k in (1, 2):
                G[k - 1, (k - 1) * (self.n_states + 1):k * (self.n_states + 1)] = 1.0
            return G
        return np.eye(self.dim)

    def evaluate(self, evaluator):
        """Right-hand sides: each constraint's mutual information."""
        return np.array([evaluator.mi(c.mi) for c in self.constraints])

    def violations(self, v, rhs, guarded=None, tol=0):
        """Rows of the system violated by rate vector ``v``.

        Works for any numeric type; with ``Fraction`` inputs and ``tol=0``
        the check is exact. ``guarded`` defaults to True for the conditional
        variant: a constraint is skipped when its guard sums to zero or less.
        """
        if guarded is None:
            guarded = self.nonneg == "component"
        bad = []
        for c, r in zip(self.constraints, rhs):
            if guarded and sum(v[self.col(g)] for g in c.guard) <= 0:
                continue
            lhs = sum(v[self.col(comp)] for comp in c.lhs)
            if lhs > _num(r, lhs) + tol:
                bad.append((c.tag, lhs, r))
        for i, g in enumerate(self.nonneg_matrix()):
            val = sum(v[j] for j in np.nonzero(g)[0])
            if val < -tol:
                bad.append((f"nonneg{i + 1}", val, 0))
        return bad

    def dump(self):
        """Structured-text listing, one constraint per line."""
        lines = [
            f"# states={self.n_states} dim={self.dim} nonneg={self.nonneg} count={len(self.constraints)}",
            "# components: " + " ".join(self.names),
        ]
        for c in self.constraints:
            key = lambda comp: (comp.user == c.receiver[0], -comp.level)  # noqa: E731
            lhs = " + ".join(comp.name(self.n_states) for comp in sorted(c.lhs, key=key))
            guard = " + ".join(comp.name(self.n_states) for comp in sorted(c.guard, key=key))
            lines.append(f"{c.tag}\trx={c.receiver[0]},{c.receiver[1]}\t{lhs} <= {c.mi}\tguard: {guard} > 0")
        return "\n".join(lines) + "\n"


def _num(r, like):
    if isinstance(like, Fraction) and not isinstance(r, Fraction):
        return Fraction(r)
    return r


def _nonneg_for(variant):
    if variant not in _VARIANTS:
        raise InvalidInputError(f"unknown variant {variant!r}; expected one of {_VARIANTS}")
    return "sum" if variant == PROJECTED else "component"


# Two-state table: tag, left-hand side, MI subjects, MI conditioning.
# Output is Y{k} in state beta for gamma rows and alpha for delta rows.
_TWO_STATE_TABLE = """
gamma11 | 1p          | X1     | U1a U2b
gamma12 | 2b 1p       | X1 U2b | U1a
gamma13 | 1a 1p       | X1     | U1b U2b
gamma14 | 2b 1a 1p    | X1 U2b | U1b
gamma15 | 1b 1a 1p    | X1     | U2b
gamma16 | 2b 1b 1a 1p | X1 U2b |
delta11 | 1p             | X1     | U1a U2a
delta12 | 2a 1p          | X1 U2a | U1a U2b
delta13 | 2b 2a 1p       | X1 U2a | U1a
delta14 | 1a 1p          | X1     | U1b U2a
delta15 | 2a 1a 1p       | X1 U2a | U1b U2b
delta16 | 2b 2a 1a 1p    | X1 U2a | U1b
delta17 | 1b 1a 1p       | X1     | U2a
delta18 | 2a 1b 1a 1p    | X1 U2a | U2b
delta19 | 2b 2a 1b 1a 1p | X1 U2a |
gamma21 | 2p          | X2     | U2a U1b
gamma22 | 1b 2p       | X2 U1b | U2a
gamma23 | 2a 2p       | X2     | U2b U1b
gamma24 | 1b 2a 2p    | X2 U1b | U2b
gamma25 | 2b 2a 2p    | X2     | U1b
gamma26 | 1b 2b 2a 2p | X2 U1b |
delta21 | 2p             | X2     | U2a U1a
delta22 | 1a 2p          | X2 U1a | U2a U1b
delta23 | 1b 1a 2p       | X2 U1a | U2a
delta24 | 2a 2p          | X2     | U2b U1a
delta25 | 1a 2a 2p       | X2 U1a | U2b U1b
delta26 | 1b 1a 2a 2p    | X2 U1a | U2b
delta27 | 2b 2a 2p       | X2     | U1a
delta28 | 1a 2b 2a 2p    | X2 U1a | U1b
delta29 | 1b 1a 2b 2a 2p | X2 U1a |
"""

_LEVEL = {"p": 0, "a": 1, "b": 2}


def _parse_rate(tok):
    return RateComponent(int(tok[0]), _LEVEL[tok[1]])


def _parse_var(tok):
    if tok[0] == "X":
        return X(int(tok[1]))
    return U(int(tok[1]), _LEVEL[tok[2]])


def gen_2state(variant=PROJECTED) -> ConstraintSystem:
    """The thirty two-state constraints, transcribed row by row."""
    nonneg = _nonneg_for(variant)
    out = []
    for line in _TWO_STATE_TABLE.strip().splitlines():
        tag, lhs, subj, given = (f.split() for f in line.split("|"))
        tag = tag[0]
        k = int(tag[5])
        state = 2 if tag.startswith("gamma") else 1
        lhs = frozenset(map(_parse_rate, lhs))
        out.append(ConstraintSpec(
            lhs=lhs,
            mi=MISpec({Y(k, state)}, set(map(_parse_var, subj)), set(map(_parse_var, given))),
            receiver=(k, state),
            tag=tag,
            guard=frozenset(c for c in lhs if c.user == k),
        ))
    return ConstraintSystem(2, tuple(out), nonneg)


def gen_nstate(n_states, variant=PROJECTED) -> ConstraintSystem:
    """Constraint enumerator for ``N`` interference states per receiver."""
    if int(n_states) != n_states or n_states < 1:
        raise InvalidInputError(f"need at least one state, got {n_states!r}")
    N = int(n_states)
    nonneg = _nonneg_for(variant)
    out = []
    for k in (1, 2):
        o = 3 - k
        for n in range(N, 0, -1):
            for m in range(N + 1):
                own = frozenset(RateComponent(k, lv) for lv in range(m + 1))
                for run in range(N - n + 2):
                    intf = frozenset(RateComponent(o, lv) for lv in range(n, n + run))
                    subjects = {X(k)} | ({U(o, n)} if run else set())
                    given = set()
                    if m < N:
                        given.add(U(k, m + 1))
                    if n + run <= N:
                        given.add(U(o, n + run))
                    out.append(ConstraintSpec(
                        lhs=own | intf,
                        mi=MISpec({Y(k, n)}, subjects, given),
                        receiver=(k, n),
                        tag=f"rx{k}.{n}:own{m}:int{run}",
                        guard=own,
                    ))
    return ConstraintSystem(N, tuple(out), nonneg)


def system_for(n_states, variant=PROJECTED) -> ConstraintSystem:
    """Two-state table when it applies (readable tags), enumerator otherwise."""
    if n_states == 2:
        return gen_2state(variant)
    return gen_nstate(n_states, variant)


def genie_table(sys: ConstraintSystem):
    """Side information handed to each decoder in the outer bound.

    The genie reveals exactly the layers that the matching error event
    decodes correctly; Markovity along each ``U`` chain reduces these to
    the MI conditioning set.
    """
    return {c.tag: c.mi.given for c in sys.constraints}


def monotonicity_violations(sys: ConstraintSystem, rhs, tol=1e-9):
    """Pairs within one receiver block where a larger LHS has a smaller RHS."""
    bad = []
    cons = sys.constraints
    for i, ci in enumerate(cons):
        for j, cj in enumerate(cons):
            if i != j and ci.receiver == cj.receiver and ci.lhs < cj.lhs and rhs[j] < rhs[i] - tol:
                bad.append((ci.tag, cj.tag, rhs[i], rhs[j]))
    return bad
