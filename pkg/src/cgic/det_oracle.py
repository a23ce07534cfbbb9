"""Exact evaluation for compound deterministic interference channels.

Every model variable is a function of the input pair, so a joint law is a
weighted partition of the ``|X1| x |X2|`` grid. Entropies are computed by
relabelling the tuple of columns and summing cell weights per label.

The auxiliary variables equal the interference signals themselves: an
independent copy of a deterministic function of ``X_k`` is that function.
Both therefore map to the same grid column, which makes the gap terms
cancel exactly rather than to rounding error.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvariantViolation, ResourceLimitError
from .gaussian_stats import MISpec, S, X, Y
from .gap import GapReport, certify_evaluator, compute_delta
from .inequality_gen import system_for
from .kernels import weighted_entropy
from .polytope import DEFAULT_DIRECTIONS

MAX_CELLS = 10 ** 7
EQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class DetChannel:
    """``s_maps[k][n][x_k]`` is the interference user ``k+1`` causes in state ``n+1``;
    ``y_tables[k][n][x_k][s]`` is receiver ``k+1``'s output given the other
    user's interference ``s`` in that state. State 1 sees the most."""

    x_sizes: tuple
    s_maps: tuple
    y_tables: tuple

    def __post_init__(self):
        xs = tuple(int(v) for v in self.x_sizes)
        if len(xs) != 2 or min(xs) < 1:
            raise InvalidInputError(f"need two positive input alphabet sizes, got {self.x_sizes!r}")
        smaps = tuple(tuple(np.asarray(m, dtype=np.int64) for m in user) for user in self.s_maps)
        ytabs = tuple(tuple(np.asarray(t, dtype=np.int64) for t in user) for user in self.y_tables)
        if len(smaps) != 2 or len(ytabs) != 2:
            raise InvalidInputError("need maps and output tables for both users")
        n = len(smaps[0])
        if n < 1 or any(len(u) != n for u in smaps + ytabs):
            raise InvalidInputError("every user needs one map and one table per state")
        if xs[0] * xs[1] > MAX_CELLS:
            raise ResourceLimitError(f"input grid of {xs[0] * xs[1]} cells exceeds {MAX_CELLS}")
        object.__setattr__(self, "x_sizes", xs)
        object.__setattr__(self, "s_maps", smaps)
        object.__setattr__(self, "y_tables", ytabs)
        self._validate()

    @property
    def n_states(self):
        return len(self.s_maps[0])

    def _validate(self):
        for k in range(2):
            o = 1 - k
            for n, m in enumerate(self.s_maps[k]):
                if m.shape != (self.x_sizes[k],) or m.min() < 0:
                    raise InvalidInputError(f"interference map {k + 1},{n + 1} must list one symbol per input")
            for n in range(self.n_states - 1):
                _check_function(self.s_maps[k][n], self.s_maps[k][n + 1], f"user {k + 1} state {n + 2}")
            for n, t in enumerate(self.y_tables[k]):
                s_size = int(self.s_maps[o][n].max()) + 1
                if t.ndim != 2 or t.shape[0] != self.x_sizes[k] or t.shape[1] < s_size:
                    raise InvalidInputError(
                        f"output table {k + 1},{n + 1} must be {self.x_sizes[k]} x {s_size}, got {t.shape}")
                used = np.unique(self.s_maps[o][n])
                for x in range(self.x_sizes[k]):
                    row = t[x, used]
                    if np.unique(row).size != row.size:
                        raise InvariantViolation(
                            f"output {k + 1},{n + 1} is not invertible in the interference at x={x}")


def _check_function(fine, coarse, what):
    """``coarse`` must be a function of ``fine`` (degraded chain)."""
    seen = {}
    for a, b in zip(fine.tolist(), coarse.tolist()):
        if seen.setdefault(a, b) != b:
            raise InvariantViolation(f"{what} is not a function of the previous state")


@dataclass(frozen=True)
class DiscreteDist:
    """Independent input laws ``p1`` on ``X1`` and ``p2`` on ``X2``."""

    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        for name in ("p1", "p2"):
            p = np.asarray(getattr(self, name), dtype=float)
            if p.ndim != 1 or p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
                raise InvalidInputError(f"{name} must be a nonnegative probability vector")
            if abs(p.sum() - 1.0) > 1e-9:
                raise InvalidInputError(f"{name} sums to {p.sum()!r}, not 1")
            object.__setattr__(self, name, p)

    @classmethod
    def uniform(cls, ch: DetChannel):
        return cls(np.full(ch.x_sizes[0], 1.0 / ch.x_sizes[0]), np.full(ch.x_sizes[1], 1.0 / ch.x_sizes[1]))

    def table(self):
        return np.outer(self.p1, self.p2)


class DetEvaluator:
    """Entropies and mutual informations of a deterministic channel, in bits."""

    def __init__(self, ch: DetChannel, dist: DiscreteDist):
        if dist.p1.size != ch.x_sizes[0] or dist.p2.size != ch.x_sizes[1]:
            raise InvalidInputError("input law does not match the channel alphabets")
        self.ch = ch
        self.n_states = ch.n_states
        x1, x2 = np.meshgrid(np.arange(ch.x_sizes[0]), np.arange(ch.x_sizes[1]), indexing="ij")
        x1, x2 = x1.ravel(), x2.ravel()
        w = dist.table().ravel()
        keep = w > 0
        self._w = w[keep]
        xs = (x1[keep], x2[keep])
        cols = {X(1): xs[0], X(2): xs[1]}
        for k in range(2):
            for n in range(self.n_states):
                cols[S(k + 1, n + 1)] = ch.s_maps[k][n][xs[k]]
        for k in range(2):
            o = 1 - k
            for n in range(self.n_states):
                cols[Y(k + 1, n + 1)] = ch.y_tables[k][n][xs[k], cols[S(o + 1, n + 1)]]
        self._cols = cols
        self._cache = {}

    @staticmethod
    def _column_key(v):
        # U is the interference signal itself
        return S(v.user, v.state) if v.kind == "U" else v

    def joint_entropy(self, vs):
        keys = frozenset(self._column_key(v) for v in vs)
        if not keys:
            return 0.0
        if keys not in self._cache:
            M = np.column_stack([self._cols[k] for k in sorted(keys, key=repr)])
            _, labels = np.unique(M, axis=0, return_inverse=True)
            labels = labels.ravel().astype(np.int64)
            self._cache[keys] = float(weighted_entropy(labels, self._w, int(labels.max()) + 1))
        return self._cache[keys]

    def entropy(self, targets, given=()):
        return self.joint_entropy(set(targets) | set(given)) - self.joint_entropy(given)

    def mi(self, spec: MISpec):
        t, s, g = spec.targets, spec.subjects, spec.given
        # grouped so identical tables cancel to an exact zero
        return (self.joint_entropy(t | g) - self.joint_entropy(t | s | g)) + \
               (self.joint_entropy(s | g) - self.joint_entropy(g))

    def noise_entropy(self, k, n):
        return self.entropy({S(k, n)}, {X(k)})


def det_mi(ch: DetChannel, dist: DiscreteDist, spec: MISpec):
    return DetEvaluator(ch, dist).mi(spec)


def det_certify(ch: DetChannel, dist: DiscreteDist = None, directions=DEFAULT_DIRECTIONS) -> GapReport:
    """Both bounds from exact constants; the gap must vanish."""
    if dist is None:
        dist = DiscreteDist.uniform(ch)
    ev = DetEvaluator(ch, dist)
    d1, d2 = compute_delta(ev, ch.n_states)
    report = certify_evaluator(system_for(ch.n_states), ev, d1, d2, directions)
    if d1 != 0.0 or d2 != 0.0:
        report.failures.append(f"gap terms not exactly zero: ({d1!r}, {d2!r})")
    dirs = {(a, b) for a, b, _ in report.inner.samples} | {(a, b) for a, b, _ in report.outer.samples}
    worst = 0.0
    for a, b in sorted(dirs):
        diff = abs(report.outer.support(a, b) - report.inner.support(a, b))
        worst = max(worst, diff)
        if diff > EQUALITY_TOL:
            report.failures.append(f"inner and outer supports differ by {diff:.3e} at ({a:.6g}, {b:.6g})")
    report.per_direction_max_gap = worst
    report.certified = not report.failures
    return report


# ---------------------------------------------------------------- fixtures

def _add_mod(xs, ss, m):
    return np.array([[(x + s) % m for s in range(ss)] for x in range(xs)])


def xor_channel():
    ident = np.arange(2)
    return DetChannel((2, 2), ((ident,), (ident,)), ((_add_mod(2, 2, 2),), (_add_mod(2, 2, 2),)))


def noninterfering_channel(size=3):
    zero = np.zeros(size, dtype=int)
    y = np.arange(size)[:, None]
    return DetChannel((size, size), ((zero,), (zero,)), ((y,), (y,)))


def degraded_mod_channel():
    """Two states: full residue mod 4, then its parity."""
    x = np.arange(4)
    maps = (x % 4, x % 2)
    tabs = (_add_mod(4, 4, 4), _add_mod(4, 4, 4))
    return DetChannel((4, 4), (maps, maps), (tabs, tabs))


def three_state_mod_channel():
    x = np.arange(6)
    maps = (x, x % 3, x % 1)
    tabs = (_add_mod(6, 6, 6),) * 3
    return DetChannel((6, 6), (maps, maps), (tabs, tabs))


def shifted_bits_channel():
    """Interference is the input shifted right; outputs XOR it in."""
    x = np.arange(8)
    maps = (x >> 1, x >> 2)
    tab = np.array([[a ^ s for s in range(8)] for a in range(8)])
    return DetChannel((8, 8), (maps, maps), ((tab, tab), (tab, tab)))


def asymmetric_channel():
    x1, x2 = np.arange(3), np.arange(5)
    s1 = (x1, (x1 == 2).astype(int))
    s2 = (x2 // 2, x2 // 4)
    y1 = (np.array([[x * 3 + s for s in range(3)] for x in range(3)]),) * 2
    y2 = (np.array([[(x + s) % 5 for s in range(3)] for x in range(5)]),) * 2
    return DetChannel((3, 5), (s1, s2), (y1, y2))


def fixture_channels():
    """Name -> (channel, input law) pairs used by the tests and ``verify``."""
    skew = DiscreteDist(np.array([0.5, 0.3, 0.2]), np.array([0.1, 0.2, 0.3, 0.25, 0.15]))
    out = {
        "xor": xor_channel(),
        "noninterfering": noninterfering_channel(),
        "degraded_mod4": degraded_mod_channel(),
        "three_state_mod6": three_state_mod_channel(),
        "shifted_bits": shifted_bits_channel(),
    }
    pairs = {k: (v, DiscreteDist.uniform(v)) for k, v in out.items()}
    pairs["asymmetric"] = (asymmetric_channel(), skew)
    return pairs

