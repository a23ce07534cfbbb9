"""Joint Gaussian model of all channel variables and its entropies.

Every variable is a linear combination of independent unit complex sources:
the two inputs and one fresh noise per chain stage. The auxiliary ``U``
chains reuse the input but draw their own noises, so ``U_{k,n}`` is an
independent copy of ``S_{k,n}`` given ``X_k``. Entropies are in bits for
circularly-symmetric complex vectors: ``h = log2((pi e)^d det C)``.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channel_model import DegradedChain
from .errors import InvalidInputError, NumericalDegeneracyError

LOG2_PIE = math.log2(math.pi * math.e)
EIG_FLOOR = 1e-12
PSD_TOL = 1e-10
MI_CLAMP = 1e-9


class VarId(NamedTuple):
    kind: str
    user: int
    state: int = 0

    def __repr__(self):
        if self.kind == "X":
            return f"X{self.user}"
        return f"{self.kind}{self.user}[{self.state}]"

    __str__ = __repr__


def X(k):
    return VarId("X", k, 0)


def U(k, n):
    return VarId("U", k, n)


def S(k, n):
    return VarId("S", k, n)


def Y(k, n):
    return VarId("Y", k, n)


_KIND_ORDER = {"X": 0, "U": 1, "S": 2, "Y": 3}


def _fmt(vs):
    return ", ".join(str(v) for v in sorted(vs, key=lambda v: (_KIND_ORDER[v.kind], v.user, v.state)))


@dataclass(frozen=True)
class MISpec:
    """``I(subjects; targets | given)``."""

    targets: frozenset
    subjects: frozenset
    given: frozenset = frozenset()

    def __post_init__(self):
        for name in ("targets", "subjects", "given"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.targets or not self.subjects:
            raise InvalidInputError("MI needs nonempty targets and subjects")
        if (self.targets & self.subjects) or (self.targets & self.given) or (self.subjects & self.given):
            raise InvalidInputError(f"MI variable sets overlap: {self}")

    def __str__(self):
        g = f" | {_fmt(self.given)}" if self.given else ""
        return f"I({_fmt(self.targets)}; {_fmt(self.subjects)}{g})"


@dataclass(frozen=True, eq=False)
class GaussianSystem:
    """Covariance of every model variable for Gaussian inputs."""

    ids: tuple
    loading: np.ndarray
    n_states: int
    _index: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update({v: i for i, v in enumerate(self.ids)})

    @property
    def cov(self):
        L = self.loading
        return L @ L.conj().T

    def index(self, vs):
        """Row indices; sets are sorted, sequences keep their order."""
        if isinstance(vs, (set, frozenset)):
            vs = sorted(vs)
        try:
            return [self._index[v] for v in vs]
        except KeyError as exc:
            raise InvalidInputError(f"unknown variable {exc.args[0]!r}") from None

    def cond_cov(self, targets, given=()):
        """Covariance of ``targets`` conditioned on ``given`` (Schur complement)."""
        C = self.cov
        t = self.index(targets)
        g = self.index(given)
        Ctt = C[np.ix_(t, t)]
        if not g:
            return Ctt
        Ctg = C[np.ix_(t, g)]
        Cgg = C[np.ix_(g, g)]
        w, V = np.linalg.eigh(Cgg)
        keep = w > EIG_FLOOR * max(float(np.sum(np.abs(w))), 1e-300)
        Vk = V[:, keep]
        B = Ctg @ Vk
        out = Ctt - (B / w[keep]) @ B.conj().T
        return 0.5 * (out + out.conj().T)

    def _psd_scale(self):
        return PSD_TOL * max(float(np.real(np.trace(self.cov))), 1.0)

    def entropy(self, targets, given=()):
        key = ("h", frozenset(targets), frozenset(given))
        if key not in self._cache:
            self._cache[key] = cond_entropy(self, targets, given)
        return self._cache[key]

    def mi(self, spec):
        key = ("i", spec)
        if key not in self._cache:
            self._cache[key] = cond_mi(self, spec)
        return self._cache[key]

    def noise_entropy(self, k, n):
        """``h(S_{k,n} | X_k)``, the entropy the genie cannot remove."""
        return self.entropy({S(k, n)}, {X(k)})


def build_system(chain: DegradedChain, p1=None, p2=None) -> GaussianSystem:
    p = (chain.p[0] if p1 is None else float(p1), chain.p[1] if p2 is None else float(p2))
    if min(p) < 0 or not all(math.isfinite(v) for v in p):
        raise InvalidInputError(f"powers must be finite and nonnegative, got {p}")
    n = chain.n_states
    n_src = 2 + 4 * n
    # source columns: x1, x2, then per user the S-noises and U-noises
    def noise_col(kind, k, t):
        base = 2 + (0 if kind == "S" else 2 * n) + (k - 1) * n
        return base + t

    rows = {}
    for k in (1, 2):
        xrow = np.zeros(n_src, dtype=complex)
        xrow[k - 1] = math.sqrt(p[k - 1])
        rows[X(k)] = xrow
    for k in (1, 2):
        i = k - 1
        for kind, mk in (("S", S), ("U", U)):
            prev = None
            for t in range(n):
                if t == 0:
                    row = chain.cross[i][0] * rows[X(k)]
                    row[noise_col(kind, k, 0)] += 1.0
                else:
                    row = chain.ratio[i][t - 1] * prev
                    row[noise_col(kind, k, t)] += chain.residual[i][t - 1]
                rows[mk(k, t + 1)] = row
                prev = row
    for t in range(n):
        rows[Y(1, t + 1)] = chain.direct[0][t] * rows[X(1)] + rows[S(2, t + 1)]
        rows[Y(2, t + 1)] = chain.direct[1][t] * rows[X(2)] + rows[S(1, t + 1)]

    ids = [X(1), X(2)]
    for mk in (U, S, Y):
        for k in (1, 2):
            ids += [mk(k, t + 1) for t in range(n)]
    L = np.array([rows[v] for v in ids])
    return GaussianSystem(tuple(ids), L, n)


def cond_entropy(sys: GaussianSystem, targets, given=()):
    """``h(targets | given)`` in bits; ``-inf`` when the conditional law is singular."""
    targets, given = frozenset(targets), frozenset(given)
    if not targets:
        raise InvalidInputError("entropy needs at least one target")
    if targets & given:
        return float("-inf")
    C = sys.cond_cov(targets, given)
    w = np.linalg.eigvalsh(C)
    if w.min() < -sys._psd_scale():
        raise NumericalDegeneracyError(f"conditional covariance not PSD (min eigenvalue {w.min():.3e})")
    floor = EIG_FLOOR * max(float(np.real(np.trace(sys.cov))), 1.0)
    if w.min() <= floor:
        return float("-inf")
    return len(targets) * LOG2_PIE + float(np.sum(np.log2(w)))


def cond_mi(sys: GaussianSystem, spec: MISpec):
    """``I(subjects; targets | given)`` in bits via Schur complements.

    Directions of the targets that are already determined by ``given`` carry
    no information and are projected out before taking log-determinants, so
    singular conditioning (equal-gain chain stages) is handled exactly.
    """
    T = sorted(spec.targets)
    Sb = sorted(spec.subjects)
    C = sys.cond_cov(T + Sb, spec.given)
    t = len(T)
    Ctt = C[:t, :t]
    w, V = np.linalg.eigh(Ctt)
    scale = max(float(np.real(np.trace(sys.cov))), 1.0)
    if w.min() < -PSD_TOL * scale:
        raise NumericalDegeneracyError(f"conditional covariance not PSD (min eigenvalue {w.min():.3e})")
    keep = w > EIG_FLOOR * scale
    if not keep.any():
        return 0.0
    P = V[:, keep]
    Cts = P.conj().T @ C[:t, t:]
    Css = C[t:, t:]
    ws, Vs = np.linalg.eigh(Css)
    ks = ws > EIG_FLOOR * scale
    B = Cts @ Vs[:, ks]
    schur = np.diag(w[keep]) - (B / ws[ks]) @ B.conj().T
    ew = np.linalg.eigvalsh(0.5 * (schur + schur.conj().T))
    if ew.min() < -PSD_TOL * scale:
        raise NumericalDegeneracyError(f"Schur complement not PSD (min eigenvalue {ew.min():.3e})")
    if ew.min() <= EIG_FLOOR * scale:
        return float("inf")
    val = float(np.sum(np.log2(w[keep])) - np.sum(np.log2(ew)))
    if val < 0.0:
        if val < -MI_CLAMP:
            raise NumericalDegeneracyError(f"negative mutual information {val:.3e} for {spec}")
        val = 0.0
    return val


def delta_closed_form(g):
    """``I(X; S | U)`` for ``S``, ``U`` independent noisy copies of gain ``g``."""
    return math.log2((2.0 * g + 1.0) / (g + 1.0))
