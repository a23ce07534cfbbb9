"""Halfspace systems, projections, support functions and dual certificates.

Rates for user 1 get weight ``a`` and rates for user 2 weight ``b`` in every
support LP, so the support value of a lifted polytope is the support value of
its projection onto ``(R1, R2)`` totals.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    InfeasibleError,
    InvalidDirectionError,
    InvalidInputError,
    PreconditionError,
    ResourceLimitError,
    UnboundedError,
)
from .inequality_gen import ConstraintSystem
from .lp import LP_TOL, maximize_free, solve_standard

FM_ROW_CAP = 1_000_000
FM_PRUNE_ABOVE = 64
MERGE_RADIUS = 1e-8
VERTEX_TOL = 1e-7
DEFAULT_DIRECTIONS = 361


@dataclass(frozen=True)
class HalfspaceSystem:
    """Rows ``A x <= b`` over named dimensions."""

    A: np.ndarray
    b: np.ndarray
    dims: tuple
    labels: tuple = ()

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        if A.size == 0:
            A = A.reshape(0, len(self.dims))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape != (b.size, len(self.dims)):
            raise InvalidInputError(f"shape mismatch: A{A.shape}, b{b.shape}, {len(self.dims)} dims")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "dims", tuple(self.dims))
        labels = tuple(self.labels) or tuple(f"row{i}" for i in range(b.size))
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_rows(cls, dims, rows):
        """Rows are ``(coeffs: dict name->value, rhs, sense)`` with sense ``<=`` or ``>=``."""
        dims = tuple(dims)
        A, b = [], []
        for coeffs, rhs, sense in rows:
            row = np.zeros(len(dims))
            for name, v in coeffs.items():
                row[dims.index(name)] = v
            s = 1.0 if sense == "<=" else -1.0
            if sense not in ("<=", ">="):
                raise InvalidInputError(f"unknown sense {sense!r}")
            A.append(s * row)
            b.append(s * rhs)
        return cls(np.array(A).reshape(len(A), len(dims)), np.array(b), dims)

    @property
    def n_rows(self):
        return self.b.size

    def weights(self, a, b):
        """Objective ``a*R1 + b*R2`` expressed on the lifted dimensions."""
        w = np.zeros(len(self.dims))
        for j, name in enumerate(self.dims):
            if name.startswith("R1"):
                w[j] = a
            elif name.startswith("R2"):
                w[j] = b
        return w

    def contains(self, x, tol=1e-9):
        return bool(np.all(self.A @ np.asarray(x, float) <= self.b + tol))


@dataclass(frozen=True)
class ValuedSystem:
    """A constraint system with numeric right-hand sides."""

    system: ConstraintSystem
    rhs: np.ndarray

    def halfspaces(self):
        A = self.system.coefficient_matrix()
        G = self.system.nonneg_matrix()
        labels = tuple(self.system.tags) + tuple(f"nonneg{i + 1}" for i in range(G.shape[0]))
        return HalfspaceSystem(np.vstack([A, -G]), np.concatenate([self.rhs, np.zeros(G.shape[0])]),
                               self.system.names, labels)


def _check_direction(a, b):
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidDirectionError(f"direction must be finite, got ({a}, {b})")
    if a < 0 or b < 0:
        raise InvalidDirectionError(f"direction ({a}, {b}) has a negative component")


def support_value(sys: HalfspaceSystem, a, b):
    """``max a*R1 + b*R2`` over the lifted polytope; returns ``(c_star, x)``."""
    _check_direction(a, b)
    res = maximize_free(sys.weights(a, b), sys.A, sys.b)
    return res.objective, res.x


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class DualCertificate:
    """Nonnegative multipliers for the MI rows (``weights``) and the
    nonnegativity rows (``omega``) that certify an upper bound in a direction.
    """

    direction: tuple
    weights: np.ndarray
    omega: np.ndarray
    objective: float
    tags: tuple
    n_states: int
    point: np.ndarray = field(default=None, repr=False)

    def in_lambda_prime(self, tol=1e-10):
        return bool(np.all(np.abs(self.omega) <= tol))

    def weight(self, tag):
        return float(self.weights[self.tags.index(tag)])

    def nu(self, k):
        """Multipliers of the six state-beta rows of user ``k`` (two states only)."""
        return np.array([self.weight(f"gamma{k}{i}") for i in range(1, 7)])

    def mu(self, k):
        """Multipliers of the nine state-alpha rows of user ``k`` (two states only)."""
        return np.array([self.weight(f"delta{k}{i}") for i in range(1, 10)])

    def residuals(self, system: ConstraintSystem):
        """Equality residuals ``A^T w - G^T omega - (a..a, b..b)``."""
        A = system.coefficient_matrix()
        G = system.nonneg_matrix()
        target = _objective_vector(system, *self.direction)
        return A.T @ self.weights - G.T @ self.omega - target

    def without_omega(self):
        """Same weights, omega folded into the direction: ``(a+w1, b+w2)``.

        With per-user-sum nonnegativity each ``omega_k`` enters every
        user-``k`` equation with the same coefficient, so dropping it simply
        raises that user's direction weight. The objective is unchanged.
        """
        if self.omega.size != 2:
            raise PreconditionError("omega folding needs per-user-sum nonnegativity")
        a, b = self.direction
        return DualCertificate((a + float(self.omega[0]), b + float(self.omega[1])), self.weights.copy(),
                               np.zeros(2), self.objective, self.tags, self.n_states, self.point)


def _objective_vector(system, a, b):
    n1 = system.n_states + 1
    return np.concatenate([np.full(n1, float(a)), np.full(n1, float(b))])


def dual_min(valued: ValuedSystem, a, b, allow_omega=True, lexicographic=True):
    """Minimise ``rhs . w`` over certificates for direction ``(a, b)``.

    With ``allow_omega`` the nonnegativity multipliers are free to be
    positive; among optimal certificates the one with the smallest total
    omega is returned. ``allow_omega=False`` restricts to omega-free
    certificates. The returned ``point`` is a primal maximiser read from the
    LP duals.
    """
    _check_direction(a, b)
    system = valued.system
    rhs = np.asarray(valued.rhs, dtype=float)
    A = system.coefficient_matrix()
    G = system.nonneg_matrix()
    M, n_om = A.shape[0], G.shape[0]
    target = _objective_vector(system, a, b)
    if allow_omega:
        E = np.hstack([A.T, -G.T])
        cost = np.concatenate([rhs, np.zeros(n_om)])
    else:
        E = A.T
        cost = rhs
    try:
        res = solve_standard(cost, E, target)
    except InfeasibleError:
        raise InvalidDirectionError(f"no certificate exists for direction ({a}, {b})") from None
    z = res.x
    point = res.duals
    best = res.objective
    if allow_omega and lexicographic and z[M:].sum() > 1e-12:
        slack = 1e-9 * max(1.0, abs(best))
        E2 = np.vstack([np.hstack([E, np.zeros((E.shape[0], 1))]),
                        np.concatenate([cost, [1.0]])[None, :]])
        cost2 = np.concatenate([np.zeros(M), np.ones(n_om), [0.0]])
        try:
            res2 = solve_standard(cost2, E2, np.concatenate([target, [best + slack]]))
            z = res2.x[:-1]
        except (InfeasibleError, UnboundedError):
            pass
    weights = np.maximum(z[:M], 0.0)
    omega = np.maximum(z[M:], 0.0) if allow_omega else np.zeros(n_om)
    return DualCertificate((float(a), float(b)), weights, omega, float(rhs @ weights),
                           tuple(system.tags), system.n_states, point)


def two_state_identities(cert: DualCertificate):
    """Residuals of the four two-state identities implied by the dual rows."""
    if cert.n_states != 2:
        raise PreconditionError("the four identities are stated for two states")
    if not cert.in_lambda_prime():
        raise PreconditionError(f"certificate has omega = {cert.omega.tolist()}, identities need omega = 0")
    nu1, mu1, nu2, mu2 = cert.nu(1), cert.mu(1), cert.nu(2), cert.mu(2)

    def m(v, *idx):
        return sum(v[i - 1] for i in idx)

    return [
        m(mu1, 1, 2, 3) + m(nu1, 1, 2) - m(mu2, 2, 3, 5, 6, 8, 9),
        m(mu1, 4, 5, 6) + m(mu2, 2, 5, 8) + m(nu1, 3, 4) - m(nu2, 2, 4, 6),
        m(mu2, 1, 2, 3) + m(nu2, 1, 2) - m(mu1, 2, 3, 5, 6, 8, 9),
        m(mu2, 4, 5, 6) + m(mu1, 2, 5, 8) + m(nu2, 3, 4) - m(nu1, 2, 4, 6),
    ]


def level_identities(cert: DualCertificate, system: ConstraintSystem):
    """N-state analogue: adjacent level equations of one user coincide."""
    if not cert.in_lambda_prime():
        raise PreconditionError("level identities need omega = 0")
    load = system.coefficient_matrix().T @ cert.weights
    n1 = system.n_states + 1
    out = []
    for k in (0, 1):
        for lv in range(system.n_states):
            out.append(load[k * n1 + lv] - load[k * n1 + lv + 1])
    return out


# ------------------------------------------------------------ Fourier-Motzkin


def _prune_duplicates(A, b, tol=1e-9):
    """Normalise rows, drop trivial ones, keep the tightest of parallel copies."""
    scale = np.max(np.abs(A), axis=1) if A.size else np.zeros(0)
    trivial = scale <= tol
    if np.any(b[trivial] < -tol):
        raise InfeasibleError("projection is empty")
    A, b, scale = A[~trivial], b[~trivial], scale[~trivial]
    A = A / scale[:, None]
    b = b / scale
    keys = np.round(A, 9)
    order = np.lexsort((b,) + tuple(keys.T[::-1]))
    keys, A, b = keys[order], A[order], b[order]
    keep = np.ones(b.size, dtype=bool)
    if b.size > 1:
        same = np.all(keys[1:] == keys[:-1], axis=1)
        keep[1:] = ~same
    return A[keep], b[keep]


def remove_redundant(A, b, tol=1e-9):
    """Drop rows implied by the others (one LP per row)."""
    keep = list(range(b.size))
    for i in range(b.size):
        others = [j for j in keep if j != i]
        if not others:
            continue
        rows = np.vstack([A[others], A[i]])
        rhs = np.concatenate([b[others], [b[i] + 1.0]])
        try:
            res = maximize_free(A[i], rows, rhs)
        except InfeasibleError:
            raise InfeasibleError("system is empty") from None
        if res.objective <= b[i] + tol * max(1.0, abs(b[i])):
            keep.remove(i)
    return A[keep], b[keep]


def fm_project(sys: HalfspaceSystem, keep, row_cap=FM_ROW_CAP, redundancy=True, totals=None):
    """Project onto the dimensions named in ``keep`` by Fourier-Motzkin.

    ``totals`` maps new total names to groups of existing dimensions, e.g.
    ``{"R1": ["R1p", "R1a", "R1b"]}``; the first member of each group is
    substituted by ``total - rest`` before elimination.
    """
    A, b, dims = sys.A.copy(), sys.b.copy(), list(sys.dims)
    if totals:
        for total, group in totals.items():
            idx = [dims.index(g) for g in group]
            first = idx[0]
            col = A[:, first].copy()
            for j in idx[1:]:
                A[:, j] -= col
            A[:, first] = col
            dims[first] = total
    for name in keep:
        if name not in dims:
            raise InvalidInputError(f"unknown dimension {name!r}")
    A, b = _prune_duplicates(A, b)
    elim = [j for j, d in enumerate(dims) if d not in keep]
    while elim:
        # cheapest variable first: fewest new rows
        costs = []
        for j in elim:
            pos = int(np.sum(A[:, j] > 1e-12))
            neg = int(np.sum(A[:, j] < -1e-12))
            costs.append(pos * neg - pos - neg)
        j = elim.pop(int(np.argmin(costs)))
        pos = int(np.sum(A[:, j] > 1e-12))
        neg = int(np.sum(A[:, j] < -1e-12))
        if b.size - pos - neg + pos * neg > row_cap:
            raise ResourceLimitError(f"Fourier-Motzkin would exceed {row_cap} rows")
        A, b = kernels.fm_eliminate(A, b, j, 1e-12)
        A, b = _prune_duplicates(A, b)
        if redundancy and b.size > FM_PRUNE_ABOVE:
            A, b = remove_redundant(A, b)
    cols = [dims.index(name) for name in keep]
    A = A[:, cols]
    A, b = _prune_duplicates(A, b)
    if redundancy:
        A, b = remove_redundant(A, b)
    return HalfspaceSystem(A, b, tuple(keep))


def project_totals(sys: HalfspaceSystem):
    """Project a lifted rate polytope onto ``(R1, R2)``."""
    groups = {}
    for name in sys.dims:
        groups.setdefault("R1" if name.startswith("R1") else "R2", []).append(name)
    return fm_project(sys, ["R1", "R2"], totals=groups)


# --------------------------------------------------------------- 2-D regions


def clip_polygon(poly, n, c):
    """Sutherland-Hodgman clip of a convex polygon against ``n . x <= c``."""
    if not poly:
        return poly
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp = n[0] * p[0] + n[1] * p[1] - c
        fq = n[0] * q[0] + n[1] * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _merge(vertices, radius=MERGE_RADIUS):
    out = []
    for v in vertices:
        if not out or math.dist(v, out[-1]) > radius:
            out.append(v)
    while len(out) > 1 and math.dist(out[0], out[-1]) <= radius:
        out.pop()
    return out


def polygon_from_samples(samples):
    """Vertex chain of ``{R >= 0} ∩ {a R1 + b R2 <= c}`` for the given samples.

    The fan must contain both axis directions; their values bound the
    starting box, which is then clipped by every sampled halfspace.
    """
    by_dir = {(a, b): c for a, b, c in samples}
    if (1.0, 0.0) not in by_dir or (0.0, 1.0) not in by_dir:
        raise InvalidInputError("sample fan must include both axis directions")
    x_max, y_max = max(by_dir[(1.0, 0.0)], 0.0), max(by_dir[(0.0, 1.0)], 0.0)
    poly = [(0.0, 0.0), (x_max, 0.0), (x_max, y_max), (0.0, y_max)]
    for a, b, c in samples:
        if a > 0 and b > 0:
            poly = clip_polygon(poly, (a, b), c)
    poly = _merge(poly)
    V = np.array(poly, dtype=float).reshape(-1, 2)
    if len(samples):
        S = np.array(samples, dtype=float)
        slack = V @ S[:, :2].T - S[:, 2]
        scale = max(1.0, float(np.abs(S[:, 2]).max()))
        V = V[np.all(slack <= VERTEX_TOL * scale, axis=1)]
    return V


@dataclass
class Region2D:
    """Sampled support function plus the polygon it defines."""

    samples: list
    vertices: np.ndarray
    certificates: list = field(default_factory=list, repr=False)

    def support(self, a, b):
        if len(self.vertices) == 0:
            return float("-inf")
        return float(np.max(self.vertices @ np.array([a, b], dtype=float)))

    def area(self):
        V = self.vertices
        if len(V) < 3:
            return 0.0
        x, y = V[:, 0], V[:, 1]
        return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

    def sample_value(self, a, b):
        for sa, sb, c in self.samples:
            if sa == a and sb == b:
                return c
        raise KeyError((a, b))

    def is_convex_sampled(self, tol=1e-9):
        """Sublinearity of the sampled support function on adjacent triples."""
        s = sorted(self.samples, key=lambda t: math.atan2(t[1], t[0]))
        for (a0, b0, c0), (a1, b1, c1), (a2, b2, c2) in zip(s, s[1:], s[2:]):
            det = a0 * b2 - a2 * b0
            if abs(det) < 1e-15:
                continue
            al = (a1 * b2 - a2 * b1) / det
            be = (a0 * b1 - a1 * b0) / det
            if c1 > al * c0 + be * c2 + tol * max(1.0, abs(c1)):
                return False
        return True

    def in_quadrant(self, tol=1e-9):
        return bool(np.all(self.vertices >= -tol))


def fan(directions=DEFAULT_DIRECTIONS):
    """Uniform angles on ``[0, pi/2]`` with exact axis directions."""
    if directions < 3:
        raise InvalidInputError(f"need at least 3 directions, got {directions}")
    out = []
    for i in range(directions):
        if i == 0:
            out.append((1.0, 0.0))
        elif i == directions - 1:
            out.append((0.0, 1.0))
        else:
            t = 0.5 * math.pi * i / (directions - 1)
            out.append((math.cos(t), math.sin(t)))
    return out


def sweep_region(oracle, directions=DEFAULT_DIRECTIONS, refine=True, max_extra=None):
    """Sample a support oracle on the nonnegative fan and build the region.

    ``oracle(a, b)`` returns ``(c, point, extra)`` where ``point`` is a
    maximiser projected to ``(R1, R2)`` and ``extra`` is stored alongside the
    sample (typically the certificate). With ``refine`` the fan is extended
    by the normals of segments joining adjacent maximisers until every
    adjacent pair shares a face, which makes the polygon exact.
    """
    dirs = fan(directions)
    entries = []
    for a, b in dirs:
        c, p, extra = oracle(a, b)
        entries.append((math.atan2(b, a), a, b, c, np.asarray(p, float), extra))
    if refine:
        budget = 4 * directions + 64 if max_extra is None else max_extra
        scale = max(1.0, max(abs(e[3]) for e in entries))
        i = 0
        while i < len(entries) - 1 and budget > 0:
            t0, _, _, _, p0, _ = entries[i]
            t1, _, _, _, p1, _ = entries[i + 1]
            e = p1 - p0
            if np.hypot(*e) <= 1e-9 * scale:
                i += 1
                continue
            n = np.array([e[1], -e[0]])
            if n[0] < 0 or n[1] < 0:
                i += 1
                continue
            n /= np.hypot(*n)
            tn = math.atan2(n[1], n[0])
            if not (t0 + 1e-12 < tn < t1 - 1e-12):
                i += 1
                continue
            a, b = float(n[0]), float(n[1])
            c, p, extra = oracle(a, b)
            budget -= 1
            entries.insert(i + 1, (tn, a, b, c, np.asarray(p, float), extra))
            if c <= float(n @ p0) + 1e-9 * scale:
                i += 2
    samples = [(a, b, c) for _, a, b, c, _, _ in entries]
    verts = polygon_from_samples(samples)
    return Region2D(samples, verts, [e[5] for e in entries])


def polygon_from_halfspaces(hs: HalfspaceSystem, tol=1e-9):
    """Vertices of a bounded 2-D halfspace system by pairwise intersection."""
    A, b = hs.A, hs.b
    scale = max(1.0, float(np.abs(b).max())) if b.size else 1.0
    pts = []
    for i in range(b.size):
        for j in range(i + 1, b.size):
            M = np.array([A[i], A[j]])
            if abs(np.linalg.det(M)) < 1e-12:
                continue
            x = np.linalg.solve(M, [b[i], b[j]])
            if np.all(A @ x <= b + tol * scale):
                pts.append(x)
    if not pts:
        return np.zeros((0, 2))
    P = np.array(pts)
    uniq = []
    for p in P:
        if all(np.hypot(*(p - q)) > MERGE_RADIUS for q in uniq):
            uniq.append(p)
    P = np.array(uniq)
    ctr = P.mean(axis=0)
    ang = np.arctan2(P[:, 1] - ctr[1], P[:, 0] - ctr[0])
    return P[np.argsort(ang)]


def _cross(u, v):
    return float(u[0] * v[1] - u[1] * v[0])


def _seg_dist(p, a, b):
    ab = b - a
    L = float(ab @ ab)
    t = 0.0 if L == 0 else min(1.0, max(0.0, float((p - a) @ ab) / L))
    return float(np.hypot(*(p - (a + t * ab))))


def point_polygon_distance(p, V):
    p = np.asarray(p, float)
    k = len(V)
    if k == 0:
        return float("inf")
    if k == 1:
        return float(np.hypot(*(p - V[0])))
    if k >= 3:
        ctr = V.mean(axis=0)
        orient = math.copysign(1.0, _cross(V[1] - V[0], ctr - V[0]))
        inside = all(orient * _cross(V[(i + 1) % k] - V[i], p - V[i]) >= -1e-12 for i in range(k))
        if inside:
            return 0.0
    return min(_seg_dist(p, V[i], V[(i + 1) % k]) for i in range(k))


def hausdorff(P, Q):
    """Hausdorff distance between two convex polygons given by vertices."""
    P, Q = np.asarray(P, float).reshape(-1, 2), np.asarray(Q, float).reshape(-1, 2)
    d1 = max((point_polygon_distance(p, Q) for p in P), default=0.0)
    d2 = max((point_polygon_distance(q, P) for q in Q), default=0.0)
    return max(d1, d2)
