"""Gap constants and the shrink-containment certificate."""

from dataclasses import dataclass, field

import numpy as np

from .bounds import gaussian_evaluator, inner_constants, inner_region, outer_constants, outer_region
from .channel_model import CompoundChannel, canonicalize
from .gaussian_stats import MISpec, S, U, X
from .inequality_gen import system_for
from .polytope import DEFAULT_DIRECTIONS

SHRINK_TOL = 1e-6
GAP_TOL = 1e-7


def compute_delta(ev, n_states):
    """``(delta1, delta2)``: worst-state ``I(X_o; S_{o,n} | U_{o,n})`` per receiver.

    ``delta1`` bounds what user 2's interference costs user 1 and so uses
    the user-2 chain; ``delta2`` is the mirror image.
    """
    def worst(k):
        return max(ev.mi(MISpec({S(k, n)}, {X(k)}, {U(k, n)})) for n in range(1, n_states + 1))

    return worst(2), worst(1)


@dataclass
class GapReport:
    delta1: float
    delta2: float
    per_direction_max_gap: float
    certified: bool
    failures: list = field(default_factory=list)
    n_directions: int = 0
    dominated_failures: list = field(default_factory=list)
    inner: object = field(default=None, repr=False)
    outer: object = field(default=None, repr=False)

    def to_text(self):
        lines = [
            f"delta1: {self.delta1:.6f}",
            f"delta2: {self.delta2:.6f}",
            f"per_direction_max_gap: {self.per_direction_max_gap:.6f}",
            f"directions: {self.n_directions}",
            f"certified: {str(self.certified).lower()}",
        ]
        lines.append(f"shrink_above_delta: {'ok' if not self.dominated_failures else 'failed'}")
        lines += [f"failure: {f}" for f in self.failures]
        return "\n".join(lines) + "\n"

    def summary_row(self):
        return {
            "delta1": f"{self.delta1:.6f}",
            "delta2": f"{self.delta2:.6f}",
            "per_direction_max_gap": f"{self.per_direction_max_gap:.6f}",
            "certified": str(self.certified).lower(),
        }


def _inner_slack(inner, w):
    S_in = np.array(inner.samples, dtype=float)
    slack = S_in[:, :2] @ w - S_in[:, 2]
    i = int(np.argmax(slack))
    return tuple(S_in[i, :2]), float(slack[i])


def shrink_violations(inner, outer, delta1, delta2, tol=SHRINK_TOL):
    """Outer vertices that, moved down by the deltas and clipped at zero,
    break a sampled inner support constraint."""
    d = np.array([delta1, delta2])
    bad = []
    for v in outer.vertices:
        direction, slack = _inner_slack(inner, np.maximum(v - d, 0.0))
        if slack > tol:
            bad.append((tuple(float(x) for x in v), direction, slack))
    return bad


def dominated_shrink_violations(inner, outer, delta1, delta2, tol=SHRINK_TOL):
    """Same test restricted to the part of the outer region above the deltas.

    Only there does the shifted point stay nonnegative, so no clipping is
    involved. Vertices of the outer polygon cut by ``R >= delta`` are used.
    """
    from .polytope import clip_polygon

    d = np.array([delta1, delta2])
    poly = [tuple(v) for v in outer.vertices]
    for normal, rhs in (((-1.0, 0.0), -delta1), ((0.0, -1.0), -delta2)):
        poly = clip_polygon(poly, normal, rhs)
        if not poly:
            return []
    bad = []
    for v in poly:
        direction, slack = _inner_slack(inner, np.asarray(v, float) - d)
        if slack > tol:
            bad.append((tuple(float(x) for x in v), direction, slack))
    return bad


def certify_evaluator(system, ev, delta1, delta2, directions=DEFAULT_DIRECTIONS, max_delta=1.0):
    """Run both sweeps on an evaluator and check every gap property.

    The per-direction gap is measured on each outer certificate: the same
    multipliers priced with outer and inner constants.
    """
    inner = inner_region(system, ev, directions)
    outer = outer_region(system, ev, directions)
    failures = []
    for name, d in (("delta1", delta1), ("delta2", delta2)):
        if not (0.0 <= d < max_delta or (max_delta == 0.0 and d == 0.0)):
            failures.append(f"{name} out of range: {d!r}")

    for a, b, _ in outer.samples:
        hi, ho = inner.support(a, b), outer.support(a, b)
        if ho < hi - GAP_TOL:
            failures.append(f"outer support below inner at ({a:.6g}, {b:.6g}): {ho!r} < {hi!r}")

    rin = inner_constants(system, ev)
    rout = outer_constants(system, ev)
    worst = 0.0
    dmax = max(delta1, delta2)
    for cert in outer.certificates:
        a, b = cert.direction
        diff = float(cert.weights @ (rout - rin))
        if diff < -GAP_TOL or diff > a * delta1 + b * delta2 + SHRINK_TOL:
            failures.append(f"certificate gap {diff:.9g} outside [0, a*d1 + b*d2] at ({a:.6g}, {b:.6g})")
        if a + b > 0:
            g = diff / (a + b)
            worst = max(worst, g)
            if g > dmax + GAP_TOL:
                failures.append(f"normalised gap {g:.9g} exceeds max delta {dmax:.9g} at ({a:.6g}, {b:.6g})")

    for v, d, s in shrink_violations(inner, outer, delta1, delta2):
        failures.append(f"shrunk vertex {v} violates inner direction {d} by {s:.3e}")

    dominated = [f"shrunk vertex {v} violates inner direction {d} by {s:.3e}"
                 for v, d, s in dominated_shrink_violations(inner, outer, delta1, delta2)]
    return GapReport(delta1, delta2, worst, not failures, failures, len(outer.samples),
                     dominated_failures=dominated, inner=inner, outer=outer)


def certify(ch: CompoundChannel, directions=DEFAULT_DIRECTIONS) -> GapReport:
    """One-bit certificate for a Gaussian compound channel."""
    ch = canonicalize(ch)
    g = gaussian_evaluator(ch)
    d1, d2 = compute_delta(g, ch.n_states)
    return certify_evaluator(system_for(ch.n_states), g, d1, d2, directions)
