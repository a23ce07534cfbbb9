"""Randomised property checks shared by the ``verify`` command and the tests."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import gaussian_dominance_check, gaussian_evaluator, inner_constants, inner_region
from .det_oracle import det_certify, fixture_channels
from .gap import certify
from .inequality_gen import CONDITIONAL, system_for
from .instances import random_channel
from .lp import maximize_free
from .polytope import (
    ValuedSystem,
    two_state_identities,
    dual_min,
    fan,
    hausdorff,
    level_identities,
    polygon_from_halfspaces,
    project_totals,
    support_value,
)
from .rebalance import rebalance, user_sums


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    count: int
    detail: list = field(default_factory=list)
    certificates: list = field(default_factory=list, repr=False)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: worst={self.worst:.3e} tol={self.tolerance:g} n={self.count}"


def identity_residual(cert, system):
    if system.n_states == 2:
        return max(abs(r) for r in two_state_identities(cert))
    return max(abs(r) for r in level_identities(cert, system))


def duality(rng, channels=50, directions=37, tol=1e-7):
    """Primal support value against the dual minimum."""
    system = system_for(2)
    worst, detail, certs = 0.0, [], []
    for _ in range(channels):
        ev = gaussian_evaluator(random_channel(rng, 2))
        valued = ValuedSystem(system, inner_constants(system, ev))
        hs = valued.halfspaces()
        for a, b in fan(directions):
            c, _ = support_value(hs, a, b)
            cert = dual_min(valued, a, b)
            err = abs(c - cert.objective)
            worst = max(worst, err)
            if err > tol:
                detail.append(f"({a:.6g}, {b:.6g}): primal {c!r} dual {cert.objective!r}")
            if cert.in_lambda_prime():
                certs.append((cert, system))
    return CheckResult("strong duality", not detail, worst, tol, channels * directions, detail, certs)


def projection(rng, instances=20, directions=361, tol=1e-6):
    """Fourier-Motzkin polygon against the support sweep."""
    system = system_for(2)
    worst, detail = 0.0, []
    for i in range(instances):
        ev = gaussian_evaluator(random_channel(rng, 2))
        hs = ValuedSystem(system, inner_constants(system, ev)).halfspaces()
        fm = polygon_from_halfspaces(project_totals(hs))
        sweep = inner_region(system, ev, directions)
        d = hausdorff(fm, sweep.vertices)
        worst = max(worst, d)
        if d > tol:
            detail.append(f"instance {i}: Hausdorff {d:.3e}")
    return CheckResult("projection cross-check", not detail, worst, tol, instances, detail)


def one_bit(rng, instances=100, states=(1, 2, 3), directions=361, tol=1e-6):
    """Deltas under one bit and clipped vertex shrink into the inner region."""
    worst, detail, certs = 0.0, [], []
    for i in range(instances):
        n = states[i % len(states)]
        rep = certify(random_channel(rng, n), directions)
        system = system_for(n)
        if not (rep.delta1 < 1.0 and rep.delta2 < 1.0):
            detail.append(f"instance {i} (N={n}): deltas {rep.delta1!r}, {rep.delta2!r}")
        shrink = [f for f in rep.failures if f.startswith("shrunk")]
        for f in shrink:
            worst = max(worst, float(f.rsplit(" ", 1)[1]))
        if shrink:
            detail.append(f"instance {i} (N={n}): {len(shrink)} shrunk vertices outside, first: {shrink[0]}")
        certs += [(c, system) for c in rep.outer.certificates + rep.inner.certificates if c.in_lambda_prime()]
    return CheckResult("one-bit shrink", not detail, worst, tol, instances, detail, certs)


def identities(certificates, tol=1e-8):
    worst, detail = 0.0, []
    for cert, system in certificates:
        r = identity_residual(cert, system)
        worst = max(worst, r)
        if r > tol:
            detail.append(f"direction {cert.direction}: residual {r:.3e}")
    return CheckResult("dual identities", not detail, worst, tol, len(certificates), detail)


def random_feasible_point(rng, system, rhs, draws=3, shrink=1e-6):
    """Random mix of LP vertices of the projected system, as exact fractions."""
    A = np.vstack([system.coefficient_matrix(), -system.nonneg_matrix()])
    b = np.concatenate([rhs, np.zeros(system.nonneg_matrix().shape[0])])
    verts = [maximize_free(rng.normal(size=system.dim), A, b).x for _ in range(draws)]
    w = rng.dirichlet(np.ones(draws))
    x = sum(wi * v for wi, v in zip(w, verts)) * (1.0 - shrink)
    out = [Fraction(float(v)) for v in x]
    # rounding can leave a zero user total at -1e-16; lift it exactly to zero
    m = system.n_states + 1
    for k in (0, 1):
        total = sum(out[k * m:(k + 1) * m])
        if total < 0:
            out[k * m] -= total
    return out


def rebalancing(rng, trials=1000, n_states=2, tol=1e-9):
    """Nonnegative, guarded-feasible outputs with exact user totals."""
    proj = system_for(n_states)
    cond = system_for(n_states, CONDITIONAL)
    detail, done, worst = [], 0, 0.0
    while done < trials:
        rhs = proj.evaluate(gaussian_evaluator(random_channel(rng, n_states)))
        v = random_feasible_point(rng, proj, rhs)
        if min(v) >= 0:
            continue
        done += 1
        out = rebalance(v, proj, rhs, tol=tol)
        if user_sums(out, n_states) != user_sums(v, n_states):
            detail.append(f"trial {done}: user totals changed")
        if min(out) < 0:
            detail.append(f"trial {done}: negative component {float(min(out)):.3e}")
        for tag, lhs, r in cond.violations(out, rhs, tol=tol):
            excess = float(lhs) - float(r)
            worst = max(worst, excess)
            detail.append(f"trial {done}: {tag} exceeded by {excess:.3e}")
    return CheckResult("rebalance", not detail, worst, tol, trials, detail)


def dominance(rng, channels=10, trials=20, certificates=10, tol=1e-3):
    worst, detail = -np.inf, []
    for i in range(channels):
        rep = gaussian_dominance_check(random_channel(rng, 2), trials, certificates,
                                       seed=int(rng.integers(2 ** 31)), tolerance=tol)
        worst = max(worst, rep.max_violation)
        if not rep.passed:
            detail.append(f"channel {i}: violation {rep.max_violation:.3e}")
    return CheckResult("gaussian dominance", not detail, float(worst), tol, channels * trials * certificates, detail)


def deterministic(directions=361, tol=1e-9):
    worst, detail = 0.0, []
    fx = fixture_channels()
    for name, (ch, dist) in fx.items():
        rep = det_certify(ch, dist, directions)
        worst = max(worst, rep.per_direction_max_gap)
        if rep.delta1 != 0.0 or rep.delta2 != 0.0:
            detail.append(f"{name}: deltas {rep.delta1!r}, {rep.delta2!r}")
        if not rep.certified:
            detail.append(f"{name}: {rep.failures[0]}")
    return CheckResult("deterministic exactness", not detail, worst, tol, len(fx), detail)


def suite(seed=42, quick=True):
    """The property suite run by ``cgic --command verify``."""
    rng = np.random.default_rng(seed)
    scale = 1 if quick else 5
    d = duality(rng, channels=4 * scale, directions=37)
    results = [
        d,
        identities(d.certificates),
        projection(rng, instances=2 * scale),
        rebalancing(rng, trials=100 * scale),
        dominance(rng, channels=1 * scale, trials=4, certificates=5),
        deterministic(),
    ]
    return results
