"""Inner and outer bounds per direction, their regions, and the
Gaussian-input dominance check for the outer bound.

An *evaluator* is any object with ``mi(spec)``, ``entropy(targets, given)``
and ``noise_entropy(k, n)``; :class:`~cgic.gaussian_stats.GaussianSystem`
and the deterministic evaluator both qualify.

For constraint ``i`` at receiver ``(k, n)`` with conditioning set ``V_i``
the outer constant is ``h(Y_{k,n} | V_i) - h(S_{o,n} | X_o)`` where ``o`` is
the other user. It exceeds the inner constant by exactly
``I(X_o; S_{o,n} | U_{o,n})``, which is what makes the gap computable.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .channel_model import CompoundChannel, build_degraded_chain, canonicalize
from .errors import InvalidInputError, NumericalDegeneracyError, PreconditionError
from .gaussian_stats import GaussianSystem, build_system
from .inequality_gen import ConstraintSystem, system_for
from .polytope import DEFAULT_DIRECTIONS, DualCertificate, ValuedSystem, dual_min, fan, sweep_region


def gaussian_evaluator(ch: CompoundChannel) -> GaussianSystem:
    ch = canonicalize(ch)
    return build_system(build_degraded_chain(ch))


def inner_constants(system: ConstraintSystem, ev):
    return system.evaluate(ev)


def outer_constants(system: ConstraintSystem, ev):
    out = []
    for c in system.constraints:
        k, n = c.receiver
        (target,) = c.mi.targets
        out.append(ev.entropy({target}, c.mi.given) - ev.noise_entropy(3 - k, n))
    return np.array(out)


def gap_terms(system: ConstraintSystem, ev):
    """Per-constraint ``I(X_o; S_{o,n} | U_{o,n})``."""
    from .gaussian_stats import MISpec, S, U, X

    return np.array([ev.mi(MISpec({S(3 - c.receiver[0], c.receiver[1])}, {X(3 - c.receiver[0])},
                                  {U(3 - c.receiver[0], c.receiver[1])}))
                     for c in system.constraints])


def c_in(cert: DualCertificate, system: ConstraintSystem, ev, constants=None):
    if constants is None:
        constants = inner_constants(system, ev)
    return float(cert.weights @ constants)


def c_out(cert: DualCertificate, system: ConstraintSystem, ev, constants=None):
    if not cert.in_lambda_prime():
        raise PreconditionError(f"outer bound needs an omega-free certificate, got omega={cert.omega.tolist()}")
    if constants is None:
        constants = outer_constants(system, ev)
    return float(cert.weights @ constants)


@dataclass(frozen=True)
class BoundValue:
    direction: tuple
    certificate: DualCertificate
    c_in: float
    c_out: float


def bound_value(system: ConstraintSystem, ev, a, b):
    """Both bounds on the omega-free certificate that is optimal for the inner LP."""
    rin = inner_constants(system, ev)
    cert = dual_min(ValuedSystem(system, rin), a, b, allow_omega=False)
    return BoundValue((a, b), cert, c_in(cert, system, ev, rin), c_out(cert, system, ev))


def _oracle(valued, allow_omega):
    n1 = valued.system.n_states + 1

    def call(a, b):
        cert = dual_min(valued, a, b, allow_omega=allow_omega)
        p = cert.point
        return cert.objective, (p[:n1].sum(), p[n1:].sum()), cert

    return call


def inner_region(system: ConstraintSystem, ev, directions=DEFAULT_DIRECTIONS, refine=True):
    valued = ValuedSystem(system, inner_constants(system, ev))
    return sweep_region(_oracle(valued, True), directions, refine)


def outer_region(system: ConstraintSystem, ev, directions=DEFAULT_DIRECTIONS, refine=True):
    valued = ValuedSystem(system, outer_constants(system, ev))
    return sweep_region(_oracle(valued, False), directions, refine)


def region_inner(ch: CompoundChannel, directions=DEFAULT_DIRECTIONS, refine=True):
    """Inner-bound region of a channel with Gaussian inputs."""
    ch = canonicalize(ch)
    return inner_region(system_for(ch.n_states), gaussian_evaluator(ch), directions, refine)


def region_outer(ch: CompoundChannel, directions=DEFAULT_DIRECTIONS, refine=True):
    """Genie-aided outer-bound region with Gaussian inputs."""
    ch = canonicalize(ch)
    return outer_region(system_for(ch.n_states), gaussian_evaluator(ch), directions, refine)


# ------------------------------------------------------------ dominance check

GH_NODES = 64
GH_WEIGHT_FLOOR = 1e-18


@functools.lru_cache(maxsize=None)
def _gh_rule(r, nodes=GH_NODES):
    """Product Gauss-Hermite rule for the standard normal in ``r`` dimensions.

    Product nodes whose weight is below ``GH_WEIGHT_FLOOR`` are dropped;
    their total mass is far below the quadrature error.
    """
    x, w = np.polynomial.hermite.hermgauss(nodes)
    x = x * math.sqrt(2.0)
    w = w / math.sqrt(math.pi)
    if r == 1:
        P, W = x[:, None], w
    else:
        X1, X2 = np.meshgrid(x, x, indexing="ij")
        P, W = np.column_stack([X1.ravel(), X2.ravel()]), np.outer(w, w).ravel()
    keep = W >= GH_WEIGHT_FLOOR
    P, W = np.ascontiguousarray(P[keep]), W[keep]
    P.flags.writeable = False
    W.flags.writeable = False
    return P, W


@dataclass(frozen=True)
class DiscreteInput:
    """Finite constellation ``X = sqrt(P) * exp(i theta) * s`` with ``E s^2 <= 1``."""

    points: np.ndarray
    probs: np.ndarray
    phase: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, float)
        pr = np.asarray(self.probs, float)
        if pts.shape != pr.shape or pts.ndim != 1 or pts.size == 0:
            raise InvalidInputError("constellation points and probabilities must be equal-length vectors")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise InvalidInputError("probabilities must be nonnegative and sum to 1")
        if float(pr @ pts ** 2) > 1.0 + 1e-12:
            raise InvalidInputError("constellation exceeds unit normalised power")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", pr)

    def symbols(self):
        return np.exp(1j * self.phase) * self.points

    @classmethod
    def random(cls, rng, max_points=4, scale=1.0):
        k = int(rng.integers(2, max_points + 1))
        pts = rng.uniform(-1.0, 1.0, size=k)
        pr = rng.dirichlet(np.ones(k))
        mean = pr @ pts
        pts = pts - mean
        p = float(pr @ pts ** 2)
        if p <= 1e-9:
            pts = np.linspace(-1, 1, k)
            p = float(pr @ pts ** 2)
        pts = pts * (math.sqrt(scale / p))
        return cls(pts, pr, float(rng.uniform(0, 2 * math.pi)))


class DiscreteInputEvaluator:
    """Entropies of the model variables when the inputs are discrete.

    Conditioned on the input pair, any set of variables is jointly Gaussian
    with a fixed covariance, so its law is a finite Gaussian mixture. After
    whitening, the mixture means span at most two real dimensions; the
    entropy is the quadrature value on that span plus the Gaussian entropy
    of the orthogonal complement.
    """

    def __init__(self, g: GaussianSystem, inputs, nodes=GH_NODES):
        self.g = g
        self.inputs = inputs
        self.nodes = nodes
        s1, s2 = inputs[0].symbols(), inputs[1].symbols()
        p1, p2 = inputs[0].probs, inputs[1].probs
        self._xi = np.array([(a, b) for a in s1 for b in s2])
        w = np.array([u * v for u in p1 for v in p2])
        keep = w > 0
        self._xi, self._w = self._xi[keep], w[keep]
        self._cache = {}

    def entropy(self, targets, given=()):
        targets, given = frozenset(targets), frozenset(given)
        key = (targets, given)
        if key not in self._cache:
            both = self._joint_entropy(targets | given)
            self._cache[key] = both - (self._joint_entropy(given) if given else 0.0)
        return self._cache[key]

    def noise_entropy(self, k, n):
        # S_{k,n} given X_k is the same Gaussian noise whatever the input law
        return self.g.noise_entropy(k, n)

    def _joint_entropy(self, vs):
        from .kernels import mixture_entropy

        idx = self.g.index(frozenset(vs))
        L = self.g.loading[idx]
        mean = self._xi @ L[:, :2].T
        N = L[:, 2:]
        C = N @ N.conj().T
        d = len(idx)
        Cr = 0.5 * np.block([[C.real, -C.imag], [C.imag, C.real]])
        ev, V = np.linalg.eigh(Cr)
        if ev.min() <= 1e-12 * max(1.0, ev.max()):
            raise NumericalDegeneracyError(f"noise covariance of {sorted(vs)} is singular")
        Wh = V @ np.diag(ev ** -0.5) @ V.T
        mr = np.hstack([mean.real, mean.imag]) @ Wh.T
        centre = self._w @ mr
        mc = mr - centre
        _, sv, vt = np.linalg.svd(mc, full_matrices=False)
        r = int(np.sum(sv > 1e-10 * max(1.0, sv.max(initial=0.0))))
        D = 2 * d
        h_white = 0.5 * D * math.log2(2 * math.pi * math.e)
        if r > 0:
            if r > 2:
                raise NumericalDegeneracyError(f"mixture means span {r} dimensions; expected at most 2")
            B = vt[:r].T
            proj = mc @ B
            nodes, node_w = _gh_rule(r, self.nodes)
            h_r = mixture_entropy(proj, np.log(self._w), nodes, node_w) / math.log(2.0)
            h_white += h_r - 0.5 * r * math.log2(2 * math.pi * math.e)
        return h_white + 0.5 * float(np.sum(np.log2(ev)))


@dataclass
class DominanceReport:
    checks: int
    max_violation: float
    tolerance: float
    details: list = field(default_factory=list, repr=False)

    @property
    def passed(self):
        return self.max_violation <= self.tolerance


def sample_certificates(system: ConstraintSystem, ev, count):
    valued = ValuedSystem(system, inner_constants(system, ev))
    return [dual_min(valued, a, b, allow_omega=False) for a, b in fan(max(count, 3))[:count]]


def gaussian_dominance_check(ch: CompoundChannel, trials=20, certificates=10, seed=0, tolerance=1e-3,
                             power_scale=None):
    """Compare outer constants under random discrete inputs with the Gaussian ones.

    For each trial a pair of random constellations (2 to 4 points, power
    matched, or scaled by ``power_scale`` when given) is drawn, and the
    outer bound of each sampled certificate is evaluated under both laws.
    """
    if trials < 1:
        raise InvalidInputError("need at least one trial")
    ch = canonicalize(ch)
    rng = np.random.default_rng(seed)
    system = system_for(ch.n_states)
    g = gaussian_evaluator(ch)
    certs = sample_certificates(system, g, certificates)
    gauss = outer_constants(system, g)
    ref = [c_out(cert, system, g, gauss) for cert in certs]
    worst = -math.inf
    details = []
    for t in range(trials):
        scale = power_scale if power_scale is not None else 1.0
        inputs = (DiscreteInput.random(rng, scale=scale), DiscreteInput.random(rng, scale=scale))
        disc = outer_constants(system, DiscreteInputEvaluator(g, inputs))
        for cert, r in zip(certs, ref):
            v = c_out(cert, system, None, disc) - r
            worst = max(worst, v)
            details.append((t, cert.direction, v))
    return DominanceReport(len(details), worst, tolerance, details)
