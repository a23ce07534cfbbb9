"""Finite-state compound Gaussian interference channels.

Receiver 1 sees ``Y1 = h11 X1 + h21 X2 + Z1`` and receiver 2 sees
``Y2 = h12 X1 + h22 X2 + Z2`` with unit-variance circular complex noise.
Each receiver has its own finite list of gain pairs; only these marginal
lists matter, so a channel is stored per receiver rather than as joint
4-tuples.

Canonical form sorts each list by decreasing cross-gain magnitude (state 1
carries the strongest interference) and pads the shorter list by repeating
its last entry, so both receivers have ``N`` states.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvariantViolation


@dataclass(frozen=True)
class GainState:
    """One joint channel state ``(h11, h21, h12, h22)``."""

    h11: complex
    h21: complex
    h12: complex
    h22: complex

    def __post_init__(self):
        for name in ("h11", "h21", "h12", "h22"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidInputError(f"gain {name} is not finite: {v!r}")
            object.__setattr__(self, name, v)


def _check_pair_list(pairs, label):
    out = []
    for i, pair in enumerate(pairs):
        if len(pair) != 2:
            raise InvalidInputError(f"{label}[{i}] must be a (direct, cross) pair")
        a, b = complex(pair[0]), complex(pair[1])
        for v in (a, b):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidInputError(f"{label}[{i}] has a non-finite gain")
        out.append((a, b))
    if not out:
        raise InvalidInputError(f"{label} is empty")
    return tuple(out)


@dataclass(frozen=True)
class CompoundChannel:
    """Per-receiver state lists plus transmit powers (linear scale).

    ``states_rx1`` holds ``(h11, h21)`` pairs and ``states_rx2`` holds
    ``(h12, h22)`` pairs, matching the order in which the gains appear in
    the two receive equations.
    """

    states_rx1: tuple
    states_rx2: tuple
    p1: float
    p2: float

    def __post_init__(self):
        object.__setattr__(self, "states_rx1", _check_pair_list(self.states_rx1, "states_rx1"))
        object.__setattr__(self, "states_rx2", _check_pair_list(self.states_rx2, "states_rx2"))
        for name in ("p1", "p2"):
            p = float(getattr(self, name))
            if not math.isfinite(p) or p < 0.0:
                raise InvalidInputError(f"{name} must be a finite nonnegative power, got {p!r}")
            object.__setattr__(self, name, p)

    @property
    def n_states(self):
        if len(self.states_rx1) != len(self.states_rx2):
            raise InvalidInputError("state lists differ in length; canonicalize first")
        return len(self.states_rx1)

    def cross_gains(self, k):
        """Gains through which transmitter ``k`` interferes, per state."""
        if k == 1:
            return np.array([s[0] for s in self.states_rx2])
        return np.array([s[1] for s in self.states_rx1])

    def direct_gains(self, k):
        if k == 1:
            return np.array([s[0] for s in self.states_rx1])
        return np.array([s[1] for s in self.states_rx2])

    def is_canonical(self):
        return canonicalize(self) == self


def _rx1_key(pair):
    direct, cross = pair
    return (-abs(cross), -abs(direct), cmath.phase(cross), cmath.phase(direct))


def _rx2_key(pair):
    cross, direct = pair
    return (-abs(cross), -abs(direct), cmath.phase(cross), cmath.phase(direct))


def canonicalize(raw: CompoundChannel) -> CompoundChannel:
    """Sort by decreasing interference and pad both lists to a common ``N``."""
    rx1 = sorted(raw.states_rx1, key=_rx1_key)
    rx2 = sorted(raw.states_rx2, key=_rx2_key)
    n = max(len(rx1), len(rx2))
    rx1 += [rx1[-1]] * (n - len(rx1))
    rx2 += [rx2[-1]] * (n - len(rx2))
    return CompoundChannel(tuple(rx1), tuple(rx2), raw.p1, raw.p2)


def from_joint(states, p1, p2) -> CompoundChannel:
    """Collapse joint 4-tuples to the product of their receiver marginals.

    Decoding at receiver ``k`` only depends on the pair that receiver sees,
    so the compound channel over joint tuples has the same capacity region
    as the one over the product of the two marginal sets.
    """
    rx1, rx2 = [], []
    for s in states:
        if not isinstance(s, GainState):
            s = GainState(*s)
        if (s.h11, s.h21) not in rx1:
            rx1.append((s.h11, s.h21))
        if (s.h12, s.h22) not in rx2:
            rx2.append((s.h12, s.h22))
    if not rx1:
        raise InvalidInputError("no joint states given")
    return CompoundChannel(tuple(rx1), tuple(rx2), p1, p2)


@dataclass(frozen=True)
class DegradedChain:
    """Markov representation of the interference seen across states.

    For user ``k`` (index ``k-1`` in the arrays), ``S_{k,1} = c_1 X_k + Z``
    and ``S_{k,n} = ratio[n-2] S_{k,n-1} + residual[n-2] Z'`` for ``n >= 2``,
    each stage carrying unit total noise variance.
    """

    n_states: int
    p: tuple
    cross: tuple
    ratio: tuple
    residual: tuple
    direct: tuple

    def stage_variances(self, k):
        """Marginal variance of ``S_{k,n}`` propagated through the chain."""
        i = k - 1
        v = abs(self.cross[i][0]) ** 2 * self.p[i] + 1.0
        out = [v]
        for r, s in zip(self.ratio[i], self.residual[i]):
            v = abs(r) ** 2 * v + s * s
            out.append(v)
        return np.array(out)


def build_degraded_chain(ch: CompoundChannel) -> DegradedChain:
    if not ch.is_canonical():
        raise InvalidInputError("channel must be canonicalized before building the chain")
    n = ch.n_states
    cross, ratio, residual, direct = [], [], [], []
    for k in (1, 2):
        c = ch.cross_gains(k)
        r = np.zeros(n - 1, dtype=complex)
        for t in range(1, n):
            if c[t - 1] == 0:
                if c[t] != 0:
                    raise InvariantViolation(f"user {k}: nonzero cross gain after a zero one")
                r[t - 1] = 0.0
            else:
                r[t - 1] = c[t] / c[t - 1]
        mag = np.abs(r)
        if np.any(mag > 1.0 + 1e-12):
            raise InvariantViolation(f"user {k}: degradation ratio above one: {mag.max()!r}")
        mag = np.minimum(mag, 1.0)
        cross.append(c)
        ratio.append(r)
        residual.append(np.sqrt(1.0 - mag ** 2))
        direct.append(ch.direct_gains(k))
    return DegradedChain(n, (ch.p1, ch.p2), tuple(cross), tuple(ratio), tuple(residual), tuple(direct))
