import numpy as np
import pytest

from cgic.channel_model import CompoundChannel, GainState, build_degraded_chain, canonicalize, from_joint
from cgic.errors import InvalidInputError, InvariantViolation


def test_canonical_order_and_padding():
    ch = CompoundChannel([(1, 0.1), (1, 0.9), (1, 0.5)], [(0.2, 1)], 1.0, 2.0)
    c = canonicalize(ch)
    assert [abs(g) for g in c.cross_gains(2)] == pytest.approx([0.9, 0.5, 0.1])
    assert c.n_states == 3
    assert list(c.cross_gains(1)) == [0.2, 0.2, 0.2]
    assert c.is_canonical()
    assert not ch.is_canonical()


def test_canonicalize_is_idempotent(rng):
    from cgic.instances import random_channel

    for _ in range(10):
        c = random_channel(rng, int(rng.integers(1, 4)))
        assert canonicalize(c) == c


def test_ties_broken_by_direct_gain_then_phase():
    ch = CompoundChannel([(0.5, 1j), (2.0, 1.0), (0.5, 1.0)], [(1, 1)], 1, 1)
    c = canonicalize(ch)
    assert c.states_rx1 == ((2.0, 1.0), (0.5, 1.0), (0.5, 1j))


def test_mismatched_lists_need_canonical_form():
    ch = CompoundChannel([(1, 1), (1, 0.5)], [(1, 1)], 1, 1)
    with pytest.raises(InvalidInputError):
        ch.n_states


@pytest.mark.parametrize("bad", [
    dict(states_rx1=[], states_rx2=[(1, 1)], p1=1, p2=1),
    dict(states_rx1=[(1, float("nan"))], states_rx2=[(1, 1)], p1=1, p2=1),
    dict(states_rx1=[(1, 1)], states_rx2=[(1, 1)], p1=-1, p2=1),
    dict(states_rx1=[(1, 1, 1)], states_rx2=[(1, 1)], p1=1, p2=1),
])
def test_invalid_channels(bad):
    with pytest.raises(InvalidInputError):
        CompoundChannel(**bad)


def test_from_joint_takes_marginals():
    ch = from_joint([(1, 0.5, 0.3, 1), (1, 0.5, 0.7, 1), GainState(2, 0.1, 0.3, 1)], 1, 1)
    assert len(ch.states_rx1) == 2 and len(ch.states_rx2) == 2


def test_chain_reproduces_stage_variances(rng):
    from cgic.instances import random_channel

    for _ in range(10):
        ch = random_channel(rng, 3)
        chain = build_degraded_chain(ch)
        for k in (1, 2):
            p = ch.p1 if k == 1 else ch.p2
            expect = np.abs(ch.cross_gains(k)) ** 2 * p + 1.0
            np.testing.assert_allclose(chain.stage_variances(k), expect, rtol=1e-12)


def test_chain_with_zero_gains():
    ch = canonicalize(CompoundChannel([(1, 0.5), (1, 0)], [(0, 1), (0, 1)], 1, 1))
    chain = build_degraded_chain(ch)
    assert chain.ratio[0][0] == 0 and chain.residual[0][0] == 1.0
    assert chain.ratio[1][0] == 0


def test_chain_rejects_non_canonical():
    with pytest.raises(InvalidInputError):
        build_degraded_chain(CompoundChannel([(1, 0.1), (1, 0.9)], [(1, 1), (1, 1)], 1, 1))


def test_chain_rejects_growth():
    # bypass canonical ordering to force a ratio above one
    ch = CompoundChannel([(1, 0.1), (1, 0.9)], [(1, 1), (1, 1)], 1, 1)
    object.__setattr__(ch, "is_canonical", lambda: True)
    with pytest.raises(InvariantViolation):
        build_degraded_chain(ch)
