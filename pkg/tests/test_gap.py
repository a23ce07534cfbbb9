import math

import numpy as np
import pytest

from cgic.bounds import gaussian_evaluator
from cgic.channel_model import CompoundChannel
from cgic.gap import certify, compute_delta, dominated_shrink_violations, shrink_violations
from cgic.instances import random_channel

# N=1 channel where the zero-clipped shift leaves the inner region
CLIP_COUNTEREXAMPLE = CompoundChannel(
    [((-0.2878176530927589 - 0.1356698771342504j), (-0.4153561294295869 + 0.2096731439751508j))],
    [((-0.253297760239958 - 0.008214580874262961j), (-1.299809946382081 + 0.7113875830595818j))],
    16.230825114096213, 678.9353945363042,
)


def closed_form_delta(ch):
    def f(snr):
        return math.log2((1 + 2 * snr) / (1 + snr))

    d1 = max(f(abs(h21) ** 2 * ch.p2) for _, h21 in ch.states_rx1)
    d2 = max(f(abs(h12) ** 2 * ch.p1) for h12, _ in ch.states_rx2)
    return d1, d2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_delta_closed_form(n):
    ch = random_channel(np.random.default_rng(40 + n), n)
    d = compute_delta(gaussian_evaluator(ch), n)
    assert d == pytest.approx(closed_form_delta(ch), abs=1e-10)
    assert all(0 <= x < 1 for x in d)


def test_delta_increases_with_power():
    vals = []
    for p in (0.1, 1.0, 10.0, 1e4):
        ch = CompoundChannel([(1.0, 0.5)], [(0.7, 1.0)], p, p)
        vals.append(compute_delta(gaussian_evaluator(ch), 1))
    d1 = [v[0] for v in vals]
    assert all(x < y for x, y in zip(d1, d1[1:]))
    assert d1[-1] < 1


def test_zero_cross_gain_gives_zero_gap():
    ch = CompoundChannel([(1.0, 0.0), (0.5, 0.0)], [(0.0, 1.0), (0.0, 2.0)], 10.0, 10.0)
    rep = certify(ch, 37)
    assert rep.delta1 == 0.0 and rep.delta2 == 0.0
    assert rep.certified, rep.failures
    assert rep.per_direction_max_gap == pytest.approx(0.0, abs=1e-9)


def test_certify_random_two_state():
    rep = certify(random_channel(np.random.default_rng(42), 2), 91)
    assert rep.certified, rep.failures
    assert rep.per_direction_max_gap <= max(rep.delta1, rep.delta2) + 1e-7
    assert not rep.dominated_failures


def test_report_text_format():
    rep = certify(random_channel(np.random.default_rng(42), 2), 19)
    lines = rep.to_text().splitlines()
    assert lines[0].startswith("delta1: ") and len(lines[0].split(".")[1]) == 6
    assert lines[4] in ("certified: true", "certified: false")
    assert set(rep.summary_row()) == {"delta1", "delta2", "per_direction_max_gap", "certified"}


def test_clipped_shrink_counterexample():
    # the clipped form fails here while the unclipped check above the deltas holds
    rep = certify(CLIP_COUNTEREXAMPLE, 91)
    assert not rep.certified
    bad = shrink_violations(rep.inner, rep.outer, rep.delta1, rep.delta2)
    assert max(s for _, _, s in bad) > 0.5
    assert not dominated_shrink_violations(rep.inner, rep.outer, rep.delta1, rep.delta2)
    assert rep.per_direction_max_gap <= max(rep.delta1, rep.delta2) + 1e-7
