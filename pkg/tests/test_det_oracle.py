import numpy as np
import pytest

from cgic.det_oracle import (
    DetChannel,
    DetEvaluator,
    DiscreteDist,
    det_certify,
    det_mi,
    fixture_channels,
    xor_channel,
)
from cgic.errors import InvalidInputError, InvariantViolation, ResourceLimitError
from cgic.gaussian_stats import MISpec, S, U, X, Y
from cgic.specfile import dump_deterministic, load_channel, parse_channel


def plain_entropy(p):
    p = np.asarray([v for v in p if v > 0])
    return float(-(p * np.log2(p)).sum())


def test_xor_mi_is_one_bit():
    ch = xor_channel()
    ev = DetEvaluator(ch, DiscreteDist.uniform(ch))
    # uniform X2 hides X1 completely unless X2 is known
    assert ev.mi(MISpec({Y(1, 1)}, {X(1)})) == pytest.approx(0.0, abs=1e-15)
    assert ev.mi(MISpec({Y(1, 1)}, {X(1)}, {X(2)})) == pytest.approx(1.0, abs=1e-15)


def test_mi_of_function_is_its_entropy():
    fx = fixture_channels()
    ch, dist = fx["asymmetric"]
    ev = DetEvaluator(ch, dist)
    for n in range(ch.n_states):
        law = np.bincount(ch.s_maps[0][n], weights=dist.p1)
        assert ev.mi(MISpec({S(1, n + 1)}, {X(1)})) == pytest.approx(plain_entropy(law), abs=1e-12)
    assert ev.entropy({X(1)}) == pytest.approx(plain_entropy(dist.p1), abs=1e-12)


def test_u_coincides_with_s():
    ch, dist = fixture_channels()["degraded_mod4"]
    ev = DetEvaluator(ch, dist)
    assert ev.mi(MISpec({S(1, 1)}, {X(1)}, {U(1, 1)})) == 0.0
    assert det_mi(ch, dist, MISpec({Y(2, 1)}, {X(2)})) == ev.mi(MISpec({Y(2, 1)}, {X(2)}))


@pytest.mark.parametrize("name", sorted(fixture_channels()))
def test_fixture_exact(name):
    ch, dist = fixture_channels()[name]
    rep = det_certify(ch, dist, 91)
    assert rep.delta1 == 0.0 and rep.delta2 == 0.0
    assert rep.certified, rep.failures
    assert rep.per_direction_max_gap <= 1e-9


@pytest.mark.parametrize("name", sorted(fixture_channels()))
def test_yaml_fixture_matches(fixtures_dir, name):
    files = {"xor": "det_xor", "noninterfering": "det_noninterfering", "degraded_mod4": "det_degraded_mod4",
             "three_state_mod6": "det_three_state_mod6", "shifted_bits": "det_shifted_bits",
             "asymmetric": "det_asymmetric"}
    ch, dist = fixture_channels()[name]
    loaded_ch, loaded_dist = load_channel(fixtures_dir / f"{files[name]}.yaml")
    assert dump_deterministic(loaded_ch, loaded_dist) == dump_deterministic(ch, dist)


def test_round_trip_text():
    ch, dist = fixture_channels()["asymmetric"]
    ch2, dist2 = parse_channel(dump_deterministic(ch, dist))
    assert np.array_equal(dist2.p1, dist.p1)
    assert all(np.array_equal(a, b) for a, b in zip(ch2.y_tables[1], ch.y_tables[1]))


def test_not_invertible():
    with pytest.raises(InvariantViolation, match="invertible"):
        DetChannel((2, 2), ([[0, 1]], [[0, 1]]), ([[[0, 0], [1, 1]]], [[[0, 1], [1, 0]]]))


def test_not_degraded():
    # state 2 must be a function of state 1
    with pytest.raises(InvariantViolation, match="function"):
        DetChannel((3, 2), ([[0, 0, 1], [0, 1, 1]], [[0, 1], [0, 1]]),
                   ([[[0, 1], [1, 2], [2, 3]]] * 2, [[[0, 1], [2, 3]]] * 2))


def test_shape_errors():
    with pytest.raises(InvalidInputError):
        DetChannel((2,), ([[0, 1]],), ([[[0, 1]]],))
    with pytest.raises(InvalidInputError):
        DetChannel((2, 2), ([[0, 1, 2]], [[0, 1]]), ([[[0, 1], [1, 0]]], [[[0, 1], [1, 0]]]))
    with pytest.raises(InvalidInputError):
        DiscreteDist(np.array([0.5, 0.6]), np.array([1.0]))
    ch = xor_channel()
    with pytest.raises(InvalidInputError):
        DetEvaluator(ch, DiscreteDist(np.array([1.0]), np.array([0.5, 0.5])))


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        DetChannel((10 ** 4, 10 ** 4), ([[0]], [[0]]), ([[[0]]], [[[0]]]))
