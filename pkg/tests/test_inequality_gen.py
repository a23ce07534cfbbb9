from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from cgic.bounds import gaussian_evaluator
from cgic.errors import InvalidInputError
from cgic.gaussian_stats import MISpec, U, X, Y
from cgic.inequality_gen import (
    CONDITIONAL,
    PROJECTED,
    RateComponent,
    gen_2state,
    gen_nstate,
    genie_table,
    monotonicity_violations,
    system_for,
)
from cgic.instances import random_channel

GOLDEN = Path(__file__).parent / "golden"


def _by_structure(sys):
    out = [c.structure() for c in sys.constraints]
    assert len(set(out)) == len(out)
    return set(out)


def test_two_state_table_has_thirty_rows():
    sys = gen_2state()
    assert len(sys.constraints) == 30
    counts = {}
    for c in sys.constraints:
        counts[c.receiver] = counts.get(c.receiver, 0) + 1
    assert counts == {(1, 2): 6, (1, 1): 9, (2, 2): 6, (2, 1): 9}


@pytest.mark.parametrize("variant", [PROJECTED, CONDITIONAL])
def test_enumerator_reproduces_two_state_table(variant):
    a, b = gen_2state(variant), gen_nstate(2, variant)
    assert a.nonneg == b.nonneg
    assert _by_structure(a) == _by_structure(b)


def test_single_state_list():
    sys = gen_nstate(1)
    p = lambda k: RateComponent(k, 0)  # noqa: E731
    t = lambda k: RateComponent(k, 1)  # noqa: E731
    expect = set()
    for k in (1, 2):
        o = 3 - k
        y = Y(k, 1)
        expect |= {
            (frozenset({p(k)}), MISpec({y}, {X(k)}, {U(k, 1), U(o, 1)})),
            (frozenset({t(o), p(k)}), MISpec({y}, {X(k), U(o, 1)}, {U(k, 1)})),
            (frozenset({t(k), p(k)}), MISpec({y}, {X(k)}, {U(o, 1)})),
            (frozenset({t(o), t(k), p(k)}), MISpec({y}, {X(k), U(o, 1)}, set())),
        }
    assert len(sys.constraints) == 8
    assert {(c.lhs, c.mi) for c in sys.constraints} == expect


@pytest.mark.parametrize("n,count", [(1, 8), (2, 30), (3, 72), (4, 140)])
def test_row_counts(n, count):
    # per user: sum over states n of (N+1)(N-n+2)
    assert len(gen_nstate(n).constraints) == count


@pytest.mark.parametrize("name,build", [
    ("two_state_projected", lambda: gen_2state()),
    ("two_state_conditional", lambda: gen_2state(CONDITIONAL)),
    ("three_state_projected", lambda: gen_nstate(3)),
])
def test_golden_dump(name, build):
    assert build().dump() == (GOLDEN / f"{name}.txt").read_text()


def test_bad_arguments():
    with pytest.raises(InvalidInputError):
        gen_nstate(0)
    with pytest.raises(InvalidInputError):
        gen_2state("nonsense")


def test_genie_sets_are_mi_conditioning():
    sys = gen_2state()
    g = genie_table(sys)
    assert g["delta29"] == frozenset()
    assert g["gamma11"] == frozenset({U(1, 1), U(2, 2)})


def test_conditional_guards_are_own_layers():
    sys = gen_2state(CONDITIONAL)
    for c in sys.constraints:
        assert c.guard == frozenset(r for r in c.lhs if r.user == c.receiver[0])
        assert RateComponent(c.receiver[0], 0) in c.guard


def test_violations_exact_with_fractions():
    sys = gen_2state(CONDITIONAL)
    rhs = [Fraction(1)] * 30
    v = [Fraction(0)] * 6
    assert sys.violations(v, rhs) == []
    v[0] = Fraction(3, 2)
    tags = {t for t, _, _ in sys.violations(v, rhs)}
    assert "gamma11" in tags and "delta21" not in tags
    # guards: with R1 zero the user-1 rows are inactive
    v = [Fraction(0), Fraction(0), Fraction(0), Fraction(2), Fraction(0), Fraction(0)]
    tags = {t for t, _, _ in sys.violations(v, rhs)}
    assert tags and all(t.endswith(("21", "22", "23", "24", "25", "26", "27", "28", "29")) for t in tags)
    assert all(t[5] == "2" for t in tags)


def test_projected_variant_only_checks_sums():
    sys = gen_2state(PROJECTED)
    v = [Fraction(-1), Fraction(1), Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
    assert sys.violations(v, [Fraction(5)] * 30) == []
    v[2] = Fraction(-1)
    assert [t for t, _, _ in sys.violations(v, [Fraction(5)] * 30)] == ["nonneg1"]


def test_gaussian_rhs_monotone_within_receiver(rng):
    for n in (1, 2, 3):
        sys = system_for(n)
        for _ in range(5):
            rhs = sys.evaluate(gaussian_evaluator(random_channel(rng, n)))
            assert np.all(rhs >= 0)
            assert monotonicity_violations(sys, rhs) == []
