import pytest

from cgic.channel_model import CompoundChannel
from cgic.errors import SpecParseError
from cgic.specfile import dump_gaussian, load_channel, parse_channel

GOOD = """p1: 10.0
p2: 5
rx1_states:
  - {h11_re: 1.0, h21_re: 0.8, h21_im: 0.1}
rx2_states:
  - {h12_re: 0.5, h22_re: 1.0}
"""


def test_parse_gaussian():
    ch = parse_channel(GOOD)
    assert isinstance(ch, CompoundChannel)
    assert ch.p1 == 10.0 and ch.p2 == 5.0
    assert ch.states_rx1[0] == (1.0 + 0j, 0.8 + 0.1j)


def test_round_trip(fixtures_dir):
    ch = load_channel(fixtures_dir / "gauss_two_state.yaml")
    assert parse_channel(dump_gaussian(ch)) == ch


@pytest.mark.parametrize("text,line,col,msg", [
    (GOOD.replace("p2: 5", "p2: five"), 2, 5, "number"),
    (GOOD.replace("h22_re: 1.0", "h22_real: 1.0"), 6, 19, "unknown key"),
    (GOOD.replace("p1: 10.0\n", ""), 1, 1, "missing required key 'p1'"),
    (GOOD.replace("p2: 5", "p2: -5"), 2, 5, "nonnegative"),
    ("p1: [1, 2\n", 2, 1, ""),
    ("", 1, 1, "empty"),
    (GOOD + "type: quantum\n", 7, 7, "unknown channel type"),
    (GOOD.replace("rx2_states:\n  - {h12_re: 0.5, h22_re: 1.0}", "rx2_states: []"), 5, 13, "at least one"),
])
def test_errors_carry_position(text, line, col, msg):
    with pytest.raises(SpecParseError) as info:
        parse_channel(text, "chan.yaml")
    err = info.value
    assert (err.line, err.column) == (line, col)
    assert msg in str(err)
    assert "chan.yaml" in str(err)


def test_deterministic_errors():
    text = """type: deterministic
x_sizes: [2, 2]
s1_maps: [[0, 1]]
s2_maps: [[0, 1]]
y1_tables: [[[0, 0], [1, 1]]]
y2_tables: [[[0, 1], [1, 0]]]
"""
    with pytest.raises(SpecParseError, match="invertible"):
        parse_channel(text)
    with pytest.raises(SpecParseError, match="integers"):
        parse_channel(text.replace("x_sizes: [2, 2]", "x_sizes: [2.5, 2]"))
    with pytest.raises(SpecParseError, match="do not match"):
        parse_channel(text.replace("y1_tables: [[[0, 0], [1, 1]]]", "y1_tables: [[[0, 1], [1, 0]]]")
                      + "p_x1: [0.2, 0.3, 0.5]\n")
