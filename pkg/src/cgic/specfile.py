"""YAML channel descriptions.

Gaussian channels::

    p1: 10.0
    p2: 10.0
    rx1_states:            # one entry per state of receiver 1
      - {h11_re: 1.0, h21_re: 0.8, h21_im: 0.1}
    rx2_states:
      - {h12_re: 0.5, h22_re: 1.0}

Imaginary parts default to zero. Deterministic channels set
``type: deterministic`` and give the lookup tables directly::

    type: deterministic
    x_sizes: [2, 2]
    s1_maps: [[0, 1]]      # per state, interference of X1 seen at receiver 2
    s2_maps: [[0, 1]]
    y1_tables: [[[0, 1], [1, 0]]]   # per state, y1 = table[x1][s2]
    y2_tables: [[[0, 1], [1, 0]]]
    p_x1: [0.5, 0.5]       # optional, uniform otherwise

Errors carry the 1-based line and column of the offending node.
"""

from pathlib import Path

import numpy as np
import yaml

from .channel_model import CompoundChannel
from .errors import CgicError, SpecParseError

_GAUSS_KEYS = {"type", "p1", "p2", "rx1_states", "rx2_states"}
_STATE_KEYS = {
    "rx1_states": ("h11", "h21"),
    "rx2_states": ("h12", "h22"),
}
_DET_KEYS = {"type", "x_sizes", "s1_maps", "s2_maps", "y1_tables", "y2_tables", "p_x1", "p_x2"}


class _Doc:
    def __init__(self, text, source):
        self.source = source
        self.loader = yaml.SafeLoader(text)
        try:
            self.root = self.loader.get_single_node()
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark or exc.context_mark
            raise SpecParseError(f"{source}: {exc.problem}", mark.line + 1, mark.column + 1) from None
        if self.root is None:
            raise SpecParseError(f"{source}: empty channel file", 1, 1)

    def error(self, node, msg):
        m = node.start_mark
        return SpecParseError(f"{self.source}: {msg}", m.line + 1, m.column + 1)

    def value(self, node):
        return self.loader.construct_object(node, deep=True)

    def mapping(self, node, allowed, what):
        if not isinstance(node, yaml.MappingNode):
            raise self.error(node, f"{what} must be a mapping")
        out = {}
        for k, v in node.value:
            key = self.value(k)
            if key not in allowed:
                raise self.error(k, f"unknown key {key!r} in {what}; expected one of {sorted(allowed)}")
            if key in out:
                raise self.error(k, f"duplicate key {key!r}")
            out[key] = v
        return out

    def sequence(self, node, what):
        if not isinstance(node, yaml.SequenceNode):
            raise self.error(node, f"{what} must be a list")
        return node.value

    def number(self, node, what):
        v = self.value(node)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise self.error(node, f"{what} must be a number, got {v!r}")
        if not np.isfinite(v):
            raise self.error(node, f"{what} must be finite")
        return float(v)


def _require(doc, fields, key, parent):
    if key not in fields:
        raise doc.error(parent, f"missing required key {key!r}")
    return fields[key]


def _parse_gaussian(doc, fields):
    p = []
    for key in ("p1", "p2"):
        node = _require(doc, fields, key, doc.root)
        v = doc.number(node, key)
        if v < 0:
            raise doc.error(node, f"{key} must be nonnegative")
        p.append(v)
    states = {}
    for key, names in _STATE_KEYS.items():
        node = _require(doc, fields, key, doc.root)
        items = doc.sequence(node, key)
        if not items:
            raise doc.error(node, f"{key} needs at least one state")
        allowed = {f"{n}_{part}" for n in names for part in ("re", "im")}
        out = []
        for item in items:
            f = doc.mapping(item, allowed, f"an entry of {key}")
            gains = []
            for n in names:
                re = _require(doc, f, f"{n}_re", item)
                val = complex(doc.number(re, f"{n}_re"), 0.0)
                if f"{n}_im" in f:
                    val += 1j * doc.number(f[f"{n}_im"], f"{n}_im")
                gains.append(val)
            out.append(tuple(gains))
        states[key] = out
    try:
        return CompoundChannel(states["rx1_states"], states["rx2_states"], p[0], p[1])
    except CgicError as exc:
        raise doc.error(doc.root, str(exc)) from None


def _int_array(doc, node, what, ndim):
    v = doc.value(node)
    try:
        a = np.asarray(v)
    except ValueError:
        raise doc.error(node, f"{what} is ragged") from None
    if a.ndim != ndim or a.size == 0 or a.dtype.kind not in "iu":
        raise doc.error(node, f"{what} must be a nonempty {ndim}-d table of integers")
    if a.min() < 0:
        raise doc.error(node, f"{what} has negative symbols")
    return a


def _parse_deterministic(doc, fields):
    from .det_oracle import DetChannel, DiscreteDist

    xs_node = _require(doc, fields, "x_sizes", doc.root)
    xs = _int_array(doc, xs_node, "x_sizes", 1)
    if xs.size != 2:
        raise doc.error(xs_node, "x_sizes must list two alphabet sizes")
    maps, tables = [], []
    for k in (1, 2):
        mnode = _require(doc, fields, f"s{k}_maps", doc.root)
        maps.append([_int_array(doc, m, f"s{k}_maps entry", 1) for m in doc.sequence(mnode, f"s{k}_maps")])
        tnode = _require(doc, fields, f"y{k}_tables", doc.root)
        tables.append([_int_array(doc, t, f"y{k}_tables entry", 2) for t in doc.sequence(tnode, f"y{k}_tables")])
    try:
        ch = DetChannel(tuple(int(v) for v in xs), tuple(maps), tuple(tables))
    except CgicError as exc:
        raise doc.error(doc.root, str(exc)) from None
    laws = []
    for k, key in enumerate(("p_x1", "p_x2")):
        if key in fields:
            laws.append([doc.number(n, key) for n in doc.sequence(fields[key], key)])
        else:
            laws.append([1.0 / ch.x_sizes[k]] * ch.x_sizes[k])
    try:
        dist = DiscreteDist(np.array(laws[0]), np.array(laws[1]))
    except CgicError as exc:
        raise doc.error(doc.root, str(exc)) from None
    if dist.p1.size != ch.x_sizes[0] or dist.p2.size != ch.x_sizes[1]:
        raise doc.error(doc.root, "input laws do not match x_sizes")
    return ch, dist


def parse_channel(text, source="<string>"):
    """Parse YAML text into a :class:`CompoundChannel` or a
    ``(DetChannel, DiscreteDist)`` pair."""
    doc = _Doc(text, source)
    raw = doc.mapping(doc.root, _GAUSS_KEYS | _DET_KEYS, "channel file")
    kind = doc.value(raw["type"]) if "type" in raw else "gaussian"
    if kind == "gaussian":
        fields = doc.mapping(doc.root, _GAUSS_KEYS, "a gaussian channel")
        return _parse_gaussian(doc, fields)
    if kind == "deterministic":
        fields = doc.mapping(doc.root, _DET_KEYS, "a deterministic channel")
        return _parse_deterministic(doc, fields)
    raise doc.error(raw["type"], f"unknown channel type {kind!r}")


def load_channel(path):
    path = Path(path)
    return parse_channel(path.read_text(), str(path))


def dump_gaussian(ch: CompoundChannel):
    """YAML text for a Gaussian channel; ``parse_channel`` reads it back exactly."""
    def gains(states, names):
        out = []
        for st in states:
            entry = {}
            for n, g in zip(names, st):
                entry[f"{n}_re"] = float(g.real)
                entry[f"{n}_im"] = float(g.imag)
            out.append(entry)
        return out

    doc = {
        "p1": float(ch.p1),
        "p2": float(ch.p2),
        "rx1_states": gains(ch.states_rx1, _STATE_KEYS["rx1_states"]),
        "rx2_states": gains(ch.states_rx2, _STATE_KEYS["rx2_states"]),
    }
    return yaml.safe_dump(doc, sort_keys=False)


def dump_deterministic(ch, dist=None):
    doc = {
        "type": "deterministic",
        "x_sizes": list(ch.x_sizes),
        "s1_maps": [m.tolist() for m in ch.s_maps[0]],
        "s2_maps": [m.tolist() for m in ch.s_maps[1]],
        "y1_tables": [t.tolist() for t in ch.y_tables[0]],
        "y2_tables": [t.tolist() for t in ch.y_tables[1]],
    }
    if dist is not None:
        doc["p_x1"] = dist.p1.tolist()
        doc["p_x2"] = dist.p2.tolist()
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
