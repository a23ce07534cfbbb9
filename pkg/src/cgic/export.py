"""CSV and SVG output for two-dimensional regions."""

import math

import numpy as np

from .polytope import Region2D

FMT = "{:.9g}"


def _f(x):
    return FMT.format(float(x))


def region_csv(region: Region2D):
    lines = ["a,b,c_star"]
    lines += [f"{_f(a)},{_f(b)},{_f(c)}" for a, b, c in region.samples]
    lines += ["# vertices", "R1,R2"]
    lines += [f"{_f(x)},{_f(y)}" for x, y in region.vertices]
    return "\n".join(lines) + "\n"


def region_pair_csv(inner: Region2D, outer: Region2D):
    """Both bounds in one file, tagged by a leading ``bound`` column."""
    lines = ["bound,a,b,c_star"]
    for tag, r in (("inner", inner), ("outer", outer)):
        lines += [f"{tag},{_f(a)},{_f(b)},{_f(c)}" for a, b, c in r.samples]
    lines += ["# vertices", "bound,R1,R2"]
    for tag, r in (("inner", inner), ("outer", outer)):
        lines += [f"{tag},{_f(x)},{_f(y)}" for x, y in r.vertices]
    return "\n".join(lines) + "\n"


def read_region_csv(text):
    """Parse :func:`region_csv` or :func:`region_pair_csv` output.

    Returns ``{bound: (samples, vertices)}``; single-region files use the
    key ``None``.
    """
    out = {}
    section = "samples"
    tagged = False
    for line in text.splitlines():
        if not line:
            continue
        if line == "# vertices":
            section = "vertices"
            continue
        if line.startswith(("a,", "R1,", "bound,")):
            tagged = line.startswith("bound,")
            continue
        fields = line.split(",")
        tag = fields.pop(0) if tagged else None
        samples, vertices = out.setdefault(tag, ([], []))
        (samples if section == "samples" else vertices).append(tuple(float(v) for v in fields))
    return {k: (np.array(s).reshape(-1, 3), np.array(v).reshape(-1, 2)) for k, (s, v) in out.items()}


# ---------------------------------------------------------------- svg

_STYLE = {
    "inner": ("#2b6cb0", "#2b6cb033"),
    "outer": ("#c05621", "none"),
}


def _nice_max(v):
    if v <= 0:
        return 1.0
    e = 10 ** math.floor(math.log10(v))
    for m in (1, 2, 2.5, 5, 10):
        if m * e >= v:
            return m * e
    return 10 * e


def region_svg(regions, width=480, height=480, margin=56, title=None):
    """Overlay plot of named regions; ``regions`` maps a name to a :class:`Region2D`."""
    pts = np.vstack([r.vertices for r in regions.values() if len(r.vertices)] or [np.zeros((1, 2))])
    xmax = _nice_max(float(pts[:, 0].max()) * 1.05)
    ymax = _nice_max(float(pts[:, 1].max()) * 1.05)
    w, h = width - 2 * margin, height - 2 * margin

    def sx(x):
        return margin + w * x / xmax

    def sy(y):
        return height - margin - h * y / ymax

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="{margin / 2:.1f}" text-anchor="middle">{title}</text>')
    for i in range(6):
        fx, fy = xmax * i / 5, ymax * i / 5
        out.append(f'<line x1="{sx(fx):.2f}" y1="{sy(0):.2f}" x2="{sx(fx):.2f}" y2="{sy(0) + 4:.2f}" stroke="black"/>')
        out.append(f'<text x="{sx(fx):.2f}" y="{sy(0) + 18:.2f}" text-anchor="middle">{fx:.3g}</text>')
        out.append(f'<line x1="{sx(0) - 4:.2f}" y1="{sy(fy):.2f}" x2="{sx(0):.2f}" y2="{sy(fy):.2f}" stroke="black"/>')
        out.append(f'<text x="{sx(0) - 8:.2f}" y="{sy(fy) + 4:.2f}" text-anchor="end">{fy:.3g}</text>')
    out.append(f'<line x1="{sx(0):.2f}" y1="{sy(0):.2f}" x2="{sx(xmax):.2f}" y2="{sy(0):.2f}" stroke="black"/>')
    out.append(f'<line x1="{sx(0):.2f}" y1="{sy(0):.2f}" x2="{sx(0):.2f}" y2="{sy(ymax):.2f}" stroke="black"/>')
    out.append(f'<text x="{sx(xmax / 2):.2f}" y="{height - 12}" text-anchor="middle">R1 (bits)</text>')
    out.append(f'<text x="14" y="{sy(ymax / 2):.2f}" text-anchor="middle" '
               f'transform="rotate(-90 14 {sy(ymax / 2):.2f})">R2 (bits)</text>')
    for j, (name, r) in enumerate(regions.items()):
        stroke, fill = _STYLE.get(name, ("#444444", "none"))
        if len(r.vertices):
            d = " ".join(f"{'M' if i == 0 else 'L'}{sx(x):.2f},{sy(y):.2f}" for i, (x, y) in enumerate(r.vertices))
            out.append(f'<path d="{d} Z" stroke="{stroke}" fill="{fill}" stroke-width="2"/>')
        ly = margin + 16 * j
        out.append(f'<line x1="{width - margin - 70}" y1="{ly}" x2="{width - margin - 50}" y2="{ly}" '
                   f'stroke="{stroke}" stroke-width="2"/>')
        out.append(f'<text x="{width - margin - 44}" y="{ly + 4}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
