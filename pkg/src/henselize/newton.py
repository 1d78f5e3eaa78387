"""Newton polygons over a valued field, with exact slope arithmetic.

The polygon of P = sum p_i X^i is the lower convex hull of the points
(i, v(p_i)).  Conventions pinned here:

- coefficients of infinite valuation (zeros) are never hull candidates;
  an initial run of them becomes ``zero_root_width``, the multiplicity of
  0 as a root;
- interior points lying exactly on a hull segment are not vertices, so
  the vertex list holds extreme points only;
- a segment from (i, w_i) to (j, w_j) carries j - i roots of valuation
  (w_i - w_j)/(j - i), and segment "slope" below always means that root
  valuation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fields import ValuedField
from .polynomials import Polynomial
from .valgroup import Val


@dataclass(frozen=True)
class Segment:
    """One hull edge, from index i to index j > i."""

    i: int
    j: int
    left_val: Val
    right_val: Val

    @property
    def width(self) -> int:
        return self.j - self.i

    @property
    def root_val(self) -> Val:
        return Val(Fraction(self.left_val.q - self.right_val.q, self.j - self.i))


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple[tuple[int, Val], ...]
    vertices: tuple[tuple[int, Val], ...]
    zero_root_width: int

    @property
    def segments(self) -> tuple[Segment, ...]:
        return tuple(
            Segment(i1, i2, w1, w2)
            for (i1, w1), (i2, w2) in zip(self.vertices, self.vertices[1:])
        )

    def isolated_segments(self) -> list[tuple[int, Val]]:
        """Width-1 hull segments, as (left index, root valuation)."""
        return [(s.i, s.root_val) for s in self.segments if s.width == 1]


def polygon_from_vals(vals: Sequence[Val]) -> NewtonPolygon:
    """Build the polygon from the valuation list [v(p_0), ..., v(p_d)]."""
    if not vals:
        raise ValueError("newton polygon of the zero polynomial")
    if not vals[-1].is_finite:
        raise ValueError("leading coefficient must have finite valuation")
    finite = [(i, v) for i, v in enumerate(vals) if v.is_finite]
    zero_root_width = finite[0][0]

    hull: list[tuple[int, Val]] = []
    for i3, w3 in finite:
        # pop the middle point whenever it is on or above the chord
        while len(hull) >= 2:
            i1, w1 = hull[-2]
            i2, w2 = hull[-1]
            if (w2.q - w1.q) * (i3 - i2) >= (w3.q - w2.q) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append((i3, w3))

    points = tuple((i, v) for i, v in enumerate(vals))
    return NewtonPolygon(points=points, vertices=tuple(hull), zero_root_width=zero_root_width)


def newton_polygon(p: Polynomial, field: ValuedField) -> NewtonPolygon:
    if p.is_zero:
        raise ValueError("newton polygon of the zero polynomial")
    return polygon_from_vals([field.val(c) for c in p.coeffs])


def root_valuations(p: Polynomial, field: ValuedField) -> list[Val]:
    """Ascending multiset of the valuations of the roots of p.

    Each hull segment contributes ``width`` copies of its root valuation;
    the multiplicity of the root 0 contributes that many infinite entries,
    which sort last.  The list has exactly deg(p) entries.
    """
    np = newton_polygon(p, field)
    out: list[Val] = []
    for seg in reversed(np.segments):
        out.extend([seg.root_val] * seg.width)
    out.extend([Val.INF] * np.zero_root_width)
    assert all(a <= b for a, b in zip(out, out[1:])), "root valuations not ascending"
    assert len(out) == p.degree
    return out


def polygon_as_tree(np: NewtonPolygon) -> dict:
    """Structured rendering: points, vertices, segments with slope/width."""
    return {
        "points": [[i, str(v)] for i, v in np.points],
        "vertices": [[i, str(v)] for i, v in np.vertices],
        "zero_root_width": np.zero_root_width,
        "segments": [
            {
                "from": s.i,
                "to": s.j,
                "width": s.width,
                "slope": str(s.root_val),
            }
            for s in np.segments
        ],
    }


def polygon_as_text(np: NewtonPolygon) -> str:
    lines = [
        "points:   " + " ".join(f"({i}, {v})" for i, v in np.points),
        "vertices: " + " ".join(f"({i}, {v})" for i, v in np.vertices),
    ]
    if np.zero_root_width:
        lines.append(f"zero-root width: {np.zero_root_width}")
    segs = "; ".join(
        f"{s.i}->{s.j} width {s.width} slope {s.root_val}" for s in np.segments
    )
    lines.append("segments: " + (segs if segs else "(none)"))
    return "\n".join(lines)
