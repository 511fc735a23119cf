"""Discrete paths in a Cayley graph and quasi-geodesic constant pairs.

A Path is a finite vertex sequence with unit-speed parametrization: the
parameter of vertex ``i`` is the cumulative arc length ``cum[i]``, where each
step contributes its distance (1 for an edge step, 0 for a repeated vertex).
Repeated vertices arise naturally when concatenating degenerate geodesic
segments, so they are allowed rather than rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple


def _as_fraction(x) -> Fraction:
    """Exact rational coercion; floats go through str() so 0.1 -> 1/10."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True, slots=True)
class QGConstants:
    """A (lambda, c) quasi-geodesic constant pair, stored exactly."""

    lam: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", _as_fraction(self.lam))
        object.__setattr__(self, "c", _as_fraction(self.c))
        if self.lam < 1:
            raise ValueError(f"lambda must be >= 1, got {self.lam}")
        if self.c < 0:
            raise ValueError(f"c must be >= 0, got {self.c}")

    def __iter__(self):
        return iter((self.lam, self.c))


@dataclass(frozen=True, slots=True)
class Path:
    """Vertex sequence with cumulative arc length per vertex.

    ``vertices`` holds Words (consecutive ones at distance 0 or 1) and
    ``cum[i]`` is the arc-length parameter of ``vertices[i]``; ``cum[0] = 0``.
    ``qg`` optionally records quasi-geodesic constants certified for the path
    by its constructor (e.g. an axis records its (lambda_f, c_f)).
    """

    vertices: tuple
    cum: Tuple[int, ...]
    qg: Optional[QGConstants] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.vertices) == 0:
            raise ValueError("a path needs at least one vertex")
        if len(self.cum) != len(self.vertices):
            raise ValueError("cum and vertices must have equal length")
        if self.cum[0] != 0:
            raise ValueError("paths are parametrized starting at 0")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        """Total arc length (the final parameter)."""
        return self.cum[-1]

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def subpath(self, i: int, j: int) -> "Path":
        """Vertex-index slice [i, j] inclusive, reparametrized from 0."""
        if not (0 <= i <= j < len(self.vertices)):
            raise IndexError("subpath indices out of range")
        base = self.cum[i]
        return Path(self.vertices[i : j + 1],
                    tuple(c - base for c in self.cum[i : j + 1]))

    def reversed(self) -> "Path":
        verts = tuple(reversed(self.vertices))
        steps = [self.cum[k + 1] - self.cum[k] for k in range(len(self.cum) - 1)]
        cum = [0]
        for s in reversed(steps):
            cum.append(cum[-1] + s)
        return Path(verts, tuple(cum))


def path_from_vertices(model, vertices: Sequence) -> Path:
    """Build a Path, computing step distances (each must be 0 or 1)."""
    verts = tuple(vertices)
    cum = [0]
    for a, b in zip(verts, verts[1:]):
        d = model.distance(a, b)
        if d > 1:
            raise ValueError(f"consecutive path vertices at distance {d} > 1")
        cum.append(cum[-1] + d)
    return Path(verts, tuple(cum))


def concat_paths(segments: Sequence[Path]) -> Path:
    """Concatenate paths end-to-start, dropping duplicated junction vertices."""
    segments = list(segments)
    if not segments:
        raise ValueError("cannot concatenate zero segments")
    verts = list(segments[0].vertices)
    cum = list(segments[0].cum)
    for seg in segments[1:]:
        if seg.start != verts[-1]:
            raise ValueError("segments do not share junction vertices")
        base = cum[-1]
        verts.extend(seg.vertices[1:])
        cum.extend(base + c for c in seg.cum[1:])
    return Path(tuple(verts), tuple(cum))
