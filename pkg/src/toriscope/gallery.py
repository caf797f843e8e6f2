"""Named example polytopes used across tests, docs and the CLI self-test."""

from __future__ import annotations

import itertools

from .polytopes import LatticePolytope


def unit_simplex(d: int) -> LatticePolytope:
    pts = [tuple(0 for _ in range(d))]
    for i in range(d):
        pts.append(tuple(1 if j == i else 0 for j in range(d)))
    return LatticePolytope(pts)


def unit_cube(d: int) -> LatticePolytope:
    return LatticePolytope(list(itertools.product((0, 1), repeat=d)))


def box(*sides: int) -> LatticePolytope:
    """Axis-aligned box [0, a1] x ... x [0, ak]."""
    return LatticePolytope(
        list(itertools.product(*((0, s) for s in sides)))
    )


def grid_square(k: int) -> LatticePolytope:
    """The square [0, k]^2."""
    return box(k, k)


def smooth_hexagon() -> LatticePolytope:
    """Smooth polygon on which corner-step reachability is not symmetric.

    From the vertex (3, 3) the point (3, 0) can be reached by repeated
    corner-cone Hilbert basis steps but the origin cannot.
    """
    return LatticePolytope([(0, 0), (4, 0), (4, 1), (3, 3), (2, 4), (0, 4)])


def cubic_bipyramid() -> LatticePolytope:
    """Five lattice points whose toric ideal needs a degree-3 generator.

    The polytope is the union of two lattice simplices glued along a
    triangle; its only lattice points are the five vertices and the single
    defining relation x + y + z = v + 2w lives in degree 3.
    """
    return LatticePolytope(
        [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2), (0, 0, -1)]
    )


def very_ample_not_normal() -> LatticePolytope:
    """Eight vertical unit segments at staggered heights over a square.

    The hull is very ample (four unimodular corner cones, four with four
    generators passing the facet-completion criterion) but not normal:
    the point (1, 1, 4) at height 2 is not a sum of two lattice points.
    """
    columns = {
        (0, 0): (0, 1),
        (0, 1): (2, 3),
        (1, 1): (1, 2),
        (1, 0): (3, 4),
    }
    pts = [
        (x, y, z) for (x, y), zs in columns.items() for z in zs
    ]
    return LatticePolytope(pts)


def segment_join() -> LatticePolytope:
    """Join of two length-2 segments; quadratically generated, not abundant.

    The toric ideal is generated by the two midpoint quadrics, yet the
    midpoint of the segment between the two interior points is not the
    midpoint of any other lattice segment.
    """
    return LatticePolytope([(0, 0, 0), (2, 0, 0), (0, 0, 1), (0, 2, 1)])


def reeve_simplex(q: int) -> LatticePolytope:
    """Empty simplex with steep apex; not normal for q >= 2."""
    return LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, q)])
