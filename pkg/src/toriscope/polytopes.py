"""Full-dimensional lattice polytopes and their arithmetic predicates.

A :class:`LatticePolytope` is immutable; vertices, facets, lattice points,
the edge graph and the lattice-spanning flag are all computed at
construction.  Facets follow the convention ``rho . x >= -b`` with a
primitive inner normal ``rho``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cones import (
    RationalCone,
    cone_from_generators,
    hilbert_basis,
    monoid_minimal_generators,
    polar_rays,
)
from .errors import DegenerateInputError, NonSimpleError, ParseError
from .intlinalg import (
    Vec,
    content,
    dot,
    is_unimodular_basis,
    is_zero,
    matrix_rank,
    primitive,
    solve_linear,
    spans_full_lattice,
    vadd,
    vsub,
)


@dataclass(frozen=True)
class PredicateResult:
    """Boolean verdict plus a witness explaining a failure (or success)."""

    value: bool
    witness: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.value


@dataclass(frozen=True)
class EhrhartData:
    """Dilation counts, the series numerator vector and the polynomial.

    ``counts[k]`` is ``|kP ∩ Z^d|`` for ``k = 0 .. d+1``; ``hstar`` is the
    numerator coefficient vector of the lattice point series (trailing
    zeros trimmed); ``poly_coeffs[i]`` is the coefficient of ``t^i``.  The
    numerator equals the graded-algebra h-vector only for normal input.
    """

    counts: tuple[int, ...]
    hstar: tuple[int, ...]
    poly_coeffs: tuple[Fraction, ...]

    def evaluate(self, k: int) -> Fraction:
        acc = Fraction(0)
        for i, c in enumerate(self.poly_coeffs):
            acc += c * k**i
        return acc


class LatticePolytope:
    """Convex hull of lattice points, kept in exact integer form."""

    __slots__ = (
        "dim",
        "vertices",
        "facets",
        "lattice_points",
        "spans_lattice",
        "_vertex_facets",
        "_edges",
        "_point_set",
        "_cache",
    )

    def __init__(self, points: Iterable[Vec]):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise DegenerateInputError("empty point set")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise DegenerateInputError("points of mixed dimension")
        lifted = [p + (1,) for p in pts]
        if matrix_rank(lifted) != d + 1:
            raise DegenerateInputError(
                f"hull is not full-dimensional in Z^{d}"
            )
        facet_vecs = polar_rays(lifted, d + 1)
        facets = sorted((f[:d], f[d]) for f in facet_vecs)

        def tight(p: Vec) -> list[int]:
            return [
                i
                for i, (rho, b) in enumerate(facets)
                if dot(rho, p) + b == 0
            ]

        vertices = []
        vertex_facets = {}
        for p in pts:
            t = tight(p)
            if t and matrix_rank([facets[i][0] for i in t]) == d:
                vertices.append(p)
                vertex_facets[p] = tuple(t)

        self.dim = d
        self.vertices = tuple(sorted(vertices))
        self.facets = tuple(facets)
        self._vertex_facets = vertex_facets
        self.lattice_points = tuple(self._enumerate_points())
        self._point_set = frozenset(self.lattice_points)
        self.spans_lattice = self._compute_spans()
        self._edges = self._compute_edges()
        self._cache = {}

    # -- construction helpers ------------------------------------------------

    def _enumerate_points(self) -> list[Vec]:
        lo = [min(v[j] for v in self.vertices) for j in range(self.dim)]
        hi = [max(v[j] for v in self.vertices) for j in range(self.dim)]
        out = []
        for p in itertools.product(
            *(range(lo[j], hi[j] + 1) for j in range(self.dim))
        ):
            if all(dot(rho, p) + b >= 0 for rho, b in self.facets):
                out.append(p)
        return out

    def _compute_spans(self) -> bool:
        base = self.lattice_points[0]
        diffs = [vsub(p, base) for p in self.lattice_points[1:]]
        return spans_full_lattice(diffs)

    def _compute_edges(self) -> dict[Vec, tuple[Vec, ...]]:
        adj: dict[Vec, list[Vec]] = {v: [] for v in self.vertices}
        for u, w in itertools.combinations(self.vertices, 2):
            common = set(self._vertex_facets[u]) & set(self._vertex_facets[w])
            normals = [self.facets[i][0] for i in common]
            if normals and matrix_rank(normals) == self.dim - 1:
                adj[u].append(w)
                adj[w].append(u)
        return {v: tuple(sorted(ws)) for v, ws in adj.items()}

    # -- basic queries --------------------------------------------------------

    def contains(self, p: Vec) -> bool:
        return all(dot(rho, p) + b >= 0 for rho, b in self.facets)

    def contains_lattice_point(self, p: Vec) -> bool:
        return p in self._point_set

    def vertex_facets(self, v: Vec) -> tuple[int, ...]:
        return self._vertex_facets[v]

    def adjacent_vertices(self, v: Vec) -> tuple[Vec, ...]:
        return self._edges[v]

    def edges(self) -> list[tuple[Vec, Vec]]:
        out = []
        for v, ws in self._edges.items():
            for w in ws:
                if v < w:
                    out.append((v, w))
        return sorted(out)

    def edge_lattice_length(self, u: Vec, w: Vec) -> int:
        return content(vsub(w, u))

    def neighbors(self, v: Vec) -> tuple[Vec, ...]:
        """Lattice points next to ``v`` along its edges."""
        out = []
        for w in self._edges[v]:
            step = primitive(vsub(w, v))
            out.append(vadd(v, step))
        return tuple(sorted(out))

    def is_simple_vertex(self, v: Vec) -> bool:
        return len(self._vertex_facets[v]) == self.dim

    @property
    def is_simple(self) -> bool:
        return all(self.is_simple_vertex(v) for v in self.vertices)

    def translate(self, t: Vec) -> "LatticePolytope":
        return LatticePolytope([vadd(v, t) for v in self.vertices])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatticePolytope)
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"LatticePolytope(d={self.dim}, vertices={list(self.vertices)})"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def lattice_points(P: LatticePolytope) -> list[Vec]:
    """All integer points of P, sorted lexicographically."""
    return list(P.lattice_points)


def corner_cone(P: LatticePolytope, v: Vec) -> RationalCone:
    """Cone at a vertex generated by the differences to all other vertices.

    Support hyperplanes are the recentred facets through the vertex, which
    are exactly the facets of the corner cone.
    """
    if v not in P._vertex_facets:
        raise ValueError(f"{v} is not a vertex")
    gens = []
    seen = set()
    for w in P.vertices:
        if w == v:
            continue
        g = primitive(vsub(w, v))
        if g not in seen:
            seen.add(g)
            gens.append(g)
    hyps = sorted(P.facets[i][0] for i in P._vertex_facets[v])
    return RationalCone(
        generators=tuple(gens),
        support_hyperplanes=tuple(hyps),
        dim=P.dim,
        rank=P.dim,
    )


def is_smooth(P: LatticePolytope) -> PredicateResult:
    """Every vertex simple with primitive edge directions a lattice basis."""
    d = P.dim
    for v in P.vertices:
        nbrs = P.adjacent_vertices(v)
        if len(nbrs) != d:
            return PredicateResult(
                False, witness=v, detail=f"vertex has {len(nbrs)} edges"
            )
        dirs = [primitive(vsub(w, v)) for w in nbrs]
        if not is_unimodular_basis(dirs):
            return PredicateResult(
                False, witness=v, detail="edge directions are not a basis"
            )
    return PredicateResult(True)


def is_very_ample(P: LatticePolytope) -> PredicateResult:
    """Hilbert basis of every corner cone stays inside the polytope."""
    if "very_ample" in P._cache:
        return P._cache["very_ample"]
    res = PredicateResult(True)
    for v in P.vertices:
        for h in hilbert_basis(corner_cone(P, v)):
            if not P.contains_lattice_point(vadd(v, h)):
                res = PredicateResult(
                    False,
                    witness=(v, h),
                    detail="corner Hilbert basis element leaves the polytope",
                )
                break
        if not res:
            break
    P._cache["very_ample"] = res
    return res


def is_normal(P: LatticePolytope, threads: int | None = None) -> PredicateResult:
    """All Hilbert basis elements of the cone over P x {1} at height 1."""
    if "normal" in P._cache:
        return P._cache["normal"]
    lifted = cone_from_generators([v + (1,) for v in P.vertices])
    hb = hilbert_basis(lifted, threads=threads)
    res = PredicateResult(True)
    for h in hb:
        if h[-1] >= 2:
            res = PredicateResult(
                False, witness=h, detail=f"gap at height {h[-1]}"
            )
            break
    P._cache["normal"] = res
    return res


def hc_condition(P: LatticePolytope) -> PredicateResult:
    """Corner monoid generators confined to the neighbor simplex.

    Requires a simple polytope; such polytopes are automatically very
    ample when the condition holds and the points span the lattice.
    """
    if not P.is_simple:
        bad = next(v for v in P.vertices if not P.is_simple_vertex(v))
        raise NonSimpleError(
            f"vertex {bad} lies on {len(P.vertex_facets(bad))} facets"
        )
    for v in P.vertices:
        gens = [vsub(p, v) for p in P.lattice_points if p != v]
        hilb = monoid_minimal_generators(gens)
        dirs = [vsub(w, v) for w in P.neighbors(v)]
        cols = [tuple(u[j] for u in dirs) for j in range(P.dim)]
        for h in hilb:
            t = solve_linear(cols, h)
            if t is None or any(x < 0 for x in t) or sum(t) > 1:
                return PredicateResult(
                    False,
                    witness=(v, h),
                    detail="corner generator escapes the neighbor simplex",
                )
    return PredicateResult(True)


def normal_fan(P: LatticePolytope):
    """Fan of inner facet normals, one maximal cone per vertex."""
    from .fans import Fan

    rays = tuple(rho for rho, _ in P.facets)
    cones = tuple(
        tuple(P.vertex_facets(v)) for v in P.vertices
    )
    return Fan(rays=rays, maximal_cones=cones, dim=P.dim)


def dilate(P: LatticePolytope, c: int) -> LatticePolytope:
    """The multiple cP."""
    if c <= 0:
        raise ValueError("dilation factor must be positive")
    return LatticePolytope([tuple(c * x for x in v) for v in P.vertices])


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def ehrhart(P: LatticePolytope) -> EhrhartData:
    """Counts for k = 0..d+1, numerator vector, interpolated polynomial.

    The counts come from direct enumeration, keeping this an independent
    code path from any cone computation; the polynomial is checked to
    reproduce the count at k = d+1.
    """
    if "ehrhart" in P._cache:
        return P._cache["ehrhart"]
    d = P.dim
    counts = [1]
    for k in range(1, d + 2):
        counts.append(len(dilate(P, k).lattice_points))

    hstar = []
    for j in range(d + 1):
        acc = 0
        for i in range(j + 1):
            term = _binomial(d + 1, i) * counts[j - i]
            acc += -term if i % 2 else term
        hstar.append(acc)
    if any(h < 0 for h in hstar) or hstar[0] != 1:
        raise AssertionError("numerator vector failed basic sanity checks")
    while len(hstar) > 1 and hstar[-1] == 0:
        hstar.pop()

    # Lagrange interpolation through k = 0..d
    coeffs = [Fraction(0)] * (d + 1)
    for k in range(d + 1):
        # basis polynomial prod_{m != k} (t - m) / (k - m)
        num = [Fraction(1)]
        den = Fraction(1)
        for m in range(d + 1):
            if m == k:
                continue
            num = _poly_mul(num, [Fraction(-m), Fraction(1)])
            den *= k - m
        for i in range(d + 1):
            coeffs[i] += counts[k] * num[i] / den

    data = EhrhartData(tuple(counts), tuple(hstar), tuple(coeffs))
    if data.evaluate(d + 1) != counts[d + 1]:
        raise AssertionError("Ehrhart interpolation failed cross-check")
    P._cache["ehrhart"] = data
    return data


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def normalized_volume(P: LatticePolytope) -> int:
    """d! times the Euclidean volume, via the Ehrhart leading coefficient."""
    data = ehrhart(P)
    lead = data.poly_coeffs[P.dim]
    fact = 1
    for i in range(2, P.dim + 1):
        fact *= i
    vol = lead * fact
    if vol.denominator != 1:
        raise AssertionError("leading coefficient times d! is not integral")
    return int(vol)


# ---------------------------------------------------------------------------
# faces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A proper nonempty face, identified by its vertex set."""

    vertices: tuple[Vec, ...]
    facet_indices: tuple[int, ...]
    dim: int


def proper_faces(P: LatticePolytope) -> list[Face]:
    """All proper nonempty faces, by increasing dimension, vertices first."""
    base: dict[frozenset, None] = {}
    facet_sets = []
    for i, (rho, b) in enumerate(P.facets):
        vs = frozenset(
            v for v in P.vertices if dot(rho, v) + b == 0
        )
        facet_sets.append(vs)
        base[vs] = None
    # close under pairwise intersection
    frontier = list(base)
    while frontier:
        nxt = []
        for fs in facet_sets:
            for g in frontier:
                h = fs & g
                if h and h not in base:
                    base[h] = None
                    nxt.append(h)
        frontier = nxt
    faces = []
    for vs in base:
        verts = tuple(sorted(vs))
        tight = tuple(
            i
            for i, (rho, b) in enumerate(P.facets)
            if all(dot(rho, v) + b == 0 for v in verts)
        )
        fdim = matrix_rank([vsub(v, verts[0]) for v in verts[1:]]) if len(verts) > 1 else 0
        faces.append(Face(verts, tight, fdim))
    faces.sort(key=lambda f: (f.dim, f.vertices))
    return faces


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def format_polytope(P: LatticePolytope) -> str:
    lines = [f"polytope {P.dim} {len(P.vertices)}"]
    for v in P.vertices:
        lines.append(" ".join(str(x) for x in v))
    return "\n".join(lines) + "\n"


def parse_polytope(text: str) -> LatticePolytope:
    """Parse the ``polytope <d> <n>`` text format; ``#`` lines are comments."""
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((lineno, stripped))
    if not rows:
        raise ParseError("empty polytope file", 1)
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "polytope":
        raise ParseError("expected header 'polytope <d> <n>'", lineno)
    try:
        d, n = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("header fields must be integers", lineno) from None
    if len(rows) - 1 != n:
        raise ParseError(
            f"expected {n} vertex lines, found {len(rows) - 1}", lineno
        )
    verts = []
    for lineno, line in rows[1:]:
        try:
            v = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError("vertex coordinates must be integers", lineno) from None
        if len(v) != d:
            raise ParseError(
                f"expected {d} coordinates, found {len(v)}", lineno
            )
        verts.append(v)
    return LatticePolytope(verts)
