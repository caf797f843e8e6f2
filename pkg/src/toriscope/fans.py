"""Complete simplicial fans: random generation, desingularization, and
reconstruction of the polytopes a fan supports.

Rays live in the dual lattice.  The support-polytope pipeline follows the
homogenized right-hand-side cone: admissible offset vectors are the
lattice points of a cone in the (Picard rank + 1)-dimensional space of
offsets-with-margin, restricted to the sublattice on which every maximal
cone's vertex equations have integer solutions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cones import (
    RationalCone,
    _membership_coords,
    hilbert_basis,
    polar_rays,
    simplicial_cone,
)
from .errors import (
    DegenerateInputError,
    LimitsExceededError,
    ParseError,
    ToriscopeError,
)
from .intlinalg import (
    Vec,
    determinant,
    dot,
    hnf_rows,
    is_zero,
    matrix_rank,
    primitive,
    right_kernel,
    solve_linear,
    vsub,
)
from .polytopes import LatticePolytope, normal_fan


@dataclass(frozen=True)
class Fan:
    """Primitive rays plus maximal cones as sorted ray-index tuples."""

    rays: tuple[Vec, ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(
            self, "maximal_cones",
            tuple(tuple(sorted(c)) for c in self.maximal_cones),
        )

    def cone_generators(self, ci: int) -> tuple[Vec, ...]:
        return tuple(self.rays[i] for i in self.maximal_cones[ci])

    @property
    def simplicial(self) -> bool:
        return all(
            len(c) == self.dim
            and matrix_rank(self.cone_generators(i)) == self.dim
            for i, c in enumerate(self.maximal_cones)
        )

    @property
    def complete(self) -> bool:
        """Ridge-pairing test: every ridge lies in exactly two cones."""
        if not self.simplicial:
            raise ValueError("completeness flag implemented for simplicial fans")
        count: dict[tuple[int, ...], int] = {}
        for c in self.maximal_cones:
            for drop in range(len(c)):
                ridge = c[:drop] + c[drop + 1 :]
                count[ridge] = count.get(ridge, 0) + 1
        return all(v == 2 for v in count.values())

    @property
    def unimodular(self) -> bool:
        return self.simplicial and all(
            abs(determinant(self.cone_generators(i))) == 1
            for i in range(len(self.maximal_cones))
        )

    def multiplicities(self) -> list[int]:
        return [
            abs(determinant(self.cone_generators(i)))
            for i in range(len(self.maximal_cones))
        ]

    def cone_contains(self, ci: int, w: Vec) -> bool:
        return _membership_coords(list(self.cone_generators(ci)), w) is not None


def fan_equals(f1: Fan, f2: Fan) -> bool:
    """Equality as sets of maximal cones (rays matched as vectors)."""
    if f1.dim != f2.dim:
        return False
    s1 = {frozenset(f1.cone_generators(i)) for i in range(len(f1.maximal_cones))}
    s2 = {frozenset(f2.cone_generators(i)) for i in range(len(f2.maximal_cones))}
    return s1 == s2


def _canonical_fan(rays: Sequence[Vec], cones: Sequence[Sequence[int]], d: int) -> Fan:
    """Sort rays lexicographically and cones by their sorted index tuples."""
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    old_to_new = {old: new for new, old in enumerate(order)}
    new_rays = tuple(rays[i] for i in order)
    new_cones = sorted(tuple(sorted(old_to_new[i] for i in c)) for c in cones)
    dedup = []
    for c in new_cones:
        if not dedup or dedup[-1] != c:
            dedup.append(c)
    return Fan(rays=new_rays, maximal_cones=tuple(dedup), dim=d)


# ---------------------------------------------------------------------------
# random projective fans
# ---------------------------------------------------------------------------

class _DegenerateHeights(Exception):
    pass


def random_complete_fan(
    seed,
    d: int,
    num_points: int,
    coord_bound: int,
    points: Sequence[Vec] | None = None,
    max_retries: int = 200,
) -> Fan:
    """Complete simplicial fan over a lifted boundary triangulation.

    Random lattice points are drawn in the coordinate box until their hull
    contains the origin in its interior; the boundary is then triangulated
    by a seeded height lift and the cones over the cells form the fan.
    Passing ``points`` skips the sampling (used to force specific fans).
    """
    if d < 2:
        raise ValueError("fans need dimension at least 2")
    rng = random.Random(f"fan:{seed}")

    for attempt in range(max_retries):
        if points is not None:
            pts = [tuple(p) for p in points]
        else:
            drawn = set()
            while len(drawn) < num_points:
                p = tuple(
                    rng.randint(-coord_bound, coord_bound) for _ in range(d)
                )
                if not is_zero(p):
                    drawn.add(p)
            pts = sorted(drawn)
        try:
            hull = LatticePolytope(pts)
        except DegenerateInputError:
            if points is not None:
                raise
            continue
        if all(b > 0 for _, b in hull.facets):
            break
        if points is not None:
            raise ValueError("origin is not interior to the forced point hull")
    else:
        raise ToriscopeError(
            f"no hull with interior origin after {max_retries} draws"
        )

    boundary = [
        p
        for p in pts
        if any(dot(rho, p) + b == 0 for rho, b in hull.facets)
    ]

    for _ in range(50):
        heights = {p: rng.randrange(1, 1 << 20) for p in boundary}
        try:
            cells = _boundary_triangulation(hull, boundary, heights)
        except _DegenerateHeights:
            continue
        break
    else:
        raise ToriscopeError("could not reach a generic height lift")

    ray_list: list[Vec] = []
    ray_index: dict[Vec, int] = {}
    cones = []
    for cell in cells:
        idxs = []
        for p in cell:
            r = primitive(p)
            if r not in ray_index:
                ray_index[r] = len(ray_list)
                ray_list.append(r)
            idxs.append(ray_index[r])
        cones.append(tuple(sorted(idxs)))
    fan = _canonical_fan(ray_list, cones, d)
    if not fan.simplicial or not fan.complete:
        raise AssertionError("boundary triangulation did not yield a complete fan")
    return fan


def _boundary_triangulation(hull, boundary, heights):
    """Cells (tuples of points) of the height-induced boundary subdivision."""
    d = hull.dim
    cells = []
    seen = set()
    for rho, b in hull.facets:
        fpts = [p for p in boundary if dot(rho, p) + b == 0]
        drop = max(range(d), key=lambda j: abs(rho[j]))
        proj = {p: tuple(x for j, x in enumerate(p) if j != drop) for p in fpts}
        for T in itertools.combinations(fpts, d):
            rows = [proj[p] + (1,) for p in T]
            rhs = [heights[p] for p in T]
            if matrix_rank(rows) < d:
                continue
            alpha = solve_linear(rows, rhs)
            lower = True
            for q in fpts:
                if q in T:
                    continue
                val = sum(
                    alpha[i] * x for i, x in enumerate(proj[q] + (1,))
                )
                if val == heights[q]:
                    raise _DegenerateHeights()
                if val > heights[q]:
                    lower = False
                    break
            if lower:
                key = frozenset(T)
                if key not in seen:
                    seen.add(key)
                    cells.append(tuple(sorted(T)))
    return cells


# ---------------------------------------------------------------------------
# desingularization
# ---------------------------------------------------------------------------

def desingularize(
    fan: Fan,
    seed=0,
    max_extra_rays: int = 20,
    max_cones: int = 150,
) -> Fan:
    """Refine by stellar subdivisions until every maximal cone is unimodular.

    Hilbert basis vectors of all non-unimodular cones are inserted in a
    seeded random order, recomputed each round.  Ray and cone caps abort
    the refinement with :class:`LimitsExceededError` carrying the partial fan.
    """
    if not fan.simplicial:
        raise ValueError("desingularize requires a simplicial fan")
    rng = random.Random(f"desing:{seed}")
    d = fan.dim
    rays = list(fan.rays)
    cones = [tuple(c) for c in fan.maximal_cones]

    def current() -> Fan:
        return _canonical_fan(rays, cones, d)

    while True:
        pending: list[Vec] = []
        pending_set = set()
        for c in cones:
            gens = [rays[i] for i in c]
            if abs(determinant(gens)) == 1:
                continue
            for h in hilbert_basis(simplicial_cone_as_rational(gens)):
                if h not in pending_set and h not in rays:
                    pending_set.add(h)
                    pending.append(h)
        if not pending:
            break
        rng.shuffle(pending)
        for r in pending:
            if r in rays:
                continue  # an earlier insertion this round already added it
            if len(rays) + 1 > d + max_extra_rays:
                raise LimitsExceededError(
                    f"ray budget d + {max_extra_rays} exhausted",
                    partial=current(),
                )
            new_cones = _insert_ray(rays, cones, r)
            if len(new_cones) > max_cones:
                raise LimitsExceededError(
                    f"maximal cone budget {max_cones} exhausted",
                    partial=current(),
                )
            cones = new_cones
    out = current()
    if not out.unimodular or not out.complete:
        raise AssertionError("desingularization failed to reach a unimodular fan")
    return out


def simplicial_cone_as_rational(gens: Sequence[Vec]) -> RationalCone:
    from .cones import cone_from_generators

    return cone_from_generators(gens)


def _insert_ray(rays: list[Vec], cones: list[tuple[int, ...]], r: Vec):
    """Stellar subdivision of the cone list at a new ray (mutates rays)."""
    split_plan = []
    touched = False
    for c in cones:
        gens = [rays[i] for i in c]
        coords = _membership_coords(gens, r)
        if coords is None:
            split_plan.append((c, None))
            continue
        positive = [k for k, q in enumerate(coords) if q > 0]
        touched = True
        if len(positive) == 1:
            split_plan.append((c, None))
        else:
            split_plan.append((c, positive))
    if not touched:
        raise ValueError("insertion ray lies outside the fan support")
    rays.append(r)
    ri = len(rays) - 1
    out = []
    for c, positive in split_plan:
        if positive is None:
            out.append(c)
        else:
            for k in positive:
                out.append(tuple(sorted(c[:k] + c[k + 1 :] + (ri,))))
    return out


# ---------------------------------------------------------------------------
# the vertex-equation sublattice
# ---------------------------------------------------------------------------

def _offset_kernel_basis(fan: Fan, pinned: tuple[int, ...] | None) -> list[Vec]:
    """Basis of the offset vectors admitting integer vertices on every cone.

    With ``pinned`` the offsets of those rays are forced to zero as well.
    The basis rows live in Z^s, s the number of rays.
    """
    s = len(fan.rays)
    d = fan.dim
    m = len(fan.maximal_cones)
    width = s + m * d
    equations: list[Vec] = []
    for k, c in enumerate(fan.maximal_cones):
        for i in c:
            row = [0] * width
            row[i] = 1
            rho = fan.rays[i]
            for j in range(d):
                row[s + k * d + j] = rho[j]
            equations.append(tuple(row))
    if pinned:
        for i in pinned:
            row = [0] * width
            row[i] = 1
            equations.append(tuple(row))
    kernel = right_kernel(equations)
    projected = [k[:s] for k in kernel]
    projected = [p for p in projected if not is_zero(p)]
    if not projected:
        return []
    return list(hnf_rows(projected))


def cartier_lattice(fan: Fan) -> list[Vec]:
    """HNF basis of the sublattice of offsets with integer cone vertices.

    For unimodular fans this is the identity basis of Z^s.
    """
    if not fan.simplicial:
        raise ValueError("cartier lattice computed for simplicial fans")
    return _offset_kernel_basis(fan, pinned=None)


def _vertex_of(fan: Fan, cone_idx: int, b: Sequence[int]) -> Vec:
    """Integer solution of rho_i . v = -b_i over the cone's rays."""
    c = fan.maximal_cones[cone_idx]
    rows = [fan.rays[i] for i in c]
    rhs = [-b[i] for i in c]
    sol = solve_linear(rows, rhs)
    if sol is None or any(x.denominator != 1 for x in sol):
        raise AssertionError("offset vector admits no integer vertex")
    return tuple(int(x) for x in sol)


# ---------------------------------------------------------------------------
# support polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportVector:
    """Offset vector b (indexed by rays) with the vertex each cone gets."""

    b: Vec
    vertex_map: tuple[tuple[tuple[int, ...], Vec], ...]


@dataclass(frozen=True)
class SupportResult:
    polytopes: tuple[LatticePolytope, ...]
    support_vectors: tuple[SupportVector, ...]
    verdict: str  # "projective" | "non_projective" | "inconclusive"
    mode: str
    note: str = ""
    discarded: int = 0


def _neighbor_pairs(fan: Fan) -> list[tuple[int, int]]:
    """The reduced inequality index set: (cone, opposite ray) per wall."""
    ridge_map: dict[tuple[int, ...], list[int]] = {}
    for ci, c in enumerate(fan.maximal_cones):
        for drop in range(len(c)):
            ridge = c[:drop] + c[drop + 1 :]
            ridge_map.setdefault(ridge, []).append(ci)
    pairs = []
    for ridge, owners in ridge_map.items():
        if len(owners) != 2:
            raise ValueError("fan is not complete: unpaired ridge")
        for a, bside in ((0, 1), (1, 0)):
            ci = owners[a]
            other = fan.maximal_cones[owners[bside]]
            j = next(i for i in other if i not in ridge)
            pairs.append((ci, j))
    return sorted(set(pairs))


def full_inequality_pairs(fan: Fan) -> list[tuple[int, int]]:
    """Every (cone, ray-outside-it) pair; the unreduced verification system."""
    out = []
    for ci, c in enumerate(fan.maximal_cones):
        for j in range(len(fan.rays)):
            if j not in c:
                out.append((ci, j))
    return out


def support_polytopes(
    fan: Fan,
    mode: str = "hilbert_basis",
    max_candidates: int | None = 200000,
    threads: int | None = None,
) -> SupportResult:
    """Inclusion-minimal lattice polytopes whose normal fan is the input.

    Offsets come from the Hilbert basis (or, in ``extreme_rays`` mode, the
    extreme rays) of the homogenized admissibility cone restricted to the
    integer-vertex sublattice, filtered to margin one.  Every candidate is
    materialized from its inequality system and kept only if its normal
    fan reproduces the input fan exactly; survivors are pruned to the
    inclusion-minimal ones.
    """
    if mode not in ("hilbert_basis", "extreme_rays"):
        raise ValueError(f"unknown mode {mode!r}")
    if not fan.simplicial:
        raise ValueError("support polytopes computed for simplicial fans")
    if not fan.complete:
        raise ValueError("support polytopes need a complete fan")

    s = len(fan.rays)
    d = fan.dim
    base_cone = fan.maximal_cones[0]
    basis = _offset_kernel_basis(fan, pinned=base_cone)
    rank = len(basis)
    if rank != s - d:
        raise AssertionError(
            f"pinned offset lattice has rank {rank}, expected {s - d}"
        )

    # vertex of each cone as an integer-linear function of the basis coords
    vertex_rows: list[list[Vec]] = []
    for ci in range(len(fan.maximal_cones)):
        vertex_rows.append([_vertex_of(fan, ci, t) for t in basis])

    pairs = _neighbor_pairs(fan)
    constraints: list[Vec] = []
    for ci, j in pairs:
        rho = fan.rays[j]
        row = [
            dot(rho, vertex_rows[ci][l]) + basis[l][j] for l in range(rank)
        ]
        row.append(-1)
        constraints.append(tuple(row))
    constraints.append(tuple([0] * rank + [1]))
    constraints = sorted(set(constraints))

    rays = polar_rays(constraints, rank + 1)
    margin_cone = RationalCone(
        generators=tuple(rays),
        support_hyperplanes=tuple(constraints),
        dim=rank + 1,
        rank=matrix_rank(rays),
    )

    # a lattice point with positive margin exists iff some extreme ray
    # has one; this settles projectivity without any Hilbert basis work
    has_positive = any(r[rank] > 0 for r in rays)

    note = ""
    if mode == "hilbert_basis":
        # only margin <= 1 elements are ever extracted, and the margin
        # coordinate is nonnegative on the cone, so cap the sieve there
        elements = hilbert_basis(
            margin_cone,
            threads=threads,
            max_candidates=max_candidates,
            nonneg_coordinate_cap=(rank, 1),
        )
        can_certify = True
    else:
        elements = sorted(rays)
        can_certify = False
        note = "extreme-ray mode: no minimality guarantee"

    candidates = [e for e in elements if e[rank] == 1]

    verified: list[tuple[LatticePolytope, SupportVector]] = []
    discarded = 0
    for e in candidates:
        u = e[:rank]
        b = [0] * s
        for l, ul in enumerate(u):
            for j in range(s):
                b[j] += ul * basis[l][j]
        poly = _materialize(fan, b)
        if poly is None:
            discarded += 1
            continue
        vmap = tuple(
            (fan.maximal_cones[ci], _vertex_of(fan, ci, b))
            for ci in range(len(fan.maximal_cones))
        )
        verified.append((poly, SupportVector(tuple(b), vmap)))

    minimal = []
    for i, (p, sv) in enumerate(verified):
        contained = False
        for k, (q, _) in enumerate(verified):
            if k != i and all(p.contains(v) for v in q.vertices) and q != p:
                contained = True
                break
        if not contained:
            minimal.append((p, sv))

    if minimal:
        verdict = "projective"
    elif can_certify and not has_positive:
        verdict = "non_projective"
    else:
        verdict = "inconclusive"
        if not note:
            note = "candidates existed but none survived verification"

    return SupportResult(
        polytopes=tuple(p for p, _ in minimal),
        support_vectors=tuple(sv for _, sv in minimal),
        verdict=verdict,
        mode=mode,
        note=note,
        discarded=discarded,
    )


def _materialize(fan: Fan, b: Sequence[int]) -> LatticePolytope | None:
    """Vertex enumeration of {x : rho_i(x) >= -b_i}; None unless it is a
    lattice polytope."""
    d = fan.dim
    rows = [fan.rays[i] + (b[i],) for i in range(len(fan.rays))]
    rows.append(tuple([0] * d + [1]))
    try:
        rays = polar_rays(rows, d + 1)
    except ToriscopeError:
        return None
    verts = []
    for r in rays:
        if r[d] == 0:
            raise AssertionError("support region is unbounded for a complete fan")
        if r[d] != 1:
            return None  # rational, not a lattice polytope
        verts.append(r[:d])
    try:
        return LatticePolytope(verts)
    except DegenerateInputError:
        return None


def verify_support_polytope(fan: Fan, poly: LatticePolytope) -> bool:
    return fan_equals(normal_fan(poly), fan)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def format_fan(fan: Fan) -> str:
    lines = [f"fan {fan.dim} {len(fan.rays)} {len(fan.maximal_cones)}"]
    for r in fan.rays:
        lines.append(" ".join(str(x) for x in r))
    for c in fan.maximal_cones:
        lines.append(" ".join(str(i) for i in c))
    return "\n".join(lines) + "\n"


def parse_fan(text: str) -> Fan:
    """Parse the ``fan <d> <s> <m>`` text format; ``#`` lines are comments."""
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((lineno, stripped))
    if not rows:
        raise ParseError("empty fan file", 1)
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "fan":
        raise ParseError("expected header 'fan <d> <s> <m>'", lineno)
    try:
        d, s, m = (int(x) for x in parts[1:])
    except ValueError:
        raise ParseError("header fields must be integers", lineno) from None
    if len(rows) - 1 != s + m:
        raise ParseError(
            f"expected {s} ray and {m} cone lines, found {len(rows) - 1}",
            lineno,
        )
    rays = []
    for lineno, line in rows[1 : 1 + s]:
        try:
            r = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError("ray coordinates must be integers", lineno) from None
        if len(r) != d:
            raise ParseError(f"expected {d} coordinates", lineno)
        rays.append(r)
    cones = []
    for lineno, line in rows[1 + s :]:
        try:
            c = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError("cone indices must be integers", lineno) from None
        if any(i < 0 or i >= s for i in c):
            raise ParseError("cone index out of range", lineno)
        cones.append(c)
    return Fan(rays=tuple(rays), maximal_cones=tuple(cones), dim=d)
