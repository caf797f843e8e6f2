"""Pointed rational cones: duality, triangulation, Hilbert bases.

The dual-description workhorse is a classical double description run with
exact integer arithmetic and the combinatorial adjacency test.  Hilbert
bases use the primal strategy: triangulate, enumerate each fundamental
half-open parallelepiped through HNF residues, then reduce the candidate
pool to the irreducible elements in increasing degree.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from .errors import NonPointedConeError
from .intlinalg import (
    Vec,
    adjugate_and_det,
    determinant,
    dot,
    is_zero,
    lattice_index,
    matrix_rank,
    primitive,
    right_kernel,
    solve_linear,
    span_saturation,
    vadd,
    vsub,
)


@dataclass(frozen=True)
class RationalCone:
    """A pointed rational cone with both descriptions attached.

    ``generators`` are primitive and may be redundant (corner cones keep
    every vertex difference); ``support_hyperplanes`` are the irredundant
    primitive inner facet normals.  ``dim`` is the ambient dimension and
    ``rank`` the dimension of the linear span.
    """

    generators: tuple[Vec, ...]
    support_hyperplanes: tuple[Vec, ...]
    dim: int
    rank: int
    pointed: bool = True

    def contains(self, v: Vec) -> bool:
        if self.rank < self.dim and not is_zero(v):
            # membership additionally requires v to lie in the linear span
            cols = [tuple(g[j] for g in self.generators) for j in range(self.dim)]
            sol = solve_linear(cols, v)
            if sol is None:
                return False
        return all(dot(h, v) >= 0 for h in self.support_hyperplanes)


@dataclass(frozen=True)
class SimplicialCone:
    """Linearly independent generators plus their lattice multiplicity."""

    generators: tuple[Vec, ...]
    multiplicity: int


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------

def polar_rays(constraints: Sequence[Vec], dim: int) -> list[Vec]:
    """Extreme rays of ``{x : a . x >= 0 for all a}`` for a pointed cone.

    Raises :class:`NonPointedConeError` when the constraint normals do not
    span, i.e. the solution cone contains a line.
    """
    cons = [tuple(a) for a in constraints]
    if matrix_rank(cons) < dim:
        line = right_kernel(cons)[0] if cons else tuple(
            1 if i == 0 else 0 for i in range(dim)
        )
        raise NonPointedConeError(
            "constraint cone is not pointed", witness=primitive(line)
        )

    # initial simplicial cone from a greedy independent subset
    base_idx: list[int] = []
    for i, a in enumerate(cons):
        if matrix_rank([cons[j] for j in base_idx] + [a]) > len(base_idx):
            base_idx.append(i)
            if len(base_idx) == dim:
                break
    base = [cons[i] for i in base_idx]
    adj, det = adjugate_and_det(base)
    # column j of adj solves base . r_j = det * e_j >= 0
    rays = [primitive(tuple(adj[i][j] for i in range(dim))) for j in range(dim)]

    enforced = list(base_idx)
    zero_sets = [frozenset(k for k in enforced if dot(cons[k], r) == 0) for r in rays]

    for i, a in enumerate(cons):
        if i in base_idx:
            continue
        vals = [dot(a, r) for r in rays]
        if all(v >= 0 for v in vals):
            enforced.append(i)
            zero_sets = [
                z | {i} if v == 0 else z for z, v in zip(zero_sets, vals)
            ]
            continue
        plus = [k for k, v in enumerate(vals) if v > 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        minus = [k for k, v in enumerate(vals) if v < 0]

        def adjacent(p: int, q: int) -> bool:
            common = zero_sets[p] & zero_sets[q]
            for t in range(len(rays)):
                if t in (p, q):
                    continue
                if common <= zero_sets[t]:
                    return False
            return True

        new_rays = []
        new_zero = []
        for p in plus:
            for q in minus:
                if not adjacent(p, q):
                    continue
                r = primitive(
                    vsub(
                        tuple(vals[p] * x for x in rays[q]),
                        tuple(vals[q] * x for x in rays[p]),
                    )
                )
                new_rays.append(r)
                new_zero.append((zero_sets[p] & zero_sets[q]) | {i})
        rays = [rays[k] for k in plus] + [rays[k] for k in zero] + new_rays
        zero_sets = (
            [zero_sets[k] for k in plus]
            + [zero_sets[k] | {i} for k in zero]
            + new_zero
        )
        enforced.append(i)

    order = sorted(range(len(rays)), key=lambda k: rays[k])
    return [rays[k] for k in order]


def support_hyperplanes(generators: Sequence[Vec]) -> list[Vec]:
    """Irredundant primitive inner facet normals of a pointed cone.

    For a lower-dimensional cone the normals returned are valid support
    hyperplanes tight on the facets within the linear span.
    """
    gens = _clean_generators(generators)
    if not gens:
        raise ValueError("cone needs at least one nonzero generator")
    d = len(gens[0])
    r = matrix_rank(gens)
    if r == d:
        normals = polar_rays(gens, d)
        if matrix_rank(normals) < d:
            line = (
                primitive(right_kernel(normals)[0]) if normals else gens[0]
            )
            raise NonPointedConeError("cone contains a line", witness=line)
        return sorted(normals)
    # restrict to the saturated span, solve there, lift back
    sat = span_saturation(gens)
    sub = []
    for g in gens:
        from .intlinalg import express_in_basis

        coords = express_in_basis(sat, g)
        if coords is None:
            raise AssertionError("generator outside its own saturated span")
        sub.append(coords)
    try:
        sub_normals = support_hyperplanes(sub)
    except NonPointedConeError as err:
        w = err.witness
        lifted_w = tuple(
            sum(w[i] * sat[i][j] for i in range(len(sat))) for j in range(d)
        )
        raise NonPointedConeError(
            "cone contains a line", witness=primitive(lifted_w)
        ) from None
    lifted = []
    for nu in sub_normals:
        # find lam with lam . b_i = nu_i for the span basis rows b_i
        sol = solve_linear(sat, nu)
        if sol is None:
            raise AssertionError("normal lift failed")
        den = 1
        for x in sol:
            den = lcm(den, x.denominator)
        lifted.append(primitive(tuple(int(x * den) for x in sol)))
    return sorted(lifted)


def _clean_generators(generators: Iterable[Vec]) -> list[Vec]:
    seen = set()
    out = []
    for g in generators:
        if is_zero(g):
            continue
        p = primitive(g)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def cone_from_generators(generators: Sequence[Vec]) -> RationalCone:
    """Build a :class:`RationalCone`, verifying pointedness."""
    gens = _clean_generators(generators)
    if not gens:
        raise ValueError("cone needs at least one nonzero generator")
    d = len(gens[0])
    hyps = support_hyperplanes(gens)
    for g in gens:
        if any(dot(h, g) < 0 for h in hyps):
            raise AssertionError("generator violates its own support hyperplane")
    return RationalCone(
        generators=tuple(gens),
        support_hyperplanes=tuple(hyps),
        dim=d,
        rank=matrix_rank(gens),
    )


def extreme_rays(cone: RationalCone) -> list[Vec]:
    """The irredundant generators: tight on a facet-spanning normal set."""
    need = cone.rank - 1
    out = []
    for g in cone.generators:
        tight = [h for h in cone.support_hyperplanes if dot(h, g) == 0]
        if matrix_rank(tight) >= need if tight else need <= 0:
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# triangulation
# ---------------------------------------------------------------------------

def triangulate(
    cone: RationalCone, max_simplices: int | None = None
) -> list[SimplicialCone]:
    """Placing triangulation in the stored generator order.

    Requires a pointed full-dimensional cone.  The simplices use only input
    generators, cover the cone, and meet face to face.  Boundary ridges are
    tracked incrementally and their oriented normals cached, so insertions
    cost time proportional to the boundary only.
    """
    if cone.rank != cone.dim:
        raise ValueError("triangulate requires a full-dimensional cone")
    gens = cone.generators
    d = cone.dim

    base: list[int] = []
    for i in range(len(gens)):
        if matrix_rank([gens[j] for j in base] + [gens[i]]) > len(base):
            base.append(i)
            if len(base) == d:
                break

    simplices: list[tuple[int, ...]] = []
    ridge_count: dict[tuple[int, ...], int] = {}
    ridge_extra: dict[tuple[int, ...], int] = {}
    normal_cache: dict[tuple[int, ...], Vec] = {}

    def add_simplex(S: tuple[int, ...]) -> None:
        simplices.append(S)
        for drop in range(d):
            ridge = S[:drop] + S[drop + 1 :]
            n = ridge_count.get(ridge, 0) + 1
            ridge_count[ridge] = n
            if n == 1:
                ridge_extra[ridge] = S[drop]

    def oriented_normal(ridge: tuple[int, ...]) -> Vec:
        # inner normal with respect to the first simplex that owned the ridge
        n = normal_cache.get(ridge)
        if n is None:
            n = primitive(right_kernel([gens[j] for j in ridge])[0])
            if dot(n, gens[ridge_extra[ridge]]) < 0:
                n = tuple(-x for x in n)
            normal_cache[ridge] = n
        return n

    add_simplex(tuple(base))
    for i in range(len(gens)):
        if i in base:
            continue
        g = gens[i]
        visible = [
            ridge
            for ridge, cnt in ridge_count.items()
            if cnt == 1 and dot(oriented_normal(ridge), g) < 0
        ]
        for ridge in visible:
            add_simplex(tuple(sorted(ridge + (i,))))
            if max_simplices is not None and len(simplices) > max_simplices:
                from .errors import LimitsExceededError

                raise LimitsExceededError(
                    f"triangulation exceeds {max_simplices} simplices"
                )

    out = []
    for S in simplices:
        vs = tuple(gens[j] for j in S)
        out.append(SimplicialCone(vs, abs(determinant(vs))))
    return out


def multiplicity(sc_generators: Sequence[Vec]) -> int:
    """Lattice multiplicity of independent generators (any dimension)."""
    vs = [tuple(v) for v in sc_generators]
    d = len(vs[0])
    k = len(vs)
    if matrix_rank(vs) != k:
        raise ValueError("generators are linearly dependent")
    if k == d:
        return abs(determinant(vs))
    sat = span_saturation(vs)
    from .intlinalg import express_in_basis

    coords = [express_in_basis(sat, v) for v in vs]
    if any(c is None for c in coords):
        raise AssertionError("generator outside saturated span")
    return abs(determinant(coords))


def simplicial_cone(generators: Sequence[Vec]) -> SimplicialCone:
    gens = tuple(primitive(g) for g in generators)
    return SimplicialCone(gens, multiplicity(gens))


# ---------------------------------------------------------------------------
# parallelepiped enumeration and Hilbert bases
# ---------------------------------------------------------------------------

def _parallelepiped_points(gens: Sequence[Vec]) -> list[Vec]:
    """Nonzero lattice points of the half-open parallelepiped of a basis.

    The generators must be d linearly independent vectors in Z^d.  Residues
    of Z^d modulo the generated sublattice are enumerated through the HNF
    diagonal with an incremental odometer, then each residue is shifted
    into the fundamental domain.
    """
    from .intlinalg import hnf_pivots, hnf_rows

    d = len(gens[0])
    adj, det = adjugate_and_det(gens)
    if det == 1:
        return []
    H = hnf_rows(gens)
    diag = [1] * d
    for r, c in hnf_pivots(H):
        diag[c] = H[r][c]

    pts = []
    residue = [0] * d
    # nums[j] tracks sum_k residue[k] * adj[k][j]
    nums = [0] * d
    total = 1
    for k in diag:
        total *= k
    for _ in range(total - 1):
        # mixed-radix increment, updating nums as coordinates change
        k = d - 1
        while residue[k] + 1 == diag[k]:
            for j in range(d):
                nums[j] -= residue[k] * adj[k][j]
            residue[k] = 0
            k -= 1
        residue[k] += 1
        for j in range(d):
            nums[j] += adj[k][j]
        z = list(residue)
        for j in range(d):
            f = nums[j] // det
            if f:
                gj = gens[j]
                for t in range(d):
                    z[t] -= f * gj[t]
        pts.append(tuple(z))
    return pts


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("TORISCOPE_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def hilbert_basis(
    cone: RationalCone,
    threads: int | None = None,
    max_candidates: int | None = None,
    nonneg_coordinate_cap: tuple[int, int] | None = None,
) -> list[Vec]:
    """The unique minimal generating set of ``cone ∩ Z^d``.

    Candidates come from the fundamental parallelepipeds of a placing
    triangulation plus the generators; they are then sieved to the
    irreducible elements in order of increasing degree under the sum of
    the support forms.  The result is sorted lexicographically and does
    not depend on the thread count.

    ``nonneg_coordinate_cap = (k, c)`` restricts the computation to basis
    elements with ``v[k] <= c``.  This is only sound when the coordinate
    functional is nonnegative on the whole cone (then every summand of a
    kept element is kept, so the sieve below the cap is unaffected).
    """
    if not cone.pointed:
        raise NonPointedConeError("Hilbert basis requires a pointed cone")
    if cone.rank < cone.dim:
        return _hilbert_basis_lowdim(cone, threads, max_candidates)

    tri = triangulate(cone, max_simplices=max_candidates)
    if max_candidates is not None:
        volume = sum(sc.multiplicity for sc in tri)
        if volume > max_candidates:
            from .errors import LimitsExceededError

            raise LimitsExceededError(
                f"parallelepiped point total {volume} exceeds cap "
                f"{max_candidates}"
            )
    candidates: set[Vec] = set(cone.generators)

    def pieces(sc: SimplicialCone) -> list[Vec]:
        return _parallelepiped_points(sc.generators)

    nthreads = _thread_count(threads)
    if nthreads > 1 and len(tri) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            for chunk in pool.map(pieces, tri):
                candidates.update(chunk)
    else:
        for sc in tri:
            candidates.update(pieces(sc))
    if nonneg_coordinate_cap is not None:
        k, cap = nonneg_coordinate_cap
        candidates = {v for v in candidates if v[k] <= cap}
    if max_candidates is not None and len(candidates) > max_candidates:
        from .errors import LimitsExceededError

        raise LimitsExceededError(
            f"Hilbert basis candidate pool {len(candidates)} exceeds "
            f"cap {max_candidates}"
        )

    hyps = cone.support_hyperplanes
    # value vector under every support form; degree = their sum
    ordered = sorted(
        ((tuple(dot(h, v) for h in hyps), v) for v in candidates),
        key=lambda pair: (sum(pair[0]), pair[1]),
    )
    basis: list[Vec] = []
    basis_vals: list[Vec] = []
    degrees: list[int] = []
    for vals, v in ordered:
        deg = sum(vals)
        reducible = False
        for hv, hd in zip(basis_vals, degrees):
            if hd >= deg:
                break
            if all(a >= b for a, b in zip(vals, hv)):
                reducible = True
                break
        if not reducible:
            basis.append(v)
            basis_vals.append(vals)
            degrees.append(deg)
    return sorted(basis)


def _hilbert_basis_lowdim(cone, threads, max_candidates):
    sat = span_saturation(cone.generators)
    from .intlinalg import express_in_basis

    sub_gens = [express_in_basis(sat, g) for g in cone.generators]
    sub = cone_from_generators(sub_gens)
    hb = hilbert_basis(sub, threads=threads, max_candidates=max_candidates)
    lifted = []
    for v in hb:
        w = tuple(
            sum(v[i] * sat[i][j] for i in range(len(sat)))
            for j in range(cone.dim)
        )
        lifted.append(w)
    return sorted(lifted)


# ---------------------------------------------------------------------------
# stellar subdivision
# ---------------------------------------------------------------------------

def stellar_subdivide(
    cones: Sequence[SimplicialCone], ray: Vec
) -> list[SimplicialCone]:
    """Insert ``ray`` into a simplicial collection by stellar subdivision.

    Every cone containing the ray is replaced by the joins of the ray with
    its facets not containing the ray; the rest pass through unchanged.
    """
    r = primitive(ray)
    out: list[SimplicialCone] = []
    touched = False
    for sc in cones:
        coords = _membership_coords(sc.generators, r)
        if coords is None:
            out.append(sc)
            continue
        touched = True
        positive = [i for i, q in enumerate(coords) if q > 0]
        if len(positive) == 1:
            # the ray is one of the generators: nothing to split
            out.append(sc)
            continue
        for i in positive:
            gens = tuple(
                r if j == i else g for j, g in enumerate(sc.generators)
            )
            out.append(SimplicialCone(gens, multiplicity(gens)))
    if not touched:
        raise ValueError("ray lies outside every cone of the collection")
    return out


def _membership_coords(gens: Sequence[Vec], v: Vec):
    """Nonnegative rational coordinates of v over independent generators."""
    cols = [tuple(g[j] for g in gens) for j in range(len(v))]
    sol = solve_linear(cols, v)
    if sol is None:
        return None
    # solve_linear zero-fills free variables; verify the combination
    for j in range(len(v)):
        if sum(sol[i] * gens[i][j] for i in range(len(gens))) != v[j]:
            return None
    if any(q < 0 for q in sol):
        return None
    return sol


# ---------------------------------------------------------------------------
# the d+1 generator criterion
# ---------------------------------------------------------------------------

def dplus1_hilbert_criterion(generators: Sequence[Vec]) -> bool:
    """Facet-completion test certifying that d+1 generators are a Hilbert basis.

    For each facet, the generators lying on it together with one of the
    remaining generators must form a basis of the full lattice.  A True
    answer guarantees the generators are the Hilbert basis of their cone.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        raise ValueError("empty generator list")
    d = len(gens[0])
    if len(gens) != d + 1:
        raise ValueError(f"criterion needs exactly {d + 1} generators")
    cone = cone_from_generators(gens)
    if cone.rank != d:
        raise ValueError("criterion requires a full-dimensional cone")
    for h in cone.support_hyperplanes:
        on_facet = [g for g in gens if dot(h, g) == 0]
        off = [g for g in gens if dot(h, g) != 0]
        if not any(
            abs(lattice_index(on_facet + [g])) == 1 for g in off
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# minimal generators of a (possibly non-saturated) affine monoid
# ---------------------------------------------------------------------------

def monoid_minimal_generators(generators: Sequence[Vec]) -> list[Vec]:
    """Irreducible elements of the monoid generated by the given vectors.

    The generators must span a pointed cone.  Membership in the generated
    monoid is decided by grading-bounded recursive decomposition, so this
    also works for non-saturated monoids (where cone membership would lie).
    """
    gens = []
    seen = set()
    for g in generators:
        t = tuple(g)
        if not is_zero(t) and t not in seen:
            seen.add(t)
            gens.append(t)
    if not gens:
        return []
    hyps = support_hyperplanes(gens)
    if matrix_rank(gens) == len(gens[0]) and matrix_rank(hyps) < len(gens[0]):
        raise NonPointedConeError("monoid cone is not pointed")
    grading = tuple(sum(h[j] for h in hyps) for j in range(len(gens[0])))
    if any(dot(grading, g) <= 0 for g in gens):
        raise NonPointedConeError("monoid cone is not pointed")

    memo: dict[Vec, bool] = {}

    def member(v: Vec) -> bool:
        if is_zero(v):
            return True
        if any(dot(h, v) < 0 for h in hyps):
            return False
        if v in memo:
            return memo[v]
        memo[v] = False  # guards cycles; grading strictly decreases anyway
        ans = False
        for g in gens:
            w = vsub(v, g)
            if dot(grading, w) >= 0 and member(w):
                ans = True
                break
        memo[v] = ans
        return ans

    out = []
    for g in gens:
        reducible = any(
            member(vsub(g, g2)) for g2 in gens if g2 != g
            and dot(grading, vsub(g, g2)) > 0
        )
        if not reducible:
            out.append(g)
    return sorted(out)
