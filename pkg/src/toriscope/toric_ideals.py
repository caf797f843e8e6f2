"""Bounded-degree toric ideal computations.

Variables are the lattice points of a polytope, ordered lexicographically
(earlier point = more significant variable); the term order is graded
reverse lexicographic.  Monomials of degree k are sorted index tuples of
length k.  Binomials connect monomials with equal point-sum, so all the
degree-3 work is organized in tables keyed by that multidegree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .intlinalg import Vec, vadd, vsub
from .polytopes import LatticePolytope, PredicateResult, ehrhart, is_normal

Monomial = tuple[int, ...]  # sorted variable indices, length = degree


def grevlex_less(a: Monomial, b: Monomial) -> bool:
    """Graded reverse lexicographic comparison for equal-degree monomials.

    A monomial is smaller when the largest index where the exponents
    differ carries more of it.
    """
    if a == b:
        return False
    return a[::-1] > b[::-1]


def grevlex_min(monomials: Iterable[Monomial]) -> Monomial:
    return max(monomials, key=lambda m: m[::-1])


def _msum(points: Sequence[Vec], mono: Monomial) -> Vec:
    acc = points[mono[0]]
    for i in mono[1:]:
        acc = vadd(acc, points[i])
    return acc


@dataclass(frozen=True)
class ExponentBinomial:
    """Difference of two monomials with the same point multidegree."""

    plus: Monomial   # the grevlex-larger monomial (the lead)
    minus: Monomial
    degree: int

    def exponents(self) -> tuple[dict[int, int], dict[int, int]]:
        p: dict[int, int] = {}
        for i in self.plus:
            p[i] = p.get(i, 0) + 1
        m: dict[int, int] = {}
        for i in self.minus:
            m[i] = m.get(i, 0) + 1
        return p, m


@dataclass(frozen=True)
class TruncatedHVector:
    """Dimensions of the quotient by the initial ideal in degrees 0..3."""

    h0: int
    h1: int
    h2: int
    h3: int


def _degree2_classes(points: Sequence[Vec]) -> dict[Vec, list[Monomial]]:
    classes: dict[Vec, list[Monomial]] = {}
    n = len(points)
    for i in range(n):
        for j in range(i, n):
            classes.setdefault(vadd(points[i], points[j]), []).append((i, j))
    return classes


def degree2_binomials(P: LatticePolytope) -> list[ExponentBinomial]:
    """Every degree-2 binomial of the toric ideal, deduplicated.

    All unordered pairs of distinct degree-2 monomials sharing a point sum,
    oriented so that ``plus`` is the term-order lead.
    """
    points = P.lattice_points
    out = []
    for _, monos in sorted(_degree2_classes(points).items()):
        if len(monos) < 2:
            continue
        for a_idx in range(len(monos)):
            for b_idx in range(a_idx + 1, len(monos)):
                a, b = monos[a_idx], monos[b_idx]
                if grevlex_less(a, b):
                    a, b = b, a
                out.append(ExponentBinomial(a, b, 2))
    return out


def degree2_groebner(P: LatticePolytope) -> list[ExponentBinomial]:
    """Degree-2 component of the reduced Groebner basis of the quadric ideal.

    One element per non-minimal monomial in each multidegree class, with
    the class minimum as tail.
    """
    points = P.lattice_points
    out = []
    for _, monos in sorted(_degree2_classes(points).items()):
        if len(monos) < 2:
            continue
        mmin = grevlex_min(monos)
        for m in monos:
            if m != mmin:
                out.append(ExponentBinomial(m, mmin, 2))
    return out


def _degree3_classes(points: Sequence[Vec]) -> dict[Vec, list[Monomial]]:
    classes: dict[Vec, list[Monomial]] = {}
    n = len(points)
    for i in range(n):
        pi = points[i]
        for j in range(i, n):
            pij = vadd(pi, points[j])
            for k in range(j, n):
                classes.setdefault(vadd(pij, points[k]), []).append((i, j, k))
    return classes


def degree3_groebner(
    P: LatticePolytope,
    order_seed=None,
    max_points: int | None = None,
) -> list[ExponentBinomial]:
    """Degree-3 component of the reduced Groebner basis of the quadric ideal.

    Buchberger restricted to degree 3: S-pairs are formed only between
    degree-2 elements whose leads share a variable (larger lcm degrees are
    never formed), remainders are interreduced at the end, so the output
    is independent of the processing order.  ``order_seed`` shuffles the
    S-pair queue to exercise exactly that.
    """
    points = P.lattice_points
    n = len(points)
    if max_points is not None and n > max_points:
        from .errors import LimitsExceededError

        raise LimitsExceededError(
            f"{n} lattice points exceed the degree-3 table cap {max_points}"
        )

    classes2 = _degree2_classes(points)
    lead_tail2: dict[Monomial, Monomial] = {}
    for monos in classes2.values():
        if len(monos) < 2:
            continue
        mmin = grevlex_min(monos)
        for m in monos:
            if m != mmin:
                lead_tail2[m] = mmin

    by_var: dict[int, list[Monomial]] = {}
    for lead in lead_tail2:
        for v in set(lead):
            by_var.setdefault(v, []).append(lead)

    spairs: list[tuple[Monomial, Monomial, int]] = []
    seen_pairs = set()
    for v, leads in sorted(by_var.items()):
        leads = sorted(leads)
        for x in range(len(leads)):
            for y in range(x + 1, len(leads)):
                key = (leads[x], leads[y], v)
                if key not in seen_pairs:
                    seen_pairs.add(key)
                    spairs.append(key)
    if order_seed is not None:
        random.Random(f"gb3:{order_seed}").shuffle(spairs)

    lead_tail3: dict[Monomial, Monomial] = {}

    def reduce3(m: Monomial) -> Monomial:
        while True:
            if m in lead_tail3:
                m = lead_tail3[m]
                continue
            reduced = False
            for drop in range(3):
                pair = tuple(sorted((m[(drop + 1) % 3], m[(drop + 2) % 3])))
                tail = lead_tail2.get(pair)
                if tail is not None:
                    m = tuple(sorted(tail + (m[drop],)))
                    reduced = True
                    break
            if not reduced:
                return m

    for f_lead, g_lead, v in spairs:
        # lcm of the two leads through the shared variable v
        fc = list(f_lead)
        fc.remove(v)
        gc = list(g_lead)
        gc.remove(v)
        lcm = tuple(sorted((v, *fc, *gc)))
        if len(lcm) != 3:
            continue
        m1 = reduce3(tuple(sorted(lead_tail2[f_lead] + tuple(gc))))
        m2 = reduce3(tuple(sorted(lead_tail2[g_lead] + tuple(fc))))
        if m1 == m2:
            continue
        if grevlex_less(m1, m2):
            m1, m2 = m2, m1
        lead_tail3[m1] = m2

    # interreduce: tails to their final normal forms; canonical output
    out = []
    for lead in sorted(lead_tail3):
        tail = reduce3(lead_tail3[lead])
        out.append(ExponentBinomial(lead, tail, 3))
    return sorted(out, key=lambda b: (b.plus, b.minus))


def truncated_h_vector(
    P: LatticePolytope, max_points: int | None = None
) -> TruncatedHVector:
    """Quotient dimensions by the initial ideal of the quadric ideal, 0..3."""
    points = P.lattice_points
    n = len(points)
    classes2 = _degree2_classes(points)
    h2 = len(classes2)

    lead2 = set()
    for monos in classes2.values():
        if len(monos) < 2:
            mmin = monos[0]
        else:
            mmin = grevlex_min(monos)
        for m in monos:
            if m != mmin:
                lead2.add(m)

    gb3 = degree3_groebner(P, max_points=max_points)
    lead3 = {b.plus for b in gb3}

    h3 = 0
    for monos in _degree3_classes(points).values():
        for m in monos:
            if m in lead3:
                continue
            divisible = False
            for drop in range(3):
                pair = tuple(sorted((m[(drop + 1) % 3], m[(drop + 2) % 3])))
                if pair in lead2:
                    divisible = True
                    break
            if not divisible:
                h3 += 1
    return TruncatedHVector(h0=1, h1=n, h2=h2, h3=h3)


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def needs_degree3_generators(
    P: LatticePolytope, max_points: int | None = None
) -> PredicateResult:
    """True iff the toric ideal needs a generator in degree 3.

    Compares the degree-3 numerator coefficient of the quadric-ideal
    quotient with the lattice point series numerator; the two agree up to
    degree 2 for any lattice polytope, so a degree-3 discrepancy is exactly
    a missing relation.  The comparison presumes the point series counts
    the graded algebra, i.e. normality.
    """
    if not P.spans_lattice:
        raise ValueError("lattice points must span the full lattice")
    if not is_normal(P):
        raise ValueError("h-vector comparison requires normality")
    hv = truncated_h_vector(P, max_points=max_points)
    d = P.dim
    hf = [hv.h0, hv.h1, hv.h2, hv.h3]
    quad_hstar3 = sum(
        (-1) ** i * _binom(d + 1, i) * hf[3 - i] for i in range(4)
    )
    counts = ehrhart(P).counts
    ehr = [counts[k] if k < len(counts) else None for k in range(4)]
    if ehr[3] is None:
        ehr[3] = len(dilate_count(P, 3))
    ehr_hstar3 = sum(
        (-1) ** i * _binom(d + 1, i) * ehr[3 - i] for i in range(4)
    )
    if quad_hstar3 == ehr_hstar3:
        return PredicateResult(False)
    witness = _first_disconnected_multidegree(P)
    return PredicateResult(
        True,
        witness=witness,
        detail="degree-3 numerator coefficients differ",
    )


def dilate_count(P: LatticePolytope, k: int):
    from .polytopes import dilate

    return dilate(P, k).lattice_points


def _first_disconnected_multidegree(P: LatticePolytope) -> Vec | None:
    points = P.lattice_points
    for c in sorted(_degree3_classes(points)):
        if not squarefree_divisor_complex(P, c).connected:
            return c
    return None


# ---------------------------------------------------------------------------
# squarefree divisor complexes at total degree 3
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorComplex:
    multidegree: Vec
    vertices: tuple[Vec, ...]
    edges: tuple[tuple[Vec, Vec], ...]
    components: tuple[tuple[Vec, ...], ...]

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1


def squarefree_divisor_complex(P: LatticePolytope, c: Vec) -> DivisorComplex:
    """Vertex/edge graph certifying degree-3 generators at multidegree c.

    Vertices are lattice points p with c - p a sum of two lattice points;
    edges join p, q when c - p - q is itself a lattice point.  A
    disconnected graph certifies a generator of the toric ideal in this
    multidegree.
    """
    c = tuple(c)
    points = P.lattice_points
    pset = P._point_set
    two_sums = set()
    for i in range(len(points)):
        for j in range(i, len(points)):
            two_sums.add(vadd(points[i], points[j]))

    vertices = [p for p in points if vsub(c, p) in two_sums]
    if not vertices:
        raise ValueError(
            f"{c} is not a sum of three lattice points of the polytope"
        )
    vset = set(vertices)
    adj: dict[Vec, list[Vec]] = {v: [] for v in vertices}
    edges = []
    for i, p in enumerate(vertices):
        rest = vsub(c, p)
        for q in vertices[i + 1 :]:
            if vsub(rest, q) in pset:
                adj[p].append(q)
                adj[q].append(p)
                edges.append((p, q))

    components = []
    unseen = set(vertices)
    while unseen:
        start = min(unseen)
        comp = [start]
        unseen.discard(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in unseen:
                    unseen.discard(y)
                    comp.append(y)
                    stack.append(y)
        components.append(tuple(sorted(comp)))
    components.sort()
    assert all(v in vset for v, _ in edges)
    return DivisorComplex(
        multidegree=c,
        vertices=tuple(vertices),
        edges=tuple(edges),
        components=tuple(components),
    )


def random_degree3_probe(
    P: LatticePolytope, seed, trials: int
) -> list[Vec]:
    """Sample height-3 multidegrees; return those with disconnected complex."""
    rng = random.Random(f"probe:{seed}")
    points = P.lattice_points
    n = len(points)
    found: list[Vec] = []
    seen = set()
    for _ in range(trials):
        c = vadd(
            vadd(points[rng.randrange(n)], points[rng.randrange(n)]),
            points[rng.randrange(n)],
        )
        if c in seen:
            continue
        seen.add(c)
        if not squarefree_divisor_complex(P, c).connected:
            found.append(c)
    return found
